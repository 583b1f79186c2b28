//! Nelder–Mead simplex minimization with dimension-adaptive coefficients.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    /// Stop a simplex once `f_worst − f_best` drops to this value.
    pub ftol: f64,
    /// Cap on simplex iterations, summed over all re-seeded simplices.
    pub max_iterations: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            ftol: 1e-10,
            max_iterations: 5000,
            initial_step: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

struct Coefficients {
    reflect: f64,
    expand: f64,
    contract: f64,
    shrink: f64,
}

impl Coefficients {
    fn for_dim(n: usize) -> Self {
        let n = n as f64;
        Self {
            reflect: 1.0,
            expand: 1.0 + 2.0 / n,
            contract: 0.75 - 1.0 / (2.0 * n),
            shrink: 1.0 - 1.0 / n,
        }
    }
}

fn blend_into(out: &mut [f64], from: &[f64], to: &[f64], t: f64) {
    for ((o, a), b) in out.iter_mut().zip(from).zip(to) {
        *o = a + t * (b - a);
    }
}

/// One simplex run from `x0`. Returns (best point, best value, iterations,
/// converged).
fn run_simplex<F>(f: &mut F, x0: &[f64], step: f64, ftol: f64, max_iterations: usize) -> (Vec<f64>, f64, usize, bool)
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let k = Coefficients::for_dim(n);
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut reflected = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut anchor = vec![0.0; n];

    let mut iterations = 0;
    loop {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        if vals[worst] - vals[best] <= ftol {
            return (pts[best].clone(), vals[best], iterations, true);
        }
        if iterations >= max_iterations {
            return (pts[best].clone(), vals[best], iterations, false);
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&pts[idx]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        blend_into(&mut reflected, &centroid, &pts[worst], -k.reflect);
        let fr = f(&reflected);
        if fr < vals[best] {
            blend_into(&mut trial, &centroid, &pts[worst], -k.reflect * k.expand);
            let fe = f(&trial);
            if fe < fr {
                pts[worst].copy_from_slice(&trial);
                vals[worst] = fe;
            } else {
                pts[worst].copy_from_slice(&reflected);
                vals[worst] = fr;
            }
            continue;
        }
        if fr < vals[second] {
            pts[worst].copy_from_slice(&reflected);
            vals[worst] = fr;
            continue;
        }
        let t = if fr < vals[worst] { -k.reflect * k.contract } else { k.contract };
        blend_into(&mut trial, &centroid, &pts[worst], t);
        let fc = f(&trial);
        if fc < vals[worst].min(fr) {
            pts[worst].copy_from_slice(&trial);
            vals[worst] = fc;
            continue;
        }
        anchor.copy_from_slice(&pts[best]);
        for idx in 0..=n {
            if idx != best {
                blend_into(&mut trial, &anchor, &pts[idx], k.shrink);
                pts[idx].copy_from_slice(&trial);
                vals[idx] = f(&pts[idx]);
            }
        }
    }
}

/// Minimize `f` starting from `x0`.
///
/// A collapsed simplex can report convergence away from a minimum, so after
/// each converged run a fresh simplex is built around the best point. The
/// search ends once a fresh simplex fails to improve by more than `ftol`, or
/// the iteration cap is reached.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut iterations = 0;
    let mut step = opts.initial_step;
    loop {
        let budget = opts.max_iterations - iterations;
        let (nx, nf, used, converged) = run_simplex(&mut f, &x, step, opts.ftol, budget);
        iterations += used;
        let improvement = fx - nf;
        if nf < fx {
            x = nx;
            fx = nf;
        }
        if !converged || iterations >= opts.max_iterations {
            return SimplexResult {
                x,
                f: fx,
                iterations,
                converged: false,
            };
        }
        if improvement <= opts.ftol {
            return SimplexResult {
                x,
                f: fx,
                iterations,
                converged: true,
            };
        }
        step = (step * 0.5).max(1e-3);
    }
}
