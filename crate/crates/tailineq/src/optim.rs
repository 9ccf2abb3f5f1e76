//! Derivative-free minimization: Nelder–Mead simplex with deterministic
//! multi-start.
//!
//! Likelihood fits run the search in an unconstrained reparameterized space
//! (log scales, logit-style maps), so the objective is responsible for
//! mapping coordinates back to natural parameters. Infeasible points must
//! evaluate to `f64::INFINITY`, never NaN.

/// Convergence thresholds and iteration cap for one simplex run.
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadConfig {
    /// Stop when every vertex is within this distance (infinity norm) of the best vertex.
    pub x_tol: f64,
    /// Stop when the objective spread across the simplex is below this.
    pub f_tol: f64,
    pub max_iterations: usize,
    /// Offset used to build the initial simplex around a starting point.
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            x_tol: 1e-8,
            f_tol: 1e-10,
            max_iterations: 10_000,
            initial_step: 0.5,
        }
    }
}

/// Result of one simplex run (or of a multi-start sweep).
#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Index of the winning start in a multi-start sweep; 0 for single runs.
    pub start_index: usize,
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimize `f` from a single starting point.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], cfg: &NelderMeadConfig) -> Minimum {
    let dim = x0.len();
    assert!(dim >= 1, "objective must have at least one coordinate");

    // Initial simplex: x0 plus one offset vertex per coordinate.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), sanitize(f(x0))));
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += cfg.initial_step;
        let fv = sanitize(f(&v));
        simplex.push((v, fv));
    }

    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };
    order(&mut simplex);

    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iterations {
        iterations += 1;

        let spread_f = simplex[dim].1 - simplex[0].1;
        let spread_x = simplex[1..]
            .iter()
            .flat_map(|(v, _)| {
                v.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b).abs())
            })
            .fold(0.0_f64, f64::max);
        if spread_x < cfg.x_tol && spread_f.abs() < cfg.f_tol {
            converged = true;
            break;
        }

        // Centroid of all vertices except the worst.
        let mut centroid = vec![0.0; dim];
        for (v, _) in simplex.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(v.iter()) {
                *c += x / dim as f64;
            }
        }

        let worst = simplex[dim].clone();
        let at = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst.0.iter())
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        // Reflection.
        let xr = at(1.0);
        let fr = sanitize(f(&xr));

        if fr < simplex[0].1 {
            // Expansion.
            let xe = at(2.0);
            let fe = sanitize(f(&xe));
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
        } else {
            // Contraction: outside if the reflected point improved on the
            // worst vertex, inside otherwise.
            let (xc, fc) = if fr < worst.1 {
                let xc = at(0.5);
                let fc = sanitize(f(&xc));
                (xc, fc)
            } else {
                let xc = at(-0.5);
                let fc = sanitize(f(&xc));
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[dim] = (xc, fc);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for (v, fv) in simplex.iter_mut().skip(1) {
                    for (x, b) in v.iter_mut().zip(best.iter()) {
                        *x = b + 0.5 * (*x - b);
                    }
                    *fv = sanitize(f(v));
                }
            }
        }
        order(&mut simplex);
    }

    Minimum {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        iterations,
        converged,
    start_index: 0,
    }
}

/// Minimize `f` from several deterministic starting points sequentially.
///
/// The winner is the run with the lowest objective; on values equal within
/// 1e-12 the earliest start index wins, so a parallel evaluation of the
/// starts would have to reproduce exactly this outcome.
pub fn nelder_mead_multistart<F: Fn(&[f64]) -> f64>(
    f: &F,
    starts: &[Vec<f64>],
    cfg: &NelderMeadConfig,
) -> Minimum {
    assert!(!starts.is_empty(), "need at least one starting point");
    let mut best: Option<Minimum> = None;
    for (idx, start) in starts.iter().enumerate() {
        let mut m = nelder_mead(f, start, cfg);
        m.start_index = idx;
        best = match best {
            None => Some(m),
            Some(b) if m.value < b.value - 1e-12 => Some(m),
            Some(b) => Some(b),
        };
    }
    best.unwrap()
}
