//! Small derivative-free minimizers shared by the fitting and
//! phase-estimation code.

/// 2 - golden ratio, the interior-point fraction for golden-section search.
const INV_GOLD: f64 = 0.381_966_011_250_105_1;

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
/// Returns the located minimizer and its objective value.
pub(crate) fn golden_section_min<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol_x: f64,
) -> (f64, f64) {
    debug_assert!(lo <= hi);
    let mut a = lo + INV_GOLD * (hi - lo);
    let mut b = hi - INV_GOLD * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > tol_x {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = lo + INV_GOLD * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = hi - INV_GOLD * (hi - lo);
            fb = f(b);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[derive(Debug, Clone)]
pub(crate) struct NelderMeadResult {
    pub x: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder-Mead simplex minimization. Domain constraints are the
/// objective's responsibility (return a large penalty outside the box).
/// Stops when the objective spread falls below `tol_f`, the simplex
/// diameter falls below `tol_x`, or `max_eval` evaluations are spent.
pub(crate) fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    steps: &[f64],
    tol_f: f64,
    tol_x: f64,
    max_eval: usize,
) -> NelderMeadResult {
    assert_eq!(x0.len(), steps.len());
    let n = x0.len();
    let mut evals = 0usize;
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let fx0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), fx0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let fx = eval(&x, &mut evals);
        simplex.push((x, fx));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut converged = false;
    while evals < max_eval {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[n].1 - simplex[0].1;
        let diameter = (0..n)
            .map(|i| {
                let lo = simplex.iter().map(|(x, _)| x[i]).fold(f64::INFINITY, f64::min);
                let hi = simplex
                    .iter()
                    .map(|(x, _)| x[i])
                    .fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .fold(0.0_f64, f64::max);
        if spread.abs() <= tol_f || diameter <= tol_x {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();

        let reflect: Vec<f64> = (0..n)
            .map(|i| centroid[i] + alpha * (centroid[i] - worst.0[i]))
            .collect();
        let f_reflect = eval(&reflect, &mut evals);

        if f_reflect < simplex[0].1 {
            let expand: Vec<f64> = (0..n)
                .map(|i| centroid[i] + gamma * (reflect[i] - centroid[i]))
                .collect();
            let f_expand = eval(&expand, &mut evals);
            simplex[n] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[n - 1].1 {
            simplex[n] = (reflect, f_reflect);
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|i| centroid[i] + rho * (worst.0[i] - centroid[i]))
                .collect();
            let f_contract = eval(&contract, &mut evals);
            if f_contract < worst.1 {
                simplex[n] = (contract, f_contract);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    for i in 0..n {
                        v.0[i] = best[i] + sigma * (v.0[i] - best[i]);
                    }
                    v.1 = eval(&v.0, &mut evals);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    NelderMeadResult {
        x: simplex[0].0.clone(),
        evaluations: evals,
        converged,
    }
}

/// Coordinate-wise golden-section polish around `x`. Sweeps the axes
/// with shrinking search windows until no axis moves by more than
/// `tol_x`, tightening a Nelder-Mead solution along correlated valleys.
pub(crate) fn polish_axes<F: Fn(&[f64]) -> f64>(
    f: F,
    x: &mut [f64],
    window: &[f64],
    tol_x: f64,
) -> f64 {
    let mut fx = f(x);
    let mut win = window.to_vec();
    for _ in 0..60 {
        let mut max_move = 0.0f64;
        for i in 0..x.len() {
            let xi = x[i];
            let g = |t: f64| {
                let mut y = x.to_vec();
                y[i] = t;
                f(&y)
            };
            let (best, fbest) = golden_section_min(g, xi - win[i], xi + win[i], tol_x);
            if fbest < fx {
                x[i] = best;
                fx = fbest;
            }
            let moved = (x[i] - xi).abs();
            max_move = max_move.max(moved);
            win[i] = (4.0 * moved).clamp(64.0 * tol_x, window[i]);
        }
        if max_move <= tol_x {
            break;
        }
    }
    fx
}
