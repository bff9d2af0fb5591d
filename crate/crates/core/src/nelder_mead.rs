//! Derivative-free Nelder–Mead simplex minimizer.
//!
//! Uses the dimension-adaptive coefficients of Gao and Han, which behave
//! better than the classic (1, 2, 1/2, 1/2) set once the dimension grows past
//! a handful of variables.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop once the spread of simplex values is below `f_tol * (|f_best| + f_tol)`.
    pub f_tol: f64,
    /// ... and every vertex is within `x_tol` of the best vertex (per coordinate).
    pub x_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            f_tol: 1e-12,
            x_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` starting from a simplex built around `x0` with per-axis
/// offsets `step`.
pub fn minimize<F>(mut f: F, x0: &[f64], step: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(step.len(), n, "step length must match x0");
    let nf = n.max(1) as f64;
    let alpha = 1.0;
    let gamma = 1.0 + 2.0 / nf;
    let rho = 0.75 - 1.0 / (2.0 * nf);
    let sigma = 1.0 - 1.0 / nf;
    // n == 1 gives sigma == 0; fall back to the classic shrink.
    let sigma = if sigma > 0.0 { sigma } else { 0.5 };

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += if step[i] != 0.0 { step[i] } else { 1e-3 };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut converged = false;

    while evals < opts.max_evals {
        // Sort vertices by value; stable so earlier vertices win ties.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let best = values[0];
        let worst = values[n];
        let f_spread = worst - best;
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (f_spread <= opts.f_tol * (best.abs() + opts.f_tol)) && x_spread <= opts.x_tol {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }

        let along = |coef: f64, out: &mut [f64], worst_v: &[f64], centroid: &[f64]| {
            for ((o, c), w) in out.iter_mut().zip(centroid).zip(worst_v) {
                *o = c + coef * (c - w);
            }
        };

        along(alpha, &mut trial, &simplex[n], &centroid);
        let f_r = eval(&trial, &mut evals);

        if f_r < values[0] {
            along(gamma, &mut trial2, &simplex[n], &centroid);
            let f_e = eval(&trial2, &mut evals);
            if f_e < f_r {
                simplex[n].copy_from_slice(&trial2);
                values[n] = f_e;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = f_r;
            }
            continue;
        }
        if f_r < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = f_r;
            continue;
        }
        // Contraction: outside if the reflection improved on the worst point.
        let (coef, reference) = if f_r < values[n] {
            (alpha * rho, f_r)
        } else {
            (-rho, values[n])
        };
        along(coef, &mut trial2, &simplex[n], &centroid);
        let f_c = eval(&trial2, &mut evals);
        if f_c < reference || (coef < 0.0 && f_c <= reference) {
            simplex[n].copy_from_slice(&trial2);
            values[n] = f_c;
            continue;
        }
        // Shrink towards the best vertex.
        let best_v = simplex[0].clone();
        for i in 1..=n {
            for (x, b) in simplex[i].iter_mut().zip(&best_v) {
                *x = b + sigma * (*x - b);
            }
            values[i] = eval(&simplex[i], &mut evals);
        }
    }

    let (idx, &f) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("simplex is never empty");
    NelderMeadResult {
        x: simplex[idx].clone(),
        f,
        evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = minimize(
            |x| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &[0.5, 0.5],
            &NelderMeadOptions::default(),
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] + 2.0).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock() {
        let r = minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &[0.1, 0.1],
            &NelderMeadOptions {
                max_evals: 10_000,
                ..Default::default()
            },
        );
        assert!(r.f < 1e-10, "f = {}", r.f);
    }

    #[test]
    fn one_dimensional_and_budget() {
        let r = minimize(
            |x| (x[0] - 3.0).abs(),
            &[0.0],
            &[1.0],
            &NelderMeadOptions::default(),
        );
        assert!((r.x[0] - 3.0).abs() < 1e-6);
        let capped = minimize(
            |x| x[0] * x[0],
            &[10.0],
            &[1.0],
            &NelderMeadOptions {
                max_evals: 5,
                ..Default::default()
            },
        );
        assert!(!capped.converged);
        assert!(capped.evals <= 7);
    }
}
