//! Divided differences, the coefficients of the generalised mean value
//! theorem and the minimal-node identity for Chebyshev extrema.
//!
//! For ascending nodes `x_0 < ... < x_n`,
//!
//! ```text
//! f[x_0, ..., x_n] = sum_j (-1)^(j+n) prod_{k != j} |x_k - x_j|^-1 f(x_j)
//! ```
//!
//! and `n! f[x_0, ..., x_n] = f^(n)(zeta)` for some `zeta` in the node hull.
//! On `[-1, 1]` the weight sum `sum_j prod_{k != j} |x_k - x_j|^-1` is at
//! least `2^(n-1)`, with equality exactly at the Chebyshev extrema.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::poly::{chebyshev_extrema, NodeSet};

/// Node counts above this switch weight products to log space.
const LOG_SPACE_ORDER: usize = 12;

/// Coefficients `c_j` with `f^(n)(zeta) = sum_j c_j f(x_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanValueCoefficients {
    pub c: Vec<f64>,
    pub nodes: NodeSet,
    pub order: usize,
}

impl MeanValueCoefficients {
    /// `sum_j c_j f(x_j)`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.c.iter().zip(self.nodes.nodes()).map(|(c, &x)| c * f(x)).sum()
    }
}

fn alternating_sign(j: usize, n: usize) -> f64 {
    if (j + n).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `ln prod_{k != j} |x_k - x_j|` for each `j`.
fn log_products(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| (xk - xj).abs().ln())
                .sum()
        })
        .collect()
}

/// `prod_{k != j} |x_k - x_j|^-1` for each `j`.
pub fn inverse_products(nodes: &NodeSet) -> Vec<f64> {
    let xs = nodes.nodes();
    if nodes.order() > LOG_SPACE_ORDER {
        return log_products(xs).into_iter().map(|s| (-s).exp()).collect();
    }
    xs.iter()
        .enumerate()
        .map(|(j, &xj)| {
            let prod: f64 = xs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| (xk - xj).abs())
                .product();
            1.0 / prod
        })
        .collect()
}

/// The `n`-th divided difference by the Newton recursion.
pub fn divided_difference(f: impl Fn(f64) -> f64, nodes: &NodeSet) -> Result<f64> {
    let xs = nodes.nodes();
    let mut table: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    for level in 1..xs.len() {
        for i in 0..xs.len() - level {
            let den = xs[i] - xs[i + level];
            if den == 0.0 {
                return Err(Error::CoincidentNodes(xs[i]));
            }
            table[i] = (table[i] - table[i + 1]) / den;
        }
    }
    Ok(table[0])
}

/// The `n`-th divided difference as an alternating weighted sum.
pub fn divided_difference_explicit(f: impl Fn(f64) -> f64, nodes: &NodeSet) -> Result<f64> {
    let n = nodes.order();
    Ok(inverse_products(nodes)
        .iter()
        .zip(nodes.nodes())
        .enumerate()
        .map(|(j, (w, &x))| alternating_sign(j, n) * w * f(x))
        .sum())
}

/// `c_j = (-1)^(j+n) n! prod_{k != j} |x_k - x_j|^-1`.
pub fn mean_value_coefficients(nodes: &NodeSet) -> Result<MeanValueCoefficients> {
    let n = nodes.order();
    let c = if n > LOG_SPACE_ORDER {
        let ln_fact = ln_gamma(n as f64 + 1.0);
        log_products(nodes.nodes())
            .into_iter()
            .enumerate()
            .map(|(j, s)| alternating_sign(j, n) * (ln_fact - s).exp())
            .collect()
    } else {
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        inverse_products(nodes)
            .into_iter()
            .enumerate()
            .map(|(j, w)| alternating_sign(j, n) * fact * w)
            .collect()
    };
    Ok(MeanValueCoefficients {
        c,
        nodes: nodes.clone(),
        order: n,
    })
}

/// `sum_j prod_{k != j} |x_k - x_j|^-1` for nodes in `[-1, 1]`.
pub fn minimal_node_sum(nodes: &NodeSet) -> Result<f64> {
    if let Some(&node) = nodes.nodes().iter().find(|x| x.abs() > 1.0) {
        return Err(Error::NodeOutsideInterval {
            node,
            lo: -1.0,
            hi: 1.0,
        });
    }
    Ok(inverse_products(nodes).iter().sum())
}

/// Sup-norm distance between two sorted node lists of equal length.
fn node_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn draw_nodes(rng: &mut ChaCha8Rng, centre: Option<&[f64]>, count: usize, width: f64) -> Option<NodeSet> {
    let pts: Vec<f64> = match centre {
        Some(c) => c
            .iter()
            .map(|&x| (x + rng.gen_range(-width..=width)).clamp(-1.0, 1.0))
            .collect(),
        None => (0..count).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
    };
    NodeSet::new(pts, (-1.0, 1.0), true).ok()
}

/// Empirical check that no node set in `[-1, 1]` other than the Chebyshev
/// extrema reaches the weight sum `2^(n-1)`.
///
/// Half of the trials are uniform random node sets, the other half are
/// perturbations of the extrema by at most `perturbation` per node.
/// Coincident draws are redrawn. `measured` is the smallest sum over trials
/// farther than `1e-9` from the extrema.
pub fn uniqueness_probe(n: usize, trials: usize, perturbation: f64, rng_seed: u64) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("uniqueness probe needs n >= 1".into()));
    }
    if !(perturbation > 0.0) {
        return Err(Error::InvalidArgument("perturbation must be positive".into()));
    }
    let extrema = chebyshev_extrema(n)?;
    let target = 2f64.powi(n as i32 - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);

    let mut min_far = f64::INFINITY;
    let mut min_far_distance = f64::NAN;
    let mut min_any = f64::INFINITY;
    let mut violations = 0usize;
    let mut near = 0usize;
    for t in 0..trials {
        let centre = (t % 2 == 1).then(|| extrema.nodes());
        let nodes = loop {
            if let Some(s) = draw_nodes(&mut rng, centre, n + 1, perturbation) {
                break s;
            }
        };
        let sum = minimal_node_sum(&nodes)?;
        let dist = node_distance(nodes.nodes(), extrema.nodes());
        min_any = min_any.min(sum);
        if dist > 1e-9 {
            if sum <= target - 1e-9 {
                violations += 1;
            }
            if sum < min_far {
                min_far = sum;
                min_far_distance = dist;
            }
        } else {
            near += 1;
        }
    }

    let mut report = BoundReport::lower(
        "chebyshev extrema minimise the divided-difference weight sum",
        target,
        min_far,
    );
    report.pass = report.pass && violations == 0;
    report.details = BTreeMap::from([
        ("trials".to_string(), trials as f64),
        ("violations".to_string(), violations as f64),
        ("near_extrema_trials".to_string(), near as f64),
        ("min_sum_any_trial".to_string(), min_any),
        ("distance_at_min".to_string(), min_far_distance),
        ("perturbation".to_string(), perturbation),
    ]);
    report.notes = format!("n = {n}; seed = {rng_seed}");
    Ok(report)
}

/// Finds `zeta` in `(x_0, x_n)` with `f_n(zeta) = sum_j c_j f(x_j)`.
///
/// `f_n` must be the `n`-th derivative of `f`. A dense scan brackets a sign
/// change of the residual, then bisection refines it.
pub fn find_mean_value_point(f: impl Fn(f64) -> f64, f_n: impl Fn(f64) -> f64, nodes: &NodeSet) -> Result<f64> {
    const SCAN: usize = 10_000;
    const RESIDUAL_TOL: f64 = 1e-9;
    if nodes.order() == 0 {
        return Err(Error::InvalidArgument("need at least two nodes".into()));
    }
    let target = mean_value_coefficients(nodes)?.apply(&f);
    let residual = |x: f64| f_n(x) - target;
    let xs = nodes.nodes();
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    let step = (hi - lo) / SCAN as f64;

    let mut prev_x = lo + 0.5 * step;
    let mut prev = residual(prev_x);
    if prev.abs() < RESIDUAL_TOL {
        return Ok(prev_x);
    }
    for i in 1..SCAN {
        let x = lo + (i as f64 + 0.5) * step;
        let r = residual(x);
        if r.abs() < RESIDUAL_TOL {
            return Ok(x);
        }
        if r.signum() != prev.signum() {
            let (mut a, mut b) = (prev_x, x);
            let sign_a = prev.signum();
            while b - a > 1e-12 {
                let m = 0.5 * (a + b);
                let rm = residual(m);
                if rm == 0.0 {
                    return Ok(m);
                }
                if rm.signum() == sign_a {
                    a = m;
                } else {
                    b = m;
                }
            }
            let zeta = if residual(a).abs() <= residual(b).abs() { a } else { b };
            if residual(zeta).abs() < RESIDUAL_TOL {
                return Ok(zeta);
            }
            return Err(Error::Verification(format!(
                "bisection stalled with residual {:e} at {zeta}",
                residual(zeta)
            )));
        }
        prev_x = x;
        prev = r;
    }
    Err(Error::Verification(
        "no sign change of f_n - sum c_j f(x_j) found; is f_n the n-th derivative of f?".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev;

    fn ns(v: &[f64]) -> NodeSet {
        NodeSet::from_points(v.to_vec()).unwrap()
    }

    // exp on {0, 0.5, 1}: (e - 2 e^0.5 + 1) / (2 * 0.25), frozen from the closed form
    const EXP_SECOND_DIFFERENCE: f64 = 0.841_678_574_117_577_9;

    #[test]
    fn recursive_examples() {
        assert!((divided_difference(|x| x * x, &ns(&[0.0, 1.0, 2.0])).unwrap() - 1.0).abs() < 1e-15);
        let e = divided_difference(f64::exp, &ns(&[0.0, 0.5, 1.0])).unwrap();
        assert!((e - EXP_SECOND_DIFFERENCE).abs() < 1e-12);
        assert!((e - 0.84168).abs() < 1e-4);
        let t3 = chebyshev(3);
        let v = divided_difference(|x| t3.eval(x), &chebyshev_extrema(3).unwrap()).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_examples() {
        assert_eq!(
            divided_difference_explicit(|_| 1.0, &ns(&[0.0, 1.0, 2.0])).unwrap(),
            0.0
        );
        let e = divided_difference_explicit(f64::exp, &ns(&[0.0, 0.5, 1.0])).unwrap();
        assert!((e - EXP_SECOND_DIFFERENCE).abs() < 1e-12);
        let v = divided_difference_explicit(|x| x * x * x, &ns(&[-1.0, 0.0, 2.0, 5.0])).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(mean_value_coefficients(&ns(&[0.0, 1.0])).unwrap().c, vec![-1.0, 1.0]);
        assert_eq!(
            mean_value_coefficients(&ns(&[-1.0, 0.0, 1.0])).unwrap().c,
            vec![1.0, -2.0, 1.0]
        );
        let c = mean_value_coefficients(&chebyshev_extrema(4).unwrap()).unwrap();
        let total: f64 = c.c.iter().map(|v| v.abs()).sum();
        assert!((total - 192.0).abs() < 1e-10);
        // signs alternate along ascending nodes
        assert!(c.c.windows(2).all(|w| w[0] * w[1] < 0.0));
    }

    #[test]
    fn log_space_path_matches_direct_products() {
        let nodes = chebyshev_extrema(14).unwrap();
        let direct: Vec<f64> = nodes
            .nodes()
            .iter()
            .enumerate()
            .map(|(j, &xj)| {
                let p: f64 = nodes
                    .nodes()
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &xk)| (xk - xj).abs())
                    .product();
                1.0 / p
            })
            .collect();
        for (a, b) in inverse_products(&nodes).iter().zip(&direct) {
            assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }

    #[test]
    fn minimal_sum_examples() {
        assert!((minimal_node_sum(&chebyshev_extrema(2).unwrap()).unwrap() - 2.0).abs() < 1e-15);
        assert!((minimal_node_sum(&chebyshev_extrema(3).unwrap()).unwrap() - 4.0).abs() < 1e-13);
        // direct evaluation: 2 * (1/(0.6*1.4*2) + 1/(0.6*0.8*1.4))
        let off = minimal_node_sum(&ns(&[-1.0, -0.4, 0.4, 1.0])).unwrap();
        let expected = 2.0 * (1.0 / (0.6 * 1.4 * 2.0) + 1.0 / (0.6 * 0.8 * 1.4));
        assert!((off - expected).abs() < 1e-12);
        assert!(off > 4.0);
        assert!(matches!(
            minimal_node_sum(&ns(&[-1.5, 0.0, 1.0])),
            Err(Error::NodeOutsideInterval { .. })
        ));
    }

    #[test]
    fn probe_order_one_is_analytic() {
        let r = uniqueness_probe(1, 2000, 0.1, 7).unwrap();
        assert!(r.pass);
        assert!(r.measured.unwrap() >= 1.0);
        assert_eq!(r.details["violations"], 0.0);
    }

    #[test]
    fn probe_rejects_bad_arguments() {
        assert!(uniqueness_probe(0, 10, 0.1, 1).is_err());
        assert!(uniqueness_probe(3, 10, 0.0, 1).is_err());
    }

    #[test]
    fn probe_is_deterministic() {
        let a = uniqueness_probe(4, 500, 0.02, 99).unwrap();
        let b = uniqueness_probe(4, 500, 0.02, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_value_point_examples() {
        let z = find_mean_value_point(|x| x * x, |_| 2.0, &ns(&[0.0, 1.0, 2.0])).unwrap();
        assert!(z > 0.0 && z < 2.0);

        let nodes = ns(&[0.0, 0.8, 1.6, 2.4]);
        let target = mean_value_coefficients(&nodes).unwrap().apply(f64::sin);
        let z = find_mean_value_point(f64::sin, |x| -x.cos(), &nodes).unwrap();
        assert!(z > 0.0 && z < 2.4);
        assert!((-z.cos() - target).abs() < 1e-9);

        let t4 = chebyshev(4);
        let z = find_mean_value_point(|x| t4.eval(x), |_| 192.0, &chebyshev_extrema(4).unwrap()).unwrap();
        assert!(z > -1.0 && z < 1.0);
    }

    #[test]
    fn mean_value_point_reports_wrong_derivative() {
        let err = find_mean_value_point(|x| x * x, |_| 5.0, &ns(&[0.0, 1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::Verification(_)));
    }
}
