//! Real polynomials in ascending coefficient order, Chebyshev polynomials of
//! the first kind and their extremal nodes.
//!
//! Chebyshev coefficients come from the binomial-sum formula evaluated in
//! exact integer arithmetic. Evaluation of a polynomial built by
//! [`chebyshev`] (or a scalar multiple of one) uses the three-term
//! recurrence, since the monomial form of `T_n` loses about `n/2` digits to
//! cancellation on `[-1, 1]`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A real polynomial `coeffs[0] + coeffs[1] x + ... + coeffs[d] x^d`.
///
/// The leading coefficient is nonzero unless the polynomial is identically
/// zero, in which case `coeffs == [0.0]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
    #[serde(skip)]
    chebyshev: Option<ChebyshevForm>,
}

/// `scale * T_order`, remembered so evaluation can use the recurrence.
#[derive(Clone, Copy, Debug, PartialEq)]
struct ChebyshevForm {
    order: usize,
    scale: f64,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self {
            coeffs,
            chebyshev: None,
        }
    }

    pub fn zero() -> Self {
        Self::new(vec![0.0])
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading_coefficient(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// `true` when this polynomial is a scalar multiple of a Chebyshev
    /// polynomial built by [`chebyshev`].
    pub fn is_chebyshev(&self) -> bool {
        self.chebyshev.is_some()
    }

    /// Evaluates the polynomial at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.chebyshev {
            Some(form) => form.scale * chebyshev_recurrence(form.order, x),
            None => self.horner(x),
        }
    }

    /// Horner evaluation of the monomial coefficients, regardless of how the
    /// polynomial was built.
    pub fn horner(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// The `k`-th formal derivative.
    pub fn derivative(&self, k: usize) -> Polynomial {
        if k > self.degree() {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, &c)| c * falling_factorial(i, k))
            .collect();
        Polynomial::new(coeffs)
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: f64) -> Polynomial {
        let mut out = Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect());
        if s != 0.0 {
            out.chebyshev = self.chebyshev.map(|form| ChebyshevForm {
                order: form.order,
                scale: form.scale * s,
            });
        }
        out
    }

    /// Polynomial in `x` obtained by substituting `s * x`.
    pub fn compose_scale(&self, s: f64) -> Polynomial {
        let mut power = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * power;
                power *= s;
                v
            })
            .collect();
        Polynomial::new(coeffs)
    }
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Polynomial::new(coeffs)
    }
}

/// Evaluates `p` at `x`.
pub fn evaluate(p: &Polynomial, x: f64) -> f64 {
    p.eval(x)
}

/// The `k`-th derivative of `p`.
pub fn derivative(p: &Polynomial, k: usize) -> Polynomial {
    p.derivative(k)
}

fn falling_factorial(i: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, m| acc * (i - m) as f64)
}

fn chebyshev_recurrence(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 0..n {
        let next = &row[k] * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(next);
    }
    row
}

/// Exact integer coefficients of `T_n` in ascending order.
pub fn chebyshev_integer_coeffs(n: usize) -> Vec<BigInt> {
    let half = n / 2;
    let row_n = binomial_row(n);
    let rows_j: Vec<Vec<BigUint>> = (0..=half).map(binomial_row).collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for k in 0..=half {
        let sum: BigUint = (k..=half).map(|j| &row_n[2 * j] * &rows_j[j][k]).sum();
        let signed = BigInt::from(sum);
        coeffs[n - 2 * k] = if k % 2 == 0 { signed } else { -signed };
    }
    coeffs
}

/// The degree-`n` Chebyshev polynomial of the first kind.
pub fn chebyshev(n: usize) -> Polynomial {
    let coeffs = chebyshev_integer_coeffs(n)
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    let mut p = Polynomial::new(coeffs);
    p.chebyshev = Some(ChebyshevForm { order: n, scale: 1.0 });
    p
}

/// Strictly increasing nodes inside an interval.
///
/// With `closed == true` nodes may sit on the interval endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeSet {
    nodes: Vec<f64>,
    interval: (f64, f64),
    closed: bool,
}

impl NodeSet {
    /// Sorts `nodes` and validates distinctness and containment.
    pub fn new(mut nodes: Vec<f64>, interval: (f64, f64), closed: bool) -> Result<Self> {
        let (lo, hi) = interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInterval { a: lo, b: hi });
        }
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("a node set needs at least one node".into()));
        }
        if let Some(&bad) = nodes.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite { x: bad, value: bad });
        }
        nodes.sort_by(f64::total_cmp);
        if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::CoincidentNodes(w[0]));
        }
        for &node in &nodes {
            let inside = if closed {
                lo <= node && node <= hi
            } else {
                lo < node && node < hi
            };
            if !inside {
                return Err(Error::NodeOutsideInterval { node, lo, hi });
            }
        }
        Ok(Self {
            nodes,
            interval,
            closed,
        })
    }

    /// Nodes on the closed hull `[min, max]` of the given points.
    pub fn from_points(nodes: Vec<f64>) -> Result<Self> {
        let lo = nodes.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = nodes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if nodes.len() == 1 {
            return Self::new(nodes, (lo - 1.0, hi + 1.0), true);
        }
        Self::new(nodes, (lo, hi), true)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// `n` for a set of `n + 1` nodes.
    pub fn order(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// The `n + 1` extrema `cos(j pi / n)` of `T_n`, sorted ascending.
///
/// The ascending index `i` corresponds to `j = n - i`, so
/// `T_n(nodes[i]) = (-1)^(i + n)`.
pub fn chebyshev_extrema(n: usize) -> Result<NodeSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("extrema need n >= 1".into()));
    }
    let mut nodes = vec![0.0; n + 1];
    for (i, slot) in nodes.iter_mut().enumerate() {
        // Symmetric construction keeps -x and x bitwise opposite.
        let j = n - i;
        *slot = if 2 * j == n {
            0.0
        } else if 2 * j < n {
            (j as f64 * std::f64::consts::PI / n as f64).cos()
        } else {
            -((i as f64) * std::f64::consts::PI / n as f64).cos()
        };
    }
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    NodeSet::new(nodes, (-1.0, 1.0), true)
}
