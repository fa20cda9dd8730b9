//! q-Hahn polynomials `Q_l(n,s,t;u)`, built by exact Gram-Schmidt on the
//! monomials `1, [u], [u]^2, ...` under the weights `w(n,s,t;i)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::qcombinat::{bracket, hahn_weight_unchecked, Exact, FieldOrder};

/// `Q_l(u) = Σ_j coeffs[j] · [u]^j`, normalized so that `Q_l(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HahnPolynomial {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub q: FieldOrder,
    coeffs: Vec<Exact>,
}

impl HahnPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients in the bracket basis, constant term first.
    pub fn coeffs(&self) -> &[Exact] {
        &self.coeffs
    }

    /// Value at `[u]` given directly.
    pub fn eval_bracket(&self, x: &Exact) -> Exact {
        self.coeffs.iter().rev().fold(Exact::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, u: usize) -> Exact {
        self.eval_bracket(&bracket(u, self.q))
    }
}

/// Free-function form of [`HahnPolynomial::eval`].
pub fn hahn_eval(p: &HahnPolynomial, u: usize) -> Exact {
    p.eval(u)
}

/// Orthogonality nodes `[i]` and weights `w(n,s,t;i)` for `0 <= i <= min(s, n-t)`.
pub fn nodes_and_weights(n: usize, s: usize, t: usize, q: FieldOrder) -> Vec<(Exact, BigInt)> {
    (0..=s.min(n - t))
        .map(|i| (bracket(i, q), hahn_weight_unchecked(n, s, t, i, q)))
        .collect()
}

/// The whole family `Q_0, ..., Q_L` with `L = min(s, n - t)`.
pub fn hahn_family(n: usize, s: usize, t: usize, q: FieldOrder) -> Result<Vec<HahnPolynomial>> {
    if s > t || t > n {
        return Err(invalid!("q-Hahn family needs 0 <= s <= t <= n, got n={n} s={s} t={t}"));
    }
    let nw = nodes_and_weights(n, s, t, q);
    let weights: Vec<Exact> = nw.iter().map(|(_, w)| Exact::from_integer(w.clone())).collect();
    let nodes: Vec<Exact> = nw.into_iter().map(|(x, _)| x).collect();
    let dot = |a: &[Exact], b: &[Exact]| -> Exact {
        let mut acc = Exact::zero();
        for ((w, x), y) in weights.iter().zip(a).zip(b) {
            acc += w * x * y;
        }
        acc
    };

    // Each member is carried both as coefficients and as values on the nodes.
    let mut basis: Vec<(Vec<Exact>, Vec<Exact>, Exact)> = Vec::with_capacity(nodes.len());
    let mut family = Vec::with_capacity(nodes.len());
    for degree in 0..nodes.len() {
        let mut coeffs = vec![Exact::zero(); degree + 1];
        coeffs[degree] = Exact::one();
        let monomial: Vec<Exact> = nodes.iter().map(|x| num_traits::pow(x.clone(), degree)).collect();
        let mut values = monomial.clone();
        for (pc, pv, norm) in &basis {
            let proj = dot(&monomial, pv) / norm;
            for (c, p) in coeffs.iter_mut().zip(pc) {
                *c -= &proj * p;
            }
            for (v, p) in values.iter_mut().zip(pv) {
                *v -= &proj * p;
            }
        }
        let norm = dot(&values, &values);
        // zeros of an orthogonal polynomial lie strictly inside the node
        // range and node 0 is [0] = 0, so the constant term never vanishes
        let scale = coeffs[0].recip();
        let coeffs: Vec<Exact> = coeffs.iter().map(|c| c * &scale).collect();
        values.iter_mut().for_each(|v| *v *= &scale);
        let norm = norm * &scale * &scale;
        family.push(HahnPolynomial { n, s, t, q, coeffs: coeffs.clone() });
        basis.push((coeffs, values, norm));
    }
    Ok(family)
}

/// A single member `Q_l(n,s,t;·)`; `l` must not exceed `min(s, n-t)`.
pub fn hahn_polynomial(n: usize, s: usize, t: usize, l: usize, q: FieldOrder) -> Result<HahnPolynomial> {
    if s <= t && t <= n && l > s.min(n - t) {
        return Err(invalid!("degree {l} exceeds min(s, n-t) = {}", s.min(n - t)));
    }
    let mut family = hahn_family(n, s, t, q)?;
    family.truncate(l + 1);
    Ok(family.pop().expect("family has at least one member"))
}
