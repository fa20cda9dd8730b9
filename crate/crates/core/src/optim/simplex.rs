//! Dense two-phase primal simplex with Bland's rule, generic over the
//! arithmetic. With [`Exact`] scalars the optimum comes with a dual
//! certificate that is checked without tolerance.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::optim::lp::{LinearProgram, Sense};
use crate::qcombinat::Exact;

/// Scalar arithmetic the tableau needs.
pub trait Field:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_exact(v: &Exact) -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_nonzero(&self) -> bool {
        self.is_pos() || self.is_neg()
    }
}

impl Field for Exact {
    fn zero() -> Self {
        <Exact as Zero>::zero()
    }
    fn one() -> Self {
        <Exact as num_traits::One>::one()
    }
    fn from_exact(v: &Exact) -> Self {
        v.clone()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

const FLOAT_EPS: f64 = 1e-9;

/// Plain doubles with an absolute zero threshold. Good enough for timing
/// comparisons; on models whose coefficients span ten orders of magnitude
/// it can stop at a wrong vertex, so bounds always go through [`Exact`].
impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_exact(v: &Exact) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_EPS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    Float,
}

/// Optimal primal point and row duals. For a maximization the dual of a
/// `<=` row is nonnegative, of a `>=` row nonpositive.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<F> {
    pub value: F,
    pub x: Vec<F>,
    pub duals: Vec<F>,
    pub pivots: usize,
}

struct Tableau<F> {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    a: Vec<Vec<F>>,
    basis: Vec<usize>,
    cols: usize,
    /// Columns allowed to enter the basis.
    enterable: Vec<bool>,
    pivots: usize,
}

impl<F: Field> Tableau<F> {
    fn rhs(&self, r: usize) -> &F {
        &self.a[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || !row[c].is_nonzero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if pv.is_nonzero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn reduced_cost(&self, cost: &[F], j: usize) -> F {
        let mut z = F::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_nonzero() && self.a[i][j].is_nonzero() {
                z = z + cost[b].clone() * self.a[i][j].clone();
            }
        }
        cost[j].clone() - z
    }

    /// Maximizes `cost · x` from the current basis.
    fn optimize(&mut self, cost: &[F]) -> Result<()> {
        loop {
            let entering = (0..self.cols)
                .filter(|&j| self.enterable[j] && !self.basis.contains(&j))
                .find(|&j| self.reduced_cost(cost, j).is_pos());
            let Some(c) = entering else { return Ok(()) };
            let mut leave: Option<(usize, F)> = None;
            for r in 0..self.a.len() {
                if !self.a[r][c].is_pos() {
                    continue;
                }
                let ratio = self.rhs(r).clone() / self.a[r][c].clone();
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (!(*best < ratio) && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return Err(Error::Unbounded),
            }
        }
    }
}

/// Solves `lp` (maximize, `x >= 0`) by two-phase simplex.
pub fn simplex<F: Field>(lp: &LinearProgram) -> Result<LpSolution<F>> {
    let n = lp.num_vars();
    let m = lp.rows.len();
    // rows are flipped so the right-hand side is nonnegative
    let mut sign = vec![F::one(); m];
    let mut senses = Vec::with_capacity(m);
    for (r, row) in lp.rows.iter().enumerate() {
        let mut sense = row.sense;
        if row.rhs.is_negative() {
            sign[r] = -F::one();
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        senses.push(sense);
    }
    let surplus: Vec<usize> = (0..m).filter(|&r| senses[r] == Sense::Ge).collect();
    // column layout: structural | surplus | one unit column per row
    let unit0 = n + surplus.len();
    let cols = unit0 + m;
    let mut a = vec![vec![F::zero(); cols + 1]; m];
    for (r, row) in lp.rows.iter().enumerate() {
        for (j, c) in &row.coeffs {
            a[r][*j] = a[r][*j].clone() + sign[r].clone() * F::from_exact(c);
        }
        a[r][cols] = sign[r].clone() * F::from_exact(&row.rhs);
        a[r][unit0 + r] = F::one();
    }
    for (s, &r) in surplus.iter().enumerate() {
        a[r][n + s] = -F::one();
    }
    let artificial: Vec<bool> = (0..cols).map(|j| j >= unit0 && senses[j - unit0] != Sense::Le).collect();
    let mut tab = Tableau {
        a,
        basis: (unit0..cols).collect(),
        cols,
        enterable: vec![true; cols],
        pivots: 0,
    };

    if artificial.iter().any(|&x| x) {
        let cost: Vec<F> = artificial.iter().map(|&art| if art { -F::one() } else { F::zero() }).collect();
        tab.optimize(&cost)?;
        let infeasibility = (0..m)
            .filter(|&r| artificial[tab.basis[r]])
            .fold(F::zero(), |acc, r| acc + tab.rhs(r).clone());
        if infeasibility.is_pos() {
            return Err(Error::Infeasible);
        }
        // drive zero-level artificials out where possible
        for r in 0..m {
            if !artificial[tab.basis[r]] {
                continue;
            }
            if let Some(c) = (0..unit0).find(|&j| tab.a[r][j].is_nonzero() && !tab.basis.contains(&j)) {
                tab.pivot(r, c);
            }
        }
        for (j, art) in artificial.iter().enumerate() {
            if *art {
                tab.enterable[j] = false;
            }
        }
    }

    let mut cost = vec![F::zero(); cols];
    for (j, c) in lp.objective.iter().enumerate() {
        cost[j] = F::from_exact(c);
    }
    tab.optimize(&cost)?;

    let mut x = vec![F::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs(r).clone();
        }
    }
    // y_r = c_B · (B^{-1})_{:, r}, and column unit0 + r of the tableau is B^{-1} e_r
    let duals = (0..m)
        .map(|r| {
            let mut y = F::zero();
            for (i, &b) in tab.basis.iter().enumerate() {
                y = y + cost[b].clone() * tab.a[i][unit0 + r].clone();
            }
            y * sign[r].clone()
        })
        .collect();
    let value = lp
        .objective
        .iter()
        .zip(&x)
        .fold(F::zero(), |acc, (c, v)| acc + F::from_exact(c) * v.clone());
    Ok(LpSolution { value, x, duals, pivots: tab.pivots })
}

/// Exact simplex followed by certificate verification.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution<Exact>> {
    let sol = simplex::<Exact>(lp)?;
    if !certify(lp, &sol) {
        return Err(Error::Solver("exact simplex produced an uncertified optimum".into()));
    }
    Ok(sol)
}

/// Checks primal feasibility, dual feasibility and equality of the two
/// objective values, all exactly.
pub fn certify(lp: &LinearProgram, sol: &LpSolution<Exact>) -> bool {
    if !lp.is_feasible(&sol.x) || sol.duals.len() != lp.rows.len() {
        return false;
    }
    let signs_ok = lp.rows.iter().zip(&sol.duals).all(|(row, y)| match row.sense {
        Sense::Le => !y.is_negative(),
        Sense::Ge => !y.is_positive(),
        Sense::Eq => true,
    });
    if !signs_ok {
        return false;
    }
    let mut reduced: Vec<Exact> = lp.objective.clone();
    for (row, y) in lp.rows.iter().zip(&sol.duals) {
        for (j, c) in &row.coeffs {
            reduced[*j] -= c * y;
        }
    }
    if reduced.iter().any(|r| r.is_positive()) {
        return false;
    }
    let dual_value: Exact = lp.rows.iter().zip(&sol.duals).map(|(row, y)| &row.rhs * y).sum();
    dual_value == sol.value && lp.objective_value(&sol.x) == sol.value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::lp::{LinearRow, RowTag};
    use alloc::string::ToString;
    use num_bigint::BigInt;

    fn ex(v: i64) -> Exact {
        Exact::from_integer(BigInt::from(v))
    }

    fn two_var() -> LinearProgram {
        let mut lp = LinearProgram::new(vec!["x1".to_string(), "x2".to_string()], vec![ex(1), ex(1)]);
        lp.push_row(LinearRow::new(RowTag::Other, 0, vec![(0, ex(1))], Sense::Le, ex(3)));
        lp.push_row(LinearRow::new(RowTag::Other, 1, vec![(1, ex(1))], Sense::Le, ex(4)));
        lp
    }

    #[test]
    fn box_lp() {
        let sol = simplex_solve(&two_var()).unwrap();
        assert_eq!(sol.value, ex(7));
        assert_eq!(sol.x, vec![ex(3), ex(4)]);
        assert_eq!(sol.duals, vec![ex(1), ex(1)]);
        let f = simplex::<f64>(&two_var()).unwrap();
        assert!((f.value - 7.0).abs() < 1e-12);
    }

    #[test]
    fn ge_and_eq_rows() {
        // max x + 2y, x + y = 4, x >= 1, y <= 2.5
        let mut lp = LinearProgram::new(vec!["x".to_string(), "y".to_string()], vec![ex(1), ex(2)]);
        lp.push_row(LinearRow::new(RowTag::Other, 0, vec![(0, ex(1)), (1, ex(1))], Sense::Eq, ex(4)));
        lp.push_row(LinearRow::new(RowTag::Other, 1, vec![(0, ex(1))], Sense::Ge, ex(1)));
        lp.push_row(LinearRow::new(RowTag::Other, 2, vec![(1, ex(2))], Sense::Le, ex(5)));
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.value, Exact::new(BigInt::from(13), BigInt::from(2)));
    }

    #[test]
    fn negative_rhs_and_infeasible() {
        // max -x s.t. -x <= -2  (x >= 2)
        let mut lp = LinearProgram::new(vec!["x".to_string()], vec![ex(-1)]);
        lp.push_row(LinearRow::new(RowTag::Other, 0, vec![(0, ex(-1))], Sense::Le, ex(-2)));
        assert_eq!(simplex_solve(&lp).unwrap().value, ex(-2));
        lp.push_row(LinearRow::new(RowTag::Other, 1, vec![(0, ex(1))], Sense::Le, ex(1)));
        assert_eq!(simplex_solve(&lp).unwrap_err(), Error::Infeasible);
    }

    #[test]
    fn unbounded() {
        let mut lp = LinearProgram::new(vec!["x".to_string(), "y".to_string()], vec![ex(1), ex(0)]);
        lp.push_row(LinearRow::new(RowTag::Other, 0, vec![(1, ex(1))], Sense::Le, ex(1)));
        assert_eq!(simplex_solve(&lp).unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn degenerate_redundant_equalities() {
        // x + y = 1 twice, maximize x
        let mut lp = LinearProgram::new(vec!["x".to_string(), "y".to_string()], vec![ex(1), ex(0)]);
        for i in 0..2 {
            lp.push_row(LinearRow::new(RowTag::Other, i, vec![(0, ex(1)), (1, ex(1))], Sense::Eq, ex(1)));
        }
        assert_eq!(simplex_solve(&lp).unwrap().value, ex(1));
    }
}
