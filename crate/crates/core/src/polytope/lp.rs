//! Dense exact-rational simplex.
//!
//! Two-phase tableau method with Bland's anti-cycling rule. Sizes in this
//! crate are tiny (a dozen constraints, a few hundred columns at most), so
//! the dense layout is simpler than anything sparse and fast enough.

use num_traits::{Signed, Zero};

use super::Rational;

/// Result of a linear program.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// Outcome of asking whether `target · z <= bound` follows from `A z <= b`.
#[derive(Debug, Clone, PartialEq)]
pub enum Implication {
    /// Non-negative multipliers `y` with `Aᵀy = target` and `bᵀy <= bound`.
    Certified(Vec<Rational>),
    /// `A z <= b` has no solution, so every inequality follows.
    Vacuous,
    NotImplied,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    objective: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &pivot;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        if !self.objective[col].is_zero() {
            let factor = self.objective[col].clone();
            for (v, p) in self.objective.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false on unboundedness.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(col) = (0..allowed).find(|&j| self.objective[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[rhs] / &r[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Minimizes `c·y` subject to `A y = b`, `y >= 0`.
pub fn minimize_standard(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length must match row count");
    assert!(a.iter().all(|r| r.len() == n), "row width must match cost length");

    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Rational::from_integer(1.into()) } else { Rational::zero() }));
        r.push(if flip { -bi } else { bi.clone() });
        rows.push(r);
    }

    // phase one: minimize the sum of artificials
    let mut objective = vec![Rational::zero(); width + 1];
    for r in &rows {
        for j in 0..n {
            objective[j] -= &r[j];
        }
        objective[width] -= &r[width];
    }
    let mut t = Tableau { rows, objective, basis: (n..n + m).collect(), width };
    t.optimize(width);
    if !t.objective[width].is_zero() {
        return LpOutcome::Infeasible;
    }

    // drive remaining artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // phase two
    let mut objective = vec![Rational::zero(); width + 1];
    objective[..n].clone_from_slice(c);
    for (r, &bv) in t.rows.iter().zip(&t.basis) {
        let cb = &c[bv];
        if cb.is_zero() {
            continue;
        }
        for j in 0..=width {
            if !r[j].is_zero() {
                objective[j] -= cb * &r[j];
            }
        }
    }
    t.objective = objective;
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }

    let mut point = vec![Rational::zero(); n];
    for (r, &bv) in t.rows.iter().zip(&t.basis) {
        point[bv] = r[width].clone();
    }
    let value = c.iter().zip(&point).map(|(ci, yi)| ci * yi).fold(Rational::zero(), |acc, v| acc + v);
    LpOutcome::Optimal { value, point }
}

/// Maximizes `c·z` subject to `A z <= b` with `z` free.
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    // z = z⁺ − z⁻, one slack per row
    let std_a: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = Vec::with_capacity(2 * n + m);
            r.extend(row.iter().cloned());
            r.extend(row.iter().map(|v| -v));
            r.extend((0..m).map(|k| if k == i { one() } else { Rational::zero() }));
            r
        })
        .collect();
    let mut cost: Vec<Rational> = c.iter().map(|v| -v).collect();
    cost.extend(c.iter().cloned());
    cost.extend((0..m).map(|_| Rational::zero()));
    match minimize_standard(&std_a, b, &cost) {
        LpOutcome::Optimal { value, point } => {
            let z = (0..n).map(|j| &point[j] - &point[n + j]).collect();
            LpOutcome::Optimal { value: -value, point: z }
        }
        other => other,
    }
}

/// Any point with `A z <= b`, if one exists.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational], dim: usize) -> Option<Vec<Rational>> {
    match maximize(a, b, &vec![Rational::zero(); dim]) {
        LpOutcome::Optimal { point, .. } => Some(point),
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
        LpOutcome::Infeasible => None,
    }
}

/// Decides whether `target·z <= bound` holds on `{z : A z <= b}` through the
/// dual program `min bᵀy, Aᵀy = target, y >= 0`. A returned certificate has
/// already been checked by direct multiplication.
pub fn implication(a: &[Vec<Rational>], b: &[Rational], target: &[Rational], bound: &Rational) -> Implication {
    let dim = target.len();
    let transposed: Vec<Vec<Rational>> = (0..dim).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect();
    match minimize_standard(&transposed, target, b) {
        LpOutcome::Optimal { value, point } => {
            if value <= *bound {
                debug_assert!(verify_certificate(a, b, target, bound, &point));
                Implication::Certified(point)
            } else {
                Implication::NotImplied
            }
        }
        LpOutcome::Unbounded => Implication::Vacuous,
        LpOutcome::Infeasible => {
            if feasible_point(a, b, dim).is_some() {
                Implication::NotImplied
            } else {
                Implication::Vacuous
            }
        }
    }
}

/// Checks `y >= 0`, `Aᵀy = target` and `bᵀy <= bound` exactly.
pub fn verify_certificate(
    a: &[Vec<Rational>],
    b: &[Rational],
    target: &[Rational],
    bound: &Rational,
    y: &[Rational],
) -> bool {
    if y.len() != a.len() || y.iter().any(|v| v.is_negative()) {
        return false;
    }
    let combined_ok = (0..target.len()).all(|j| {
        let s = a.iter().zip(y).fold(Rational::zero(), |acc, (row, yi)| acc + &row[j] * yi);
        s == target[j]
    });
    let rhs = b.iter().zip(y).fold(Rational::zero(), |acc, (bi, yi)| acc + bi * yi);
    combined_ok && rhs <= *bound
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}
