//! Dense two-phase simplex over exact rationals.
//!
//! Problems are in standard form: maximize `c·x` subject to `A x = b`,
//! `x >= 0`. Bland's rule is used for both entering and leaving variables,
//! so the method terminates on degenerate problems. The instances solved
//! here are tiny (a handful of rows), so no effort goes into sparsity.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn rat_u(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Objective row in "z - c·x" form; last entry holds the objective value.
    objective: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.objective.len() - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        if !self.objective[col].is_zero() {
            let factor = self.objective[col].clone();
            for (v, pv) in self.objective.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations restricted to columns `< allowed`.
    /// Returns false when the objective is unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| self.objective[j].is_negative());
            let Some(col) = entering else {
                return true;
            };
            let rhs = self.width();
            let mut best: Option<(usize, Rational)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[rhs] / &r[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
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

/// Maximizes `c·x` subject to `a x = b`, `x >= 0`.
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    debug_assert_eq!(b.len(), m);

    // Phase 1 tableau: original columns, one artificial per row, rhs.
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r: Vec<Rational> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        r.extend((0..m).map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        r.push(if flip { -rhs.clone() } else { rhs.clone() });
        rows.push(r);
    }
    let mut objective = vec![Rational::zero(); width + 1];
    for r in &rows {
        for j in 0..n {
            objective[j] -= &r[j];
        }
        objective[width] -= &r[width];
    }
    let mut t = Tableau {
        rows,
        objective,
        basis: (n..n + m).collect(),
    };
    t.optimize(width);
    if !t.objective[width].is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2 on the original columns.
    let mut rows: Vec<Vec<Rational>> = t
        .rows
        .into_iter()
        .map(|mut r| {
            let rhs = r.pop().expect("rhs column");
            r.truncate(n);
            r.push(rhs);
            r
        })
        .collect();
    let basis = t.basis;
    let mut objective: Vec<Rational> = c.iter().map(|v| -v.clone()).collect();
    objective.push(Rational::zero());
    for (r, &bj) in rows.iter_mut().zip(&basis) {
        let cb = &c[bj];
        if cb.is_zero() {
            continue;
        }
        for (o, v) in objective.iter_mut().zip(r.iter()) {
            *o += cb * v;
        }
    }
    let mut t = Tableau {
        rows,
        objective,
        basis,
    };
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![Rational::zero(); n];
    for (r, &bj) in t.rows.iter().zip(&t.basis) {
        solution[bj] = r[n].clone();
    }
    LpOutcome::Optimal {
        value: t.objective[n].clone(),
        solution,
    }
}
