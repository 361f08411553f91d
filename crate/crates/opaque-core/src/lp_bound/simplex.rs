//! Dense exact-rational simplex for the interior LP.
//!
//! The primal is min cᵀx s.t. Ax ≥ b, x ≥ 0 with c ≥ 0; its dual
//! max bᵀy s.t. Aᵀy ≤ c, y ≥ 0 is feasible at the origin, so one Phase-II
//! run with Bland's anti-cycling rule solves both problems at once: the dual
//! solution comes from the basis, the primal solution from the reduced costs
//! of the slack columns.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

type Rat = BigRational;

pub struct SimplexResult {
    pub optimum: Rat,
    pub primal: Vec<Rat>,
    pub dual: Vec<Rat>,
    pub pivots: usize,
}

/// Solve min cᵀx s.t. Ax ≥ b, x ≥ 0 exactly. `a` is row-major, one row per
/// constraint. Requires c ≥ 0 (true here: the objective is the all-ones
/// vector).
pub fn solve_min_ge(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> Result<SimplexResult> {
    let m = a.len(); // constraints = dual variables
    let n = c.len(); // primal variables = dual constraints
    assert!(a.iter().all(|row| row.len() == n));
    assert_eq!(b.len(), m);
    assert!(
        c.iter().all(|v| !v.is_negative()),
        "dual start needs c ≥ 0"
    );

    // tableau of the dual: rows are the n constraints Aᵀy + s = c,
    // columns are m structural variables then n slacks
    let cols = m + n;
    let mut rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row = vec![Rat::zero(); cols];
            for j in 0..m {
                row[j] = a[j][i].clone();
            }
            row[m + i] = Rat::from_integer(1.into());
            row
        })
        .collect();
    let mut rhs: Vec<Rat> = c.to_vec();
    let mut basis: Vec<usize> = (m..m + n).collect();
    // reduced costs z_j − g_j for the maximization of g = bᵀy
    let mut zrow: Vec<Rat> = (0..cols)
        .map(|j| if j < m { -b[j].clone() } else { Rat::zero() })
        .collect();

    let max_pivots = 200_000usize;
    let mut pivots = 0usize;
    loop {
        // Bland: entering is the smallest improving column index
        let Some(enter) = (0..cols).find(|&j| zrow[j].is_negative()) else {
            break;
        };
        // ratio test; ties by smallest basis variable index (Bland)
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for r in 0..n {
            if rows[r][enter].is_positive() {
                let ratio = &rhs[r] / &rows[r][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && basis[r] < basis[leave.expect("set with best")])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
        }
        let Some(leave) = leave else {
            // dual unbounded ⇔ primal infeasible
            return Err(Error::Infeasible);
        };

        // pivot
        let piv = rows[leave][enter].clone();
        for v in rows[leave].iter_mut() {
            *v /= &piv;
        }
        rhs[leave] /= &piv;
        for r in 0..n {
            if r != leave && !rows[r][enter].is_zero() {
                let f = rows[r][enter].clone();
                let (pivot_row, row) = if r < leave {
                    let (lo, hi) = rows.split_at_mut(leave);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&lo[leave], &mut hi[0])
                };
                for (v, p) in row.iter_mut().zip(pivot_row.iter()) {
                    if !p.is_zero() {
                        *v -= &f * p;
                    }
                }
                let sub = &f * &rhs[leave];
                rhs[r] -= sub;
            }
        }
        if !zrow[enter].is_zero() {
            let f = zrow[enter].clone();
            for (v, p) in zrow.iter_mut().zip(rows[leave].iter()) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        basis[leave] = enter;
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::SolverCheck(format!(
                "pivot budget exhausted after {pivots} pivots"
            )));
        }
    }

    // dual variables from the basis, primal from slack reduced costs
    let mut dual = vec![Rat::zero(); m];
    for r in 0..n {
        if basis[r] < m {
            dual[basis[r]] = rhs[r].clone();
        }
    }
    let primal: Vec<Rat> = (0..n).map(|i| zrow[m + i].clone()).collect();
    let optimum: Rat = b.iter().zip(dual.iter()).map(|(bi, yi)| bi * yi).sum();

    Ok(SimplexResult {
        optimum,
        primal,
        dual,
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp_bound::dyadic::rat;

    #[test]
    fn tiny_diet_problem() {
        // min x + y s.t. x + 2y ≥ 4, 3x + y ≥ 6  → optimum at (8/5, 6/5)
        let a = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(3, 1), rat(1, 1)]];
        let b = vec![rat(4, 1), rat(6, 1)];
        let c = vec![rat(1, 1), rat(1, 1)];
        let sol = solve_min_ge(&a, &b, &c).unwrap();
        assert_eq!(sol.optimum, rat(14, 5));
        assert_eq!(sol.primal, vec![rat(8, 5), rat(6, 5)]);
        // dual feasibility and zero gap
        let gap: Rat = sol.primal.iter().sum::<Rat>() - sol.optimum.clone();
        assert!(gap.is_zero());
    }

    #[test]
    fn redundant_constraints_are_harmless() {
        let a = vec![
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(1, 1)],
        ];
        let b = vec![rat(1, 1), rat(1, 1), rat(1, 1)];
        let c = vec![rat(1, 1), rat(1, 1)];
        let sol = solve_min_ge(&a, &b, &c).unwrap();
        assert_eq!(sol.optimum, rat(2, 1));
    }

    #[test]
    fn infeasible_is_detected() {
        // x ≥ 1 and −x ≥ 1 cannot both hold
        let a = vec![vec![rat(1, 1)], vec![rat(-1, 1)]];
        let b = vec![rat(1, 1), rat(1, 1)];
        let c = vec![rat(1, 1)];
        assert!(matches!(solve_min_ge(&a, &b, &c), Err(Error::Infeasible)));
    }

    #[test]
    fn zero_objective_vector_is_allowed() {
        let a = vec![vec![rat(1, 1), rat(1, 1)]];
        let b = vec![rat(2, 1)];
        let c = vec![rat(0, 1), rat(1, 1)];
        let sol = solve_min_ge(&a, &b, &c).unwrap();
        assert_eq!(sol.optimum, rat(0, 1));
    }
}
