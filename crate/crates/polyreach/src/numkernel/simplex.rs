//! Two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Variables are free; internally each is split into a difference of two
//! non-negative columns. The problems solved here are small and dense
//! (template coefficients, bounding boxes, delta shifts), so the tableau is
//! kept dense and reduced costs are recomputed per iteration.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-9;
const RCOST_EPS: f64 = 1e-9;
const MAX_ITERS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelOp {
    Le,
    Ge,
    Eq,
}

/// Linear program over free variables. Constraints are normalized to `<=`
/// at construction: `>=` rows are negated and `=` rows become a pair.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub sense: Sense,
}

impl LinearProgram {
    pub fn new(
        objective: Vec<f64>,
        constraints: Vec<(Vec<f64>, RelOp, f64)>,
        sense: Sense,
    ) -> Result<Self> {
        let n = objective.len();
        let mut rows = Vec::with_capacity(constraints.len());
        let mut rhs = Vec::with_capacity(constraints.len());
        for (row, op, b) in constraints {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "constraint row has {} entries, objective has {}",
                    row.len(),
                    n
                )));
            }
            match op {
                RelOp::Le => {
                    rows.push(row);
                    rhs.push(b);
                }
                RelOp::Ge => {
                    rows.push(row.iter().map(|v| -v).collect());
                    rhs.push(-b);
                }
                RelOp::Eq => {
                    rows.push(row.clone());
                    rhs.push(b);
                    rows.push(row.iter().map(|v| -v).collect());
                    rhs.push(-b);
                }
            }
        }
        Ok(LinearProgram { objective, rows, rhs, sense })
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub point: Vec<f64>,
}

struct Tableau {
    /// m rows of [variable columns | rhs]
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_cols: usize,
    art_start: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[row].clone();
        for (r, data) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = data[col];
            if f == 0.0 {
                continue;
            }
            for (v, pv) in data.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Run Bland's rule to optimality for `maximize costs . y`.
    /// `allow` filters which columns may enter.
    fn optimize(&mut self, costs: &[f64], allow: impl Fn(usize) -> bool) -> Result<()> {
        for _ in 0..MAX_ITERS {
            // reduced cost of column j: c_j - c_B . B^{-1} A_j
            let mut entering = None;
            'cols: for j in 0..self.n_cols {
                if !allow(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = costs[j];
                for (r, &b) in self.basis.iter().enumerate() {
                    let cb = costs[b];
                    if cb != 0.0 {
                        rc -= cb * self.rows[r][j];
                    }
                }
                if rc > RCOST_EPS {
                    entering = Some(j);
                    break 'cols;
                }
            }
            let Some(col) = entering else { return Ok(()) };
            // ratio test, ties to the smallest basis variable index
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][col];
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rows[r][self.n_cols] / a;
                match leave {
                    None => leave = Some((r, ratio)),
                    Some((br, best)) => {
                        let tol = 1e-12 * (1.0 + best.abs());
                        if ratio < best - tol
                            || ((ratio - best).abs() <= tol && self.basis[r] < self.basis[br])
                        {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(row, col);
        }
        Err(Error::Internal("simplex iteration limit reached".into()))
    }

    fn value_of(&self, col: usize) -> f64 {
        self.basis
            .iter()
            .position(|&b| b == col)
            .map(|r| self.rows[r][self.n_cols])
            .unwrap_or(0.0)
    }
}

/// Solve the program; returns the optimal value and one optimal point.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.n_vars();
    let m = lp.rows.len();
    // columns: x+ (n) | x- (n) | slack (m) | artificial (added per negative rhs)
    let n_art = lp.rhs.iter().filter(|&&b| b < 0.0).count();
    let n_cols = 2 * n + m + n_art;
    let art_start = 2 * n + m;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0;
    for (i, (row, &b)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
        let neg = b < 0.0;
        let sign = if neg { -1.0 } else { 1.0 };
        let mut t = vec![0.0; n_cols + 1];
        for (j, &a) in row.iter().enumerate() {
            t[j] = sign * a;
            t[n + j] = -sign * a;
        }
        t[2 * n + i] = sign; // slack
        t[n_cols] = sign * b;
        if neg {
            t[art_start + art] = 1.0;
            basis.push(art_start + art);
            art += 1;
        } else {
            basis.push(2 * n + i);
        }
        rows.push(t);
    }
    let mut tab = Tableau { rows, basis, n_cols, art_start };

    if n_art > 0 {
        let mut phase1 = vec![0.0; n_cols];
        for c in art_start..n_cols {
            phase1[c] = -1.0;
        }
        tab.optimize(&phase1, |_| true)?;
        let infeas: f64 = (art_start..n_cols).map(|c| tab.value_of(c)).sum();
        let scale = 1.0 + lp.rhs.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        if infeas > 1e-7 * scale {
            return Err(Error::Infeasible);
        }
        // drive remaining artificials out of the basis where possible
        for r in 0..tab.basis.len() {
            if tab.basis[r] >= art_start {
                if let Some(col) =
                    (0..art_start).find(|&j| tab.rows[r][j].abs() > PIVOT_EPS)
                {
                    tab.pivot(r, col);
                }
            }
        }
    }

    let dir = match lp.sense {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    let mut phase2 = vec![0.0; n_cols];
    for j in 0..n {
        phase2[j] = dir * lp.objective[j];
        phase2[n + j] = -dir * lp.objective[j];
    }
    let art_start = tab.art_start;
    tab.optimize(&phase2, |j| j < art_start)?;

    let point: Vec<f64> = (0..n).map(|j| tab.value_of(j) - tab.value_of(n + j)).collect();
    let value = lp
        .objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .sum::<f64>();
    Ok(LpSolution { value, point })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maximize(obj: Vec<f64>, cons: Vec<(Vec<f64>, RelOp, f64)>) -> Result<LpSolution> {
        lp_solve(&LinearProgram::new(obj, cons, Sense::Maximize).unwrap())
    }

    #[test]
    fn unit_interval() {
        let sol = maximize(
            vec![1.0],
            vec![(vec![1.0], RelOp::Le, 1.0), (vec![1.0], RelOp::Ge, 0.0)],
        )
        .unwrap();
        assert!((sol.value - 1.0).abs() <= 1e-9);
        assert!((sol.point[0] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn simplex_face() {
        let sol = maximize(
            vec![1.0, 1.0],
            vec![
                (vec![1.0, 1.0], RelOp::Le, 1.0),
                (vec![1.0, 0.0], RelOp::Ge, 0.0),
                (vec![0.0, 1.0], RelOp::Ge, 0.0),
            ],
        )
        .unwrap();
        assert!((sol.value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        let r = maximize(
            vec![1.0],
            vec![(vec![1.0], RelOp::Le, -1.0), (vec![1.0], RelOp::Ge, 1.0)],
        );
        assert_eq!(r, Err(Error::Infeasible));
    }

    #[test]
    fn unbounded_detected() {
        let r = maximize(vec![1.0], vec![(vec![1.0], RelOp::Ge, 0.0)]);
        assert_eq!(r, Err(Error::Unbounded));
    }

    #[test]
    fn equality_rows() {
        // max x + y with x + y = 2, x <= 1.5, y <= 1.5, x,y >= 0
        let sol = maximize(
            vec![1.0, 1.0],
            vec![
                (vec![1.0, 1.0], RelOp::Eq, 2.0),
                (vec![1.0, 0.0], RelOp::Le, 1.5),
                (vec![0.0, 1.0], RelOp::Le, 1.5),
                (vec![1.0, 0.0], RelOp::Ge, 0.0),
                (vec![0.0, 1.0], RelOp::Ge, 0.0),
            ],
        )
        .unwrap();
        assert!((sol.value - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn negative_coordinates_reachable() {
        // max -x subject to x >= -3, x <= 0
        let sol = maximize(
            vec![-1.0],
            vec![(vec![1.0], RelOp::Ge, -3.0), (vec![1.0], RelOp::Le, 0.0)],
        )
        .unwrap();
        assert!((sol.value - 3.0).abs() <= 1e-9);
        assert!((sol.point[0] + 3.0).abs() <= 1e-9);
    }

    #[test]
    fn minimize_sense() {
        let sol = lp_solve(
            &LinearProgram::new(
                vec![2.0, -1.0],
                vec![
                    (vec![1.0, 0.0], RelOp::Ge, -1.0),
                    (vec![1.0, 0.0], RelOp::Le, 1.0),
                    (vec![0.0, 1.0], RelOp::Ge, -1.0),
                    (vec![0.0, 1.0], RelOp::Le, 1.0),
                ],
                Sense::Minimize,
            )
            .unwrap(),
        )
        .unwrap();
        assert!((sol.value - (-3.0)).abs() <= 1e-9);
    }

    #[test]
    fn argmax_is_feasible_and_consistent() {
        let lp = LinearProgram::new(
            vec![0.3, 1.7, -0.4],
            vec![
                (vec![1.0, 2.0, -1.0], RelOp::Le, 4.0),
                (vec![-1.0, 1.0, 0.5], RelOp::Le, 3.0),
                (vec![1.0, 0.0, 0.0], RelOp::Le, 2.0),
                (vec![1.0, 0.0, 0.0], RelOp::Ge, -2.0),
                (vec![0.0, 1.0, 0.0], RelOp::Le, 2.0),
                (vec![0.0, 1.0, 0.0], RelOp::Ge, -2.0),
                (vec![0.0, 0.0, 1.0], RelOp::Le, 2.0),
                (vec![0.0, 0.0, 1.0], RelOp::Ge, -2.0),
            ],
            Sense::Maximize,
        )
        .unwrap();
        let sol = lp_solve(&lp).unwrap();
        for (row, b) in lp.rows.iter().zip(&lp.rhs) {
            let lhs: f64 = row.iter().zip(&sol.point).map(|(a, x)| a * x).sum();
            assert!(lhs <= b + 1e-9, "constraint violated: {lhs} > {b}");
        }
        let obj: f64 = lp.objective.iter().zip(&sol.point).map(|(c, x)| c * x).sum();
        assert!((obj - sol.value).abs() <= 1e-9);
    }

    #[test]
    fn deterministic_bitwise() {
        let lp = LinearProgram::new(
            vec![1.0, 2.0],
            vec![
                (vec![1.0, 1.0], RelOp::Le, 3.0),
                (vec![1.0, -1.0], RelOp::Le, 1.0),
                (vec![1.0, 0.0], RelOp::Ge, -1.0),
                (vec![0.0, 1.0], RelOp::Ge, -1.0),
            ],
            Sense::Maximize,
        )
        .unwrap();
        let a = lp_solve(&lp).unwrap();
        let b = lp_solve(&lp).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!(a.point.iter().zip(&b.point).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}
