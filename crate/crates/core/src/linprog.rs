//! Dense two-phase simplex.
//!
//! Problems are small (a few dozen variables and constraints), so the solver
//! keeps a full tableau. Pricing is Dantzig's rule with a Bland fallback on
//! degenerate stretches, and phase one stops as soon as the artificials
//! reach zero. Every constraint row
//! is scaled to unit max-norm before solving; `LpSolution::max_primal_residual`
//! is measured on those normalized rows.

use serde::{Deserialize, Serialize};

use crate::cloud::Tolerances;
use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
/// Consecutive degenerate pivots before pricing falls back to Bland's rule.
const BLAND_AFTER: usize = 20;
/// Primal slack allowed when bounding the step in the ratio test.
const RATIO_SLACK: f64 = 1e-12;
/// Phase-one objective treated as having reached its floor.
const ZERO_OBJECTIVE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub row: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(row: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self { row, relation, rhs }
    }

    pub fn le(row: Vec<f64>, rhs: f64) -> Self {
        Self::new(row, Relation::Le, rhs)
    }

    pub fn ge(row: Vec<f64>, rhs: f64) -> Self {
        Self::new(row, Relation::Ge, rhs)
    }

    pub fn eq(row: Vec<f64>, rhs: f64) -> Self {
        Self::new(row, Relation::Eq, rhs)
    }

    /// Violation of this constraint at `x`, scaled by the row's max-norm.
    pub fn normalized_violation(&self, x: &[f64]) -> f64 {
        let scale = self.row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lhs: f64 = self.row.iter().zip(x).map(|(a, b)| a * b).sum();
        let raw = match self.relation {
            Relation::Le => lhs - self.rhs,
            Relation::Ge => self.rhs - lhs,
            Relation::Eq => (lhs - self.rhs).abs(),
        }
        .max(0.0);
        if scale > 0.0 {
            raw / scale
        } else {
            raw
        }
    }
}

/// Per-variable optional bounds; `(None, None)` is a free variable.
pub type Bounds = (Option<f64>, Option<f64>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub sense: Sense,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bounds>,
}

impl LpProblem {
    /// A problem over `n` free variables with the given objective.
    pub fn new(objective: Vec<f64>, sense: Sense) -> Self {
        let n = objective.len();
        Self {
            objective,
            sense,
            constraints: Vec::new(),
            bounds: vec![(None, None); n],
        }
    }

    pub fn with_constraint(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn with_bounds(mut self, var: usize, lower: Option<f64>, upper: Option<f64>) -> Self {
        self.bounds[var] = (lower, upper);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let m = self.objective.len();
        if m == 0 {
            return Err(Error::InvalidInput("LP needs at least one variable".into()));
        }
        if self.bounds.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: self.bounds.len(),
            });
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite objective coefficient".into()));
        }
        for c in &self.constraints {
            if c.row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: c.row.len(),
                });
            }
            if c.row.iter().any(|v| !v.is_finite()) || !c.rhs.is_finite() {
                return Err(Error::InvalidInput("non-finite constraint entry".into()));
            }
        }
        for (lo, hi) in &self.bounds {
            if lo.is_some_and(|v| !v.is_finite()) || hi.is_some_and(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("non-finite variable bound".into()));
            }
        }
        Ok(())
    }

    /// Worst normalized violation over all constraints and bounds at `x`.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        let mut worst = self
            .constraints
            .iter()
            .map(|c| c.normalized_violation(x))
            .fold(0.0f64, f64::max);
        for (xi, (lo, hi)) in x.iter().zip(&self.bounds) {
            if let Some(l) = lo {
                worst = worst.max(l - xi);
            }
            if let Some(u) = hi {
                worst = worst.max(xi - u);
            }
        }
        worst
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Option<Vec<f64>>,
    pub objective_value: Option<f64>,
    pub max_primal_residual: f64,
}

/// Outcome of a phase-one feasibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub witness: Option<Vec<f64>>,
}

/// Solves `p` to optimality, or reports infeasibility/unboundedness.
pub fn solve(p: &LpProblem, tol: &Tolerances) -> Result<LpSolution> {
    p.validate()?;
    let cap = 50 * (p.num_vars() + p.constraints.len());
    let std = StandardForm::build(p);
    let Some(std) = std else {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: None,
            objective_value: None,
            max_primal_residual: 0.0,
        });
    };
    let mut tab = Tableau::new(&std);
    let mut iterations = 0usize;

    // phase one
    let phase_one_cost: Vec<f64> = (0..tab.cols)
        .map(|j| if tab.is_artificial(j) { 1.0 } else { 0.0 })
        .collect();
    tab.set_cost(&phase_one_cost);
    // phase one is bounded below by zero, so it always ends optimal
    tab.run(&mut iterations, cap, true, |_| true)?;
    if tab.objective_value() > tol.lp_feas {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: None,
            objective_value: None,
            max_primal_residual: 0.0,
        });
    }
    tab.drive_out_artificials();

    // phase two
    let mut cost = vec![0.0; tab.cols];
    cost[..std.cost.len()].copy_from_slice(&std.cost);
    tab.set_cost(&cost);
    let n_art_start = tab.art_start;
    let status = match tab.run(&mut iterations, cap, false, |j| j < n_art_start)? {
        Pivoting::Optimal => LpStatus::Optimal,
        Pivoting::Unbounded => LpStatus::Unbounded,
    };
    if status == LpStatus::Unbounded {
        return Ok(LpSolution {
            status,
            x: None,
            objective_value: None,
            max_primal_residual: 0.0,
        });
    }
    let s = tab.primal();
    let x = std.recover(&s);
    let objective_value = p.objective_at(&x);
    let max_primal_residual = p.max_residual(&x);
    Ok(LpSolution {
        status,
        x: Some(x),
        objective_value: Some(objective_value),
        max_primal_residual,
    })
}

/// Phase-one feasibility of `constraints` over `num_vars` free variables.
pub fn feasible(num_vars: usize, constraints: &[Constraint], tol: &Tolerances) -> Result<Feasibility> {
    let mut p = LpProblem::new(vec![0.0; num_vars], Sense::Minimize);
    p.constraints = constraints.to_vec();
    let sol = solve(&p, tol)?;
    Ok(match sol.status {
        LpStatus::Optimal => Feasibility {
            feasible: true,
            witness: sol.x,
        },
        _ => Feasibility {
            feasible: false,
            witness: None,
        },
    })
}

/// `x = offset + Σ coef · s_k` with every `s_k ≥ 0`.
#[derive(Debug, Clone)]
struct VarMap {
    offset: f64,
    terms: Vec<(usize, f64)>,
}

#[derive(Debug)]
struct StdRow {
    coeffs: Vec<f64>,
    relation: Relation,
    rhs: f64,
}

/// Nonnegative-variable form with normalized, sign-corrected rows.
#[derive(Debug)]
struct StandardForm {
    n: usize,
    rows: Vec<StdRow>,
    /// Minimization costs over the structural variables.
    cost: Vec<f64>,
    maps: Vec<VarMap>,
}

impl StandardForm {
    /// `None` when a zero row is already violated.
    fn build(p: &LpProblem) -> Option<Self> {
        let mut n = 0usize;
        let mut maps = Vec::with_capacity(p.num_vars());
        let mut extra: Vec<(usize, f64)> = Vec::new();
        for &(lo, hi) in &p.bounds {
            let map = match (lo, hi) {
                (Some(l), hi) => {
                    let k = n;
                    n += 1;
                    if let Some(u) = hi {
                        extra.push((k, u - l));
                    }
                    VarMap {
                        offset: l,
                        terms: vec![(k, 1.0)],
                    }
                }
                (None, Some(u)) => {
                    let k = n;
                    n += 1;
                    VarMap {
                        offset: u,
                        terms: vec![(k, -1.0)],
                    }
                }
                (None, None) => {
                    let k = n;
                    n += 2;
                    VarMap {
                        offset: 0.0,
                        terms: vec![(k, 1.0), (k + 1, -1.0)],
                    }
                }
            };
            maps.push(map);
        }

        let sign = match p.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut cost = vec![0.0; n];
        for (c, map) in p.objective.iter().zip(&maps) {
            for &(k, coef) in &map.terms {
                cost[k] += sign * c * coef;
            }
        }

        let mut rows = Vec::new();
        for c in &p.constraints {
            let mut coeffs = vec![0.0; n];
            let mut rhs = c.rhs;
            for (a, map) in c.row.iter().zip(&maps) {
                rhs -= a * map.offset;
                for &(k, coef) in &map.terms {
                    coeffs[k] += a * coef;
                }
            }
            rows.push(StdRow {
                coeffs,
                relation: c.relation,
                rhs,
            });
        }
        for (k, width) in extra {
            let mut coeffs = vec![0.0; n];
            coeffs[k] = 1.0;
            rows.push(StdRow {
                coeffs,
                relation: Relation::Le,
                rhs: width,
            });
        }

        let mut kept = Vec::with_capacity(rows.len());
        for mut row in rows {
            let scale = row.coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                let ok = match row.relation {
                    Relation::Le => row.rhs >= -PIVOT_EPS,
                    Relation::Ge => row.rhs <= PIVOT_EPS,
                    Relation::Eq => row.rhs.abs() <= PIVOT_EPS,
                };
                if !ok {
                    return None;
                }
                continue;
            }
            row.coeffs.iter_mut().for_each(|v| *v /= scale);
            row.rhs /= scale;
            if row.rhs < 0.0 {
                row.coeffs.iter_mut().for_each(|v| *v = -*v);
                row.rhs = -row.rhs;
                row.relation = match row.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            kept.push(row);
        }
        Some(Self {
            n,
            rows: kept,
            cost,
            maps,
        })
    }

    fn recover(&self, s: &[f64]) -> Vec<f64> {
        self.maps
            .iter()
            .map(|m| m.offset + m.terms.iter().map(|&(k, c)| c * s[k]).sum::<f64>())
            .collect()
    }
}

enum Pivoting {
    Optimal,
    Unbounded,
}

/// Full simplex tableau. Column layout: structural, slack/surplus,
/// artificial; the right-hand side is stored separately.
struct Tableau {
    rows: usize,
    cols: usize,
    art_start: usize,
    a: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    /// Reduced costs of the current objective.
    reduced: Vec<f64>,
    /// Current objective value.
    z: f64,
}

impl Tableau {
    fn new(std: &StandardForm) -> Self {
        let rows = std.rows.len();
        let n_slack = std
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let n_art = std
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Le)
            .count();
        let art_start = std.n + n_slack;
        let cols = art_start + n_art;
        let mut a = vec![vec![0.0; cols]; rows];
        let mut rhs = vec![0.0; rows];
        let mut basis = vec![0; rows];
        let mut next_slack = std.n;
        let mut next_art = art_start;
        for (i, r) in std.rows.iter().enumerate() {
            a[i][..std.n].copy_from_slice(&r.coeffs);
            rhs[i] = r.rhs;
            match r.relation {
                Relation::Le => {
                    a[i][next_slack] = 1.0;
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    a[i][next_slack] = -1.0;
                    next_slack += 1;
                    a[i][next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    a[i][next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }
        Self {
            rows,
            cols,
            art_start,
            a,
            rhs,
            basis,
            reduced: vec![0.0; cols],
            z: 0.0,
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.art_start
    }

    fn set_cost(&mut self, cost: &[f64]) {
        self.reduced = cost.to_vec();
        self.z = 0.0;
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..self.cols {
                    self.reduced[j] -= cb * self.a[i][j];
                }
                self.z += cb * self.rhs[i];
            }
        }
    }

    fn objective_value(&self) -> f64 {
        self.z
    }

    fn run(
        &mut self,
        iterations: &mut usize,
        cap: usize,
        bounded: bool,
        allowed: impl Fn(usize) -> bool,
    ) -> Result<Pivoting> {
        let mut degenerate_run = 0usize;
        loop {
            let improving = (0..self.cols).filter(|&j| allowed(j) && self.reduced[j] < -COST_EPS);
            // Dantzig pricing, switching to Bland's rule while pivots stall so
            // that degenerate cycles cannot repeat
            let enter = if degenerate_run < BLAND_AFTER {
                improving.min_by(|&x, &y| self.reduced[x].total_cmp(&self.reduced[y]))
            } else {
                improving.min()
            };
            let Some(enter) = enter else {
                return Ok(Pivoting::Optimal);
            };
            // a bounded objective sitting at its floor of zero cannot improve;
            // further degenerate pivots would only grow the tableau
            if bounded && self.z <= ZERO_OBJECTIVE {
                return Ok(Pivoting::Optimal);
            }
            // two-pass ratio test: bound the step with a little slack, then
            // take the largest pivot among rows inside that bound
            let bound = (0..self.rows)
                .filter(|&i| self.a[i][enter] > PIVOT_EPS)
                .map(|i| (self.rhs[i].max(0.0) + RATIO_SLACK) / self.a[i][enter])
                .fold(f64::INFINITY, f64::min);
            let mut leave: Option<usize> = None;
            for i in 0..self.rows {
                let aij = self.a[i][enter];
                if aij <= PIVOT_EPS || self.rhs[i].max(0.0) / aij > bound {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) if degenerate_run >= BLAND_AFTER => self.basis[i] < self.basis[l],
                    Some(l) => aij > self.a[l][enter],
                };
                if better {
                    leave = Some(i);
                }
            }
            let Some(leave) = leave else {
                if bounded {
                    // a ray cannot improve a bounded objective: this reduced
                    // cost is accumulated rounding, not a real descent direction
                    self.reduced[enter] = 0.0;
                    continue;
                }
                return Ok(Pivoting::Unbounded);
            };
            *iterations += 1;
            if *iterations > cap {
                return Err(Error::IterationLimit { cap });
            }
            let step = self.rhs[leave].max(0.0) / self.a[leave][enter];
            if step > 1e-12 {
                degenerate_run = 0;
            } else {
                degenerate_run += 1;
            }
            self.pivot(leave, enter);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        self.a[r][c] = 1.0;
        let pivot_row = self.a[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.a[i][c];
            if f != 0.0 {
                for (v, pv) in self.a[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.a[i][c] = 0.0;
                self.rhs[i] -= f * pivot_rhs;
                if self.rhs[i] < 0.0 && self.rhs[i] > -1e-10 {
                    self.rhs[i] = 0.0;
                }
            }
        }
        let f = self.reduced[c];
        if f != 0.0 {
            for (v, pv) in self.reduced.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.reduced[c] = 0.0;
            self.z += f * pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Pivots zero-valued artificials out of the basis; rows where that is
    /// impossible are redundant and dropped.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows {
            if self.is_artificial(self.basis[i]) {
                let col = (0..self.art_start)
                    .filter(|&j| self.a[i][j].abs() > 1e-9)
                    .max_by(|&x, &y| self.a[i][x].abs().total_cmp(&self.a[i][y].abs()));
                match col {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.a.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                        self.rows -= 1;
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    fn primal(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for i in 0..self.rows {
            s[self.basis[i]] = self.rhs[i].max(0.0);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn bounded_maximum() {
        let p = LpProblem::new(vec![1.0], Sense::Maximize)
            .with_constraint(Constraint::le(vec![1.0], 3.0))
            .with_constraint(Constraint::ge(vec![1.0], 0.0));
        let s = solve(&p, &tol()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.x.unwrap()[0] - 3.0).abs() < 1e-12);
        assert!(s.max_primal_residual <= 1e-9);
    }

    #[test]
    fn infeasible_system() {
        let p = LpProblem::new(vec![1.0], Sense::Maximize)
            .with_constraint(Constraint::ge(vec![1.0], 1.0))
            .with_constraint(Constraint::le(vec![1.0], 0.0));
        assert_eq!(solve(&p, &tol()).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let p = LpProblem::new(vec![1.0], Sense::Maximize)
            .with_constraint(Constraint::ge(vec![1.0], 0.0));
        assert_eq!(solve(&p, &tol()).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn feasibility_examples() {
        let f = feasible(
            1,
            &[Constraint::ge(vec![1.0], 1.0), Constraint::le(vec![1.0], 2.0)],
            &tol(),
        )
        .unwrap();
        assert!(f.feasible);
        let w = f.witness.unwrap()[0];
        assert!((1.0 - 1e-9..=2.0 + 1e-9).contains(&w));

        let f = feasible(
            1,
            &[Constraint::ge(vec![1.0], 1.0), Constraint::ge(vec![-1.0], 0.0)],
            &tol(),
        )
        .unwrap();
        assert!(!f.feasible);

        // u = (1,0), v = (0,1)
        let cs = [
            Constraint::ge(vec![1.0, 0.0], 0.0),
            Constraint::ge(vec![0.0, 1.0], 0.0),
            Constraint::ge(vec![1.0, 1.0], 1.0),
        ];
        let f = feasible(2, &cs, &tol()).unwrap();
        assert!(f.feasible);
        let c = f.witness.unwrap();
        for con in &cs {
            assert!(con.normalized_violation(&c) <= 1e-9);
        }
        // the hand witness c = (1,1)
        for con in &cs {
            assert_eq!(con.normalized_violation(&[1.0, 1.0]), 0.0);
        }
    }

    #[test]
    fn equality_and_bounds() {
        // min x + y s.t. x + 2y = 4, 0 <= x <= 3, y >= 0.5
        let p = LpProblem::new(vec![1.0, 1.0], Sense::Minimize)
            .with_constraint(Constraint::eq(vec![1.0, 2.0], 4.0))
            .with_bounds(0, Some(0.0), Some(3.0))
            .with_bounds(1, Some(0.5), None);
        let s = solve(&p, &tol()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        let x = s.x.unwrap();
        assert!((x[0] - 0.0).abs() < 1e-9 && (x[1] - 2.0).abs() < 1e-9);
        assert!((s.objective_value.unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn upper_bounded_only_and_inverted_bounds() {
        let p = LpProblem::new(vec![1.0], Sense::Maximize).with_bounds(0, None, Some(-2.0));
        let s = solve(&p, &tol()).unwrap();
        assert!((s.x.unwrap()[0] + 2.0).abs() < 1e-12);
        let p = LpProblem::new(vec![1.0], Sense::Maximize).with_bounds(0, Some(1.0), Some(0.0));
        assert_eq!(solve(&p, &tol()).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn redundant_equalities() {
        let p = LpProblem::new(vec![1.0, 0.0], Sense::Maximize)
            .with_constraint(Constraint::eq(vec![1.0, 1.0], 1.0))
            .with_constraint(Constraint::eq(vec![2.0, 2.0], 2.0))
            .with_bounds(0, Some(0.0), None)
            .with_bounds(1, Some(0.0), None);
        let s = solve(&p, &tol()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective_value.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_rows() {
        let bad = LpProblem::new(vec![1.0], Sense::Minimize)
            .with_constraint(Constraint::ge(vec![0.0], 1.0));
        assert_eq!(solve(&bad, &tol()).unwrap().status, LpStatus::Infeasible);
        let ok = LpProblem::new(vec![1.0], Sense::Minimize)
            .with_constraint(Constraint::le(vec![0.0], 1.0))
            .with_bounds(0, Some(2.0), None);
        let s = solve(&ok, &tol()).unwrap();
        assert!((s.x.unwrap()[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_problems() {
        let ragged = LpProblem::new(vec![1.0, 2.0], Sense::Minimize)
            .with_constraint(Constraint::le(vec![1.0], 1.0));
        assert!(matches!(
            solve(&ragged, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
        let nan = LpProblem::new(vec![f64::NAN], Sense::Minimize);
        assert!(matches!(solve(&nan, &tol()), Err(Error::InvalidInput(_))));
        let empty = LpProblem::new(vec![], Sense::Minimize);
        assert!(solve(&empty, &tol()).is_err());
    }
}
