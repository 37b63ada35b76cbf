//! Bounded-variable primal revised simplex with an explicit dense basis
//! inverse kept current by eta updates and rebuilt periodically.
//!
//! Rows are turned into equalities with one slack each (`≤`: slack in
//! `[0, ∞)`, `≥`: slack in `(−∞, 0]`). The starting basis uses the slack of
//! every row whose residual it can absorb, then any structural column that
//! appears only in that row, and an artificial variable otherwise. Phase 1
//! minimizes the artificial sum; phase 2 the real objective.

use super::{LpProblem, LpSolution, LpStatus, Relation};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// `None` means `10 · (rows + vars) · 100`.
    pub max_iterations: Option<usize>,
    pub pivot_tolerance: f64,
    pub feasibility_tolerance: f64,
    pub optimality_tolerance: f64,
    /// Pivots between rebuilds of the basis inverse.
    pub refactor_interval: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iterations: None,
            pivot_tolerance: 1e-9,
            feasibility_tolerance: 1e-7,
            optimality_tolerance: 1e-9,
            refactor_interval: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic with no finite bound, held at zero.
    Free,
}

enum Step {
    Optimal,
    Unbounded,
}

pub(super) struct Simplex<'a> {
    problem: &'a LpProblem,
    opts: &'a SolverOptions,
    rows: usize,
    vars: usize,
    // Column storage for structurals, slacks, then artificials.
    col_start: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<f64>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    /// Basic column at each basis position.
    basis: Vec<usize>,
    /// Row-major inverse of the basis matrix.
    binv: Vec<f64>,
    first_artificial: usize,
    iterations: usize,
    max_iterations: usize,
    since_refactor: usize,
}

impl<'a> Simplex<'a> {
    pub(super) fn new(problem: &'a LpProblem, opts: &'a SolverOptions) -> Self {
        let rows = problem.num_rows();
        let vars = problem.num_vars();
        let mut col_start = vec![0];
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        for j in 0..vars {
            for i in 0..rows {
                let a = problem.row(i)[j];
                if a != 0.0 {
                    row_idx.push(i);
                    vals.push(a);
                }
            }
            col_start.push(row_idx.len());
        }
        let mut lb = problem.lower().to_vec();
        let mut ub = problem.upper().to_vec();
        for i in 0..rows {
            row_idx.push(i);
            vals.push(1.0);
            col_start.push(row_idx.len());
            match problem.relation(i) {
                Relation::Le => {
                    lb.push(0.0);
                    ub.push(f64::INFINITY);
                }
                Relation::Ge => {
                    lb.push(f64::NEG_INFINITY);
                    ub.push(0.0);
                }
            }
        }
        let total = vars + rows;
        Simplex {
            problem,
            opts,
            rows,
            vars,
            col_start,
            row_idx,
            vals,
            lb,
            ub,
            x: vec![0.0; total],
            state: vec![State::AtLower; total],
            basis: Vec::with_capacity(rows),
            binv: Vec::new(),
            first_artificial: total,
            iterations: 0,
            max_iterations: opts.max_iterations.unwrap_or(10 * (rows + vars) * 100),
            since_refactor: 0,
        }
    }

    fn num_cols(&self) -> usize {
        self.col_start.len() - 1
    }

    fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_start[j]..self.col_start[j + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    fn push_column(&mut self, entries: &[(usize, f64)], lb: f64, ub: f64) -> usize {
        for &(i, v) in entries {
            self.row_idx.push(i);
            self.vals.push(v);
        }
        self.col_start.push(self.row_idx.len());
        self.lb.push(lb);
        self.ub.push(ub);
        self.x.push(0.0);
        self.state.push(State::AtLower);
        self.num_cols() - 1
    }

    fn place_nonbasic(&mut self, j: usize, cost: f64) {
        let (lo, hi) = (self.lb[j], self.ub[j]);
        let (state, value) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) if cost < 0.0 => (State::AtUpper, hi),
            (true, _) => (State::AtLower, lo),
            (false, true) => (State::AtUpper, hi),
            (false, false) => (State::Free, 0.0),
        };
        self.state[j] = state;
        self.x[j] = value;
    }

    /// Builds the starting basis. Returns true when artificials were needed.
    fn initial_basis(&mut self) -> bool {
        let rows = self.rows;
        let vars = self.vars;
        for j in 0..vars {
            self.place_nonbasic(j, self.problem.objective()[j]);
        }
        let mut residual = self.problem.rhs().to_vec();
        for j in 0..vars {
            let xj = self.x[j];
            if xj != 0.0 {
                for (i, a) in self.column(j).collect::<Vec<_>>() {
                    residual[i] -= a * xj;
                }
            }
        }
        let mut singletons: Vec<Vec<usize>> = vec![Vec::new(); rows];
        for j in 0..vars {
            if self.col_start[j + 1] - self.col_start[j] == 1 {
                singletons[self.row_idx[self.col_start[j]]].push(j);
            }
        }

        let mut basis = vec![usize::MAX; rows];
        let mut artificials = Vec::new();
        for i in 0..rows {
            let slack = vars + i;
            let res = residual[i];
            if res >= self.lb[slack] && res <= self.ub[slack] {
                basis[i] = slack;
                self.state[slack] = State::Basic;
                self.x[slack] = res;
                continue;
            }
            self.state[slack] = State::AtLower;
            self.x[slack] = 0.0;
            if self.lb[slack] != 0.0 {
                self.state[slack] = State::AtUpper;
            }
            let crash = singletons[i].iter().copied().find_map(|j| {
                let a = self.vals[self.col_start[j]];
                let value = self.x[j] + res / a;
                (self.state[j] != State::Basic && value >= self.lb[j] && value <= self.ub[j])
                    .then_some((j, value))
            });
            if let Some((j, value)) = crash {
                basis[i] = j;
                self.state[j] = State::Basic;
                self.x[j] = value;
            } else {
                artificials.push((i, res));
            }
        }
        self.first_artificial = self.num_cols();
        for (i, res) in artificials {
            let sign = if res >= 0.0 { 1.0 } else { -1.0 };
            let j = self.push_column(&[(i, sign)], 0.0, f64::INFINITY);
            self.state[j] = State::Basic;
            self.x[j] = res.abs();
            basis[i] = j;
        }
        let needed = self.num_cols() > self.first_artificial;
        self.basis = basis;
        self.binv = vec![0.0; rows * rows];
        for (i, &j) in self.basis.iter().enumerate() {
            // Every starting basic column is a scaled unit vector in row i.
            let a = self.vals[self.col_start[j]];
            self.binv[i * rows + i] = 1.0 / a;
        }
        needed
    }

    pub(super) fn run(mut self) -> Result<LpSolution> {
        let needs_phase_one = self.initial_basis();
        if needs_phase_one {
            let cost: Vec<f64> = (0..self.num_cols())
                .map(|j| if j >= self.first_artificial { 1.0 } else { 0.0 })
                .collect();
            // Phase 1 is bounded below by zero.
            self.optimize(&cost)?;
            self.refactor()?;
            let infeasibility: f64 = (self.first_artificial..self.num_cols())
                .map(|j| self.x[j].abs())
                .sum();
            let scale = self
                .problem
                .rhs()
                .iter()
                .fold(1.0f64, |acc, v| acc.max(v.abs()));
            if infeasibility > self.opts.feasibility_tolerance * scale {
                return Ok(self.finish(LpStatus::Infeasible));
            }
            self.retire_artificials()?;
        }
        let mut cost = self.problem.objective().to_vec();
        cost.resize(self.num_cols(), 0.0);
        match self.optimize(&cost)? {
            Step::Unbounded => Ok(self.finish(LpStatus::Unbounded)),
            Step::Optimal => {
                self.refactor()?;
                Ok(self.finish(LpStatus::Optimal))
            }
        }
    }

    fn finish(self, status: LpStatus) -> LpSolution {
        let mut x = self.x[..self.vars].to_vec();
        if status == LpStatus::Optimal {
            // Basic values may sit within the feasibility tolerance outside
            // their bounds; report them on the bound.
            for (j, v) in x.iter_mut().enumerate() {
                *v = v.clamp(self.lb[j], self.ub[j]);
            }
        }
        let objective_value = self.problem.objective_value(&x);
        LpSolution {
            status,
            x,
            objective_value,
            iterations: self.iterations,
        }
    }

    /// Pivots basic artificials out where possible and pins all of them to 0.
    fn retire_artificials(&mut self) -> Result<()> {
        let rows = self.rows;
        for k in 0..rows {
            let art = self.basis[k];
            if art < self.first_artificial {
                continue;
            }
            let rho = &self.binv[k * rows..(k + 1) * rows];
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.first_artificial {
                if self.state[j] == State::Basic || self.lb[j] == self.ub[j] {
                    continue;
                }
                let v: f64 = self.column(j).map(|(i, a)| rho[i] * a).sum();
                if v.abs() > 1e-7 && best.is_none_or(|(_, b)| v.abs() > b.abs()) {
                    best = Some((j, v));
                }
            }
            if let Some((j, _)) = best {
                let alpha = self.ftran(j);
                self.pivot(k, j, &alpha);
                self.state[art] = State::AtLower;
                self.x[art] = 0.0;
            }
        }
        for j in self.first_artificial..self.num_cols() {
            self.ub[j] = 0.0;
            if self.state[j] != State::Basic {
                self.state[j] = State::AtLower;
                self.x[j] = 0.0;
            }
        }
        self.refactor()
    }

    /// `B⁻¹ a_j`.
    fn ftran(&self, j: usize) -> Vec<f64> {
        let rows = self.rows;
        let mut alpha = vec![0.0; rows];
        for (i, a) in self.column(j) {
            for (k, out) in alpha.iter_mut().enumerate() {
                *out += self.binv[k * rows + i] * a;
            }
        }
        alpha
    }

    fn pivot(&mut self, k: usize, entering: usize, alpha: &[f64]) {
        let rows = self.rows;
        let piv = alpha[k];
        for v in &mut self.binv[k * rows..(k + 1) * rows] {
            *v /= piv;
        }
        let (before, rest) = self.binv.split_at_mut(k * rows);
        let (pivot_row, after) = rest.split_at_mut(rows);
        for (i, row) in before.chunks_exact_mut(rows).enumerate() {
            let f = alpha[i];
            if f != 0.0 {
                row.iter_mut()
                    .zip(pivot_row.iter())
                    .for_each(|(a, b)| *a -= f * b);
            }
        }
        for (off, row) in after.chunks_exact_mut(rows).enumerate() {
            let f = alpha[k + 1 + off];
            if f != 0.0 {
                row.iter_mut()
                    .zip(pivot_row.iter())
                    .for_each(|(a, b)| *a -= f * b);
            }
        }
        self.basis[k] = entering;
        self.state[entering] = State::Basic;
        self.since_refactor += 1;
    }

    /// Rebuilds `B⁻¹` by Gauss–Jordan elimination and recomputes basic values.
    fn refactor(&mut self) -> Result<()> {
        let rows = self.rows;
        self.since_refactor = 0;
        if rows == 0 {
            return Ok(());
        }
        let mut b = vec![0.0; rows * rows];
        for (k, &j) in self.basis.iter().enumerate() {
            for (i, a) in self.column(j) {
                b[i * rows + k] = a;
            }
        }
        let mut inv = vec![0.0; rows * rows];
        for i in 0..rows {
            inv[i * rows + i] = 1.0;
        }
        for c in 0..rows {
            let p = (c..rows)
                .max_by(|&a, &b2| b[a * rows + c].abs().total_cmp(&b[b2 * rows + c].abs()))
                .expect("nonempty range");
            if b[p * rows + c].abs() < 1e-13 {
                return Err(Error::SingularBasis);
            }
            if p != c {
                for col in 0..rows {
                    b.swap(p * rows + col, c * rows + col);
                    inv.swap(p * rows + col, c * rows + col);
                }
            }
            let d = b[c * rows + c];
            for col in 0..rows {
                b[c * rows + col] /= d;
                inv[c * rows + col] /= d;
            }
            for r in 0..rows {
                if r == c {
                    continue;
                }
                let f = b[r * rows + c];
                if f != 0.0 {
                    for col in 0..rows {
                        b[r * rows + col] -= f * b[c * rows + col];
                        inv[r * rows + col] -= f * inv[c * rows + col];
                    }
                }
            }
        }
        self.binv = inv;

        let mut residual = self.problem.rhs().to_vec();
        for j in 0..self.num_cols() {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                let xj = self.x[j];
                for (i, a) in self.column(j).collect::<Vec<_>>() {
                    residual[i] -= a * xj;
                }
            }
        }
        for k in 0..rows {
            let row = &self.binv[k * rows..(k + 1) * rows];
            self.x[self.basis[k]] = row.iter().zip(&residual).map(|(a, b)| a * b).sum();
        }
        Ok(())
    }

    fn optimize(&mut self, cost: &[f64]) -> Result<Step> {
        let rows = self.rows;
        let opt_tol = self.opts.optimality_tolerance;
        let piv_tol = self.opts.pivot_tolerance;
        let stall_limit = 3 * (rows + self.vars);
        let mut stalled = 0usize;
        let mut best_obj = self.phase_objective(cost);
        let mut y = vec![0.0; rows];

        loop {
            if self.since_refactor >= self.opts.refactor_interval {
                self.refactor()?;
            }
            let bland = stalled >= stall_limit;

            y.iter_mut().for_each(|v| *v = 0.0);
            for (k, &j) in self.basis.iter().enumerate() {
                let c = cost[j];
                if c != 0.0 {
                    let row = &self.binv[k * rows..(k + 1) * rows];
                    y.iter_mut().zip(row).for_each(|(yi, b)| *yi += c * b);
                }
            }

            // Pricing: Dantzig's largest reduced cost, or Bland's lowest index.
            let mut entering: Option<(usize, f64, f64)> = None;
            for j in 0..self.num_cols() {
                let st = self.state[j];
                if st == State::Basic || self.lb[j] == self.ub[j] {
                    continue;
                }
                let dj = cost[j] - self.column(j).map(|(i, a)| y[i] * a).sum::<f64>();
                let dir = match st {
                    State::AtLower if dj < -opt_tol => 1.0,
                    State::AtUpper if dj > opt_tol => -1.0,
                    State::Free if dj.abs() > opt_tol => -dj.signum(),
                    _ => continue,
                };
                if bland {
                    entering = Some((j, dir, dj));
                    break;
                }
                if entering.is_none_or(|(_, _, best)| dj.abs() > best.abs()) {
                    entering = Some((j, dir, dj));
                }
            }
            let Some((q, dir, _)) = entering else {
                return Ok(Step::Optimal);
            };

            if self.iterations >= self.max_iterations {
                return Err(Error::IterationLimit(self.max_iterations));
            }
            self.iterations += 1;

            let alpha = self.ftran(q);
            // x_B moves by `-dir * alpha * t` as the entering variable moves by `dir * t`.
            let mut t_min = f64::INFINITY;
            for k in 0..rows {
                if alpha[k].abs() <= piv_tol {
                    continue;
                }
                if let Some(t) = self.row_limit(k, -dir * alpha[k]) {
                    t_min = t_min.min(t);
                }
            }
            let flip = self.ub[q] - self.lb[q];
            if t_min.is_infinite() && flip.is_infinite() {
                return Ok(Step::Unbounded);
            }

            if flip <= t_min {
                let t = flip;
                for k in 0..rows {
                    let j = self.basis[k];
                    self.x[j] -= dir * alpha[k] * t;
                }
                if dir > 0.0 {
                    self.state[q] = State::AtUpper;
                    self.x[q] = self.ub[q];
                } else {
                    self.state[q] = State::AtLower;
                    self.x[q] = self.lb[q];
                }
            } else {
                let slack = t_min * (1.0 + 1e-9) + 1e-12;
                let mut leave: Option<usize> = None;
                for k in 0..rows {
                    if alpha[k].abs() <= piv_tol {
                        continue;
                    }
                    match self.row_limit(k, -dir * alpha[k]) {
                        Some(t) if t <= slack => {}
                        _ => continue,
                    }
                    leave = match leave {
                        None => Some(k),
                        Some(prev) if bland && self.basis[k] < self.basis[prev] => Some(k),
                        Some(prev) if !bland && alpha[k].abs() > alpha[prev].abs() => Some(k),
                        keep => keep,
                    };
                }
                let k = leave.expect("a finite ratio exists");
                let t = self.row_limit(k, -dir * alpha[k]).unwrap_or(t_min);
                for (kk, &a) in alpha.iter().enumerate() {
                    let j = self.basis[kk];
                    self.x[j] -= dir * a * t;
                }
                self.x[q] += dir * t;
                let out = self.basis[k];
                if -dir * alpha[k] < 0.0 {
                    self.state[out] = State::AtLower;
                    self.x[out] = self.lb[out];
                } else {
                    self.state[out] = State::AtUpper;
                    self.x[out] = self.ub[out];
                }
                self.pivot(k, q, &alpha);
            }

            let obj = self.phase_objective(cost);
            if obj < best_obj - 1e-12 * (1.0 + best_obj.abs()) {
                best_obj = obj;
                stalled = 0;
            } else {
                stalled += 1;
            }
        }
    }

    /// Step length at which basis position `k`, moving at `rate` per unit
    /// step, reaches the bound it is heading towards.
    fn row_limit(&self, k: usize, rate: f64) -> Option<f64> {
        let j = self.basis[k];
        if rate < 0.0 && self.lb[j].is_finite() {
            Some(((self.x[j] - self.lb[j]) / -rate).max(0.0))
        } else if rate > 0.0 && self.ub[j].is_finite() {
            Some(((self.ub[j] - self.x[j]) / rate).max(0.0))
        } else {
            None
        }
    }

    fn phase_objective(&self, cost: &[f64]) -> f64 {
        cost.iter()
            .zip(&self.x)
            .filter(|(c, _)| **c != 0.0)
            .map(|(c, v)| c * v)
            .sum()
    }
}
