//! Dense revised simplex over bounded structural and logical variables.
//!
//! Phase 1 minimizes the sum of bound infeasibilities of the basic variables,
//! which lets the method start from any basis (in particular a previous optimum
//! extended by new rows). Phase 2 prices with Dantzig's rule and falls back to
//! Bland's rule after a run of degenerate pivots.

use super::{Basis, LpError, LpOptions, LpProblem, LpSolution, LpStatus, Relation};
use crate::linalg::{independent_set, invert_in_place};

const NONBASIC: usize = usize::MAX;
const DEGENERATE_STEP: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Place {
    Lower,
    Upper,
    Zero,
}

enum Step {
    Flip(f64),
    Pivot {
        row: usize,
        theta: f64,
        target: f64,
        place: Place,
    },
    Unbounded,
}

/// Solves `p` from the all-logical basis.
pub fn solve_lp(p: &LpProblem, opts: &LpOptions) -> Result<LpSolution, LpError> {
    solve_lp_warm(p, opts, None)
}

/// Solves `p`, starting from `warm` when given. A warm basis may come from a
/// problem with the same variables and fewer rows; the new rows start with
/// their logicals basic.
pub fn solve_lp_warm(p: &LpProblem, opts: &LpOptions, warm: Option<&Basis>) -> Result<LpSolution, LpError> {
    p.validate()?;
    let mut s = Simplex::new(p, *opts);
    let started = match warm {
        Some(b) => s.start_from(b).is_ok(),
        None => false,
    };
    if !started {
        s.start_cold()?;
    }
    s.run()
}

struct Simplex<'a> {
    p: &'a LpProblem,
    opts: LpOptions,
    n: usize,
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lo: Vec<f64>,
    up: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    head: Vec<usize>,
    pos: Vec<usize>,
    place: Vec<Place>,
    binv: Vec<f64>,
    since_refactor: usize,
    iterations: usize,
    degenerate_run: usize,
    bland: bool,
    ptol: f64,
    dtol: f64,
    max_iter: usize,
}

impl<'a> Simplex<'a> {
    fn new(p: &'a LpProblem, opts: LpOptions) -> Self {
        let n = p.num_vars();
        let m = p.num_rows();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut lo = p.lower.clone();
        let mut up = p.upper.clone();
        let mut cost = p.cost.clone();
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (i, row) in p.rows.iter().enumerate() {
            merged.clear();
            merged.extend_from_slice(&row.terms);
            merged.sort_by_key(|t| t.0);
            let mut k = 0;
            while k < merged.len() {
                let j = merged[k].0;
                let mut a = 0.0;
                while k < merged.len() && merged[k].0 == j {
                    a += merged[k].1;
                    k += 1;
                }
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
            let (l, u) = match row.relation {
                Relation::Le => (f64::NEG_INFINITY, row.rhs),
                Relation::Ge => (row.rhs, f64::INFINITY),
                Relation::Eq => (row.rhs, row.rhs),
            };
            lo.push(l);
            up.push(u);
            cost.push(0.0);
        }
        let cmax = p.cost.iter().fold(1.0f64, |s, c| s.max(c.abs()));
        let max_iter = if opts.max_iter > 0 {
            opts.max_iter
        } else {
            (50 * (n + m)).max(10_000)
        };
        Self {
            p,
            opts,
            n,
            m,
            cols,
            lo,
            up,
            cost,
            x: vec![0.0; n + m],
            head: Vec::new(),
            pos: vec![NONBASIC; n + m],
            place: vec![Place::Lower; n + m],
            binv: Vec::new(),
            since_refactor: 0,
            iterations: 0,
            degenerate_run: 0,
            bland: false,
            ptol: opts.feas_tol * 1e-2,
            dtol: opts.opt_tol * cmax,
            max_iter,
        }
    }

    fn place_nonbasic(&mut self, j: usize, prefer_upper: bool) {
        let (l, u) = (self.lo[j], self.up[j]);
        let place = if prefer_upper && u.is_finite() {
            Place::Upper
        } else if l.is_finite() {
            Place::Lower
        } else if u.is_finite() {
            Place::Upper
        } else {
            Place::Zero
        };
        self.place[j] = place;
        self.x[j] = match place {
            Place::Lower => l,
            Place::Upper => u,
            Place::Zero => 0.0,
        };
    }

    fn start_cold(&mut self) -> Result<(), LpError> {
        self.pos.iter_mut().for_each(|v| *v = NONBASIC);
        self.head = (self.n..self.n + self.m).collect();
        for (k, &j) in self.head.iter().enumerate() {
            self.pos[j] = k;
        }
        for j in 0..self.n {
            self.place_nonbasic(j, false);
        }
        self.refactor()?;
        self.compute_basics();
        Ok(())
    }

    fn start_from(&mut self, b: &Basis) -> Result<(), LpError> {
        if b.num_vars != self.n || b.num_rows > self.m || b.head.len() != b.num_rows {
            return Err(LpError::Invalid("warm basis does not fit the problem".into()));
        }
        self.pos.iter_mut().for_each(|v| *v = NONBASIC);
        let mut head = b.head.clone();
        head.extend(self.n + b.num_rows..self.n + self.m);
        for (k, &j) in head.iter().enumerate() {
            if j >= self.n + self.m || self.pos[j] != NONBASIC {
                return Err(LpError::Invalid("warm basis repeats a variable".into()));
            }
            self.pos[j] = k;
        }
        self.head = head;
        for j in 0..self.n + self.m {
            if self.pos[j] == NONBASIC {
                let upper = b.at_upper.get(j).copied().unwrap_or(false);
                self.place_nonbasic(j, upper);
            }
        }
        self.refactor()?;
        self.compute_basics();
        Ok(())
    }

    #[inline]
    fn for_col(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for &(i, a) in &self.cols[j] {
                f(i, a);
            }
        } else {
            f(j - self.n, -1.0);
        }
    }

    /// Rebuilds the explicit basis inverse. Logical columns are signed unit
    /// vectors, so only the block of structural columns over the rows not
    /// covered by a basic logical needs a dense inversion.
    fn refactor(&mut self) -> Result<(), LpError> {
        let (n, m) = (self.n, self.m);
        let mut covered = vec![NONBASIC; m];
        let mut structural = Vec::new();
        for (p, &j) in self.head.iter().enumerate() {
            if j >= n {
                covered[j - n] = p;
            } else {
                structural.push(p);
            }
        }
        let free_rows: Vec<usize> = (0..m).filter(|&i| covered[i] == NONBASIC).collect();
        let k = structural.len();
        if free_rows.len() != k {
            return Err(LpError::SingularBasis("basis repeats a logical".into()));
        }
        let mut rpos = vec![NONBASIC; m];
        for (a, &i) in free_rows.iter().enumerate() {
            rpos[i] = a;
        }
        let mut block = vec![0.0; k * k];
        for (b, &p) in structural.iter().enumerate() {
            for &(i, v) in &self.cols[self.head[p]] {
                if rpos[i] != NONBASIC {
                    block[rpos[i] * k + b] = v;
                }
            }
        }
        let inv = match invert_in_place(&mut block.clone(), k, 1e-12) {
            Some(inv) => inv,
            None => {
                self.repair(&block, &structural, &free_rows)?;
                return self.refactor();
            }
        };
        let mut binv = vec![0.0; m * m];
        for (b, &p) in structural.iter().enumerate() {
            let row = &mut binv[p * m..(p + 1) * m];
            for (a, &i) in free_rows.iter().enumerate() {
                row[i] = inv[b * k + a];
            }
        }
        for i in 0..m {
            if covered[i] != NONBASIC {
                binv[covered[i] * m + i] = -1.0;
            }
        }
        for (b, &p) in structural.iter().enumerate() {
            for &(i, v) in &self.cols[self.head[p]] {
                let q = covered[i];
                if q == NONBASIC {
                    continue;
                }
                let row = &mut binv[q * m..(q + 1) * m];
                for (a, &r) in free_rows.iter().enumerate() {
                    row[r] += v * inv[b * k + a];
                }
            }
        }
        self.binv = binv;
        self.since_refactor = 0;
        Ok(())
    }

    /// Swaps dependent structural columns out of the basis for the logicals
    /// of the rows they left uncovered. Their values stay put, so the basics
    /// may turn infeasible and phase 1 resumes.
    fn repair(&mut self, block: &[f64], structural: &[usize], free_rows: &[usize]) -> Result<(), LpError> {
        let k = structural.len();
        let (col_ok, row_ok) = independent_set(block, k, 1e-9);
        let spare: Vec<usize> = (0..k).filter(|&a| !row_ok[a]).map(|a| free_rows[a]).collect();
        let dropped: Vec<usize> = (0..k).filter(|&b| !col_ok[b]).map(|b| structural[b]).collect();
        if spare.len() != dropped.len() || dropped.is_empty() {
            return Err(LpError::SingularBasis(format!(
                "{k} structural columns are linearly dependent"
            )));
        }
        for (&p, &i) in dropped.iter().zip(&spare) {
            let j = self.head[p];
            let (l, u) = (self.lo[j], self.up[j]);
            let xj = self.x[j];
            self.place[j] = if l.is_finite() && (!u.is_finite() || xj - l <= u - xj) {
                Place::Lower
            } else if u.is_finite() {
                Place::Upper
            } else {
                Place::Zero
            };
            self.x[j] = match self.place[j] {
                Place::Lower => l,
                Place::Upper => u,
                Place::Zero => 0.0,
            };
            self.pos[j] = NONBASIC;
            self.head[p] = self.n + i;
            self.pos[self.n + i] = p;
        }
        self.bland = false;
        self.degenerate_run = 0;
        Ok(())
    }

    fn compute_basics(&mut self) {
        let m = self.m;
        let mut rhs = vec![0.0; m];
        for j in 0..self.n + self.m {
            if self.pos[j] != NONBASIC || self.x[j] == 0.0 {
                continue;
            }
            let xj = self.x[j];
            self.for_col(j, |i, a| rhs[i] -= a * xj);
        }
        for p in 0..m {
            let row = &self.binv[p * m..(p + 1) * m];
            let v: f64 = row.iter().zip(&rhs).map(|(b, r)| b * r).sum();
            self.x[self.head[p]] = v;
        }
    }

    /// Phase-1 cost of basis position `p`: -1 below lower, +1 above upper.
    fn infeasibility_sign(&self, p: usize) -> f64 {
        let j = self.head[p];
        if self.x[j] < self.lo[j] - self.ptol {
            -1.0
        } else if self.x[j] > self.up[j] + self.ptol {
            1.0
        } else {
            0.0
        }
    }

    fn duals(&self, phase1: bool) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for p in 0..m {
            let c = if phase1 {
                self.infeasibility_sign(p)
            } else {
                self.cost[self.head[p]]
            };
            if c == 0.0 {
                continue;
            }
            let row = &self.binv[p * m..(p + 1) * m];
            for (yi, b) in y.iter_mut().zip(row) {
                *yi += c * b;
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64], phase1: bool) -> f64 {
        let c = if phase1 { 0.0 } else { self.cost[j] };
        let mut d = c;
        self.for_col(j, |i, a| d -= y[i] * a);
        d
    }

    /// Entering variable and direction (+1 increase, -1 decrease).
    fn price(&self, y: &[f64], phase1: bool) -> Option<(usize, f64)> {
        let tol = if phase1 { self.opts.opt_tol } else { self.dtol };
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.n + self.m {
            if self.pos[j] != NONBASIC || self.lo[j] == self.up[j] {
                continue;
            }
            let d = self.reduced_cost(j, y, phase1);
            let dir = match self.place[j] {
                Place::Lower if d < -tol => 1.0,
                Place::Upper if d > tol => -1.0,
                Place::Zero if d.abs() > tol => -d.signum(),
                _ => continue,
            };
            if self.bland {
                return Some((j, dir));
            }
            if d.abs() > best_score {
                best_score = d.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    fn column_image(&self, q: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        let mut entries: Vec<(usize, f64)> = Vec::new();
        self.for_col(q, |i, a| entries.push((i, a)));
        for (p, out) in alpha.iter_mut().enumerate() {
            let row = &self.binv[p * m..(p + 1) * m];
            *out = entries.iter().map(|&(i, a)| row[i] * a).sum();
        }
        alpha
    }

    fn ratio_test(&self, alpha: &[f64], q: usize, dir: f64, phase1: bool) -> Step {
        struct Cand {
            row: usize,
            ratio: f64,
            rate: f64,
            target: f64,
            place: Place,
        }
        let tol = self.ptol;
        let mut cands: Vec<Cand> = Vec::new();
        let mut relaxed_min = f64::INFINITY;
        for (p, &a) in alpha.iter().enumerate() {
            let rate = -dir * a;
            if rate.abs() < self.opts.pivot_tol {
                continue;
            }
            let j = self.head[p];
            let xv = self.x[j];
            let (target, place) = if phase1 && xv < self.lo[j] - tol {
                if rate > 0.0 {
                    (self.lo[j], Place::Lower)
                } else {
                    continue;
                }
            } else if phase1 && xv > self.up[j] + tol {
                if rate < 0.0 {
                    (self.up[j], Place::Upper)
                } else {
                    continue;
                }
            } else if rate < 0.0 && self.lo[j].is_finite() {
                (self.lo[j], Place::Lower)
            } else if rate > 0.0 && self.up[j].is_finite() {
                (self.up[j], Place::Upper)
            } else {
                continue;
            };
            let ratio = ((target - xv) / rate).max(0.0);
            let relaxed = ((target - xv + rate.signum() * tol) / rate).max(0.0);
            relaxed_min = relaxed_min.min(relaxed);
            cands.push(Cand {
                row: p,
                ratio,
                rate,
                target,
                place,
            });
        }
        let flip = if self.lo[q].is_finite() && self.up[q].is_finite() {
            Some(self.up[q] - self.lo[q])
        } else {
            None
        };
        if cands.is_empty() {
            return match flip {
                Some(f) => Step::Flip(f),
                None => Step::Unbounded,
            };
        }
        let chosen = if self.bland {
            let min_ratio = cands.iter().map(|c| c.ratio).fold(f64::INFINITY, f64::min);
            let slack = 1e-12 * (1.0 + min_ratio);
            cands
                .iter()
                .filter(|c| c.ratio <= min_ratio + slack)
                .min_by_key(|c| self.head[c.row])
                .unwrap()
        } else {
            let mut pick: Option<&Cand> = None;
            for c in cands.iter().filter(|c| c.ratio <= relaxed_min) {
                if pick.is_none_or(|b| c.rate.abs() > b.rate.abs()) {
                    pick = Some(c);
                }
            }
            pick.unwrap()
        };
        if let Some(f) = flip {
            if f <= chosen.ratio {
                return Step::Flip(f);
            }
        }
        Step::Pivot {
            row: chosen.row,
            theta: chosen.ratio,
            target: chosen.target,
            place: chosen.place,
        }
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) -> Result<(), LpError> {
        let m = self.m;
        let piv = alpha[r];
        if piv.abs() < self.opts.pivot_tol * 1e-3 {
            return Err(LpError::Numerical(format!("pivot element {piv:e} too small")));
        }
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (prow, after) = rest.split_at_mut(m);
        for v in prow.iter_mut() {
            *v /= piv;
        }
        for (p, row) in before.chunks_exact_mut(m).enumerate() {
            let f = alpha[p];
            if f != 0.0 {
                row.iter_mut().zip(prow.iter()).for_each(|(a, b)| *a -= f * b);
            }
        }
        for (k, row) in after.chunks_exact_mut(m).enumerate() {
            let f = alpha[r + 1 + k];
            if f != 0.0 {
                row.iter_mut().zip(prow.iter()).for_each(|(a, b)| *a -= f * b);
            }
        }
        let leaving = self.head[r];
        self.pos[leaving] = NONBASIC;
        self.head[r] = q;
        self.pos[q] = r;
        self.since_refactor += 1;
        Ok(())
    }

    fn max_row_violation(&self) -> f64 {
        let x = &self.x[..self.n];
        let mut worst: f64 = 0.0;
        for j in 0..self.n {
            worst = worst.max(self.lo[j] - x[j]).max(x[j] - self.up[j]);
        }
        for row in &self.p.rows {
            worst = worst.max(row.violation(x) / row.rhs.abs().max(1.0));
        }
        worst
    }

    fn run(mut self) -> Result<LpSolution, LpError> {
        loop {
            if self.iterations >= self.max_iter {
                return Err(LpError::IterationLimit(self.max_iter));
            }
            if self.since_refactor >= self.opts.refactor_every {
                self.refactor()?;
                self.compute_basics();
            }
            let phase1 = (0..self.m).any(|p| self.infeasibility_sign(p) != 0.0);
            let y = self.duals(phase1);
            let Some((q, dir)) = self.price(&y, phase1) else {
                if self.since_refactor > 0 {
                    self.refactor()?;
                    self.compute_basics();
                    continue;
                }
                if phase1 {
                    return Ok(self.finish(LpStatus::Infeasible));
                }
                if self.max_row_violation() > self.opts.feas_tol {
                    return Err(LpError::Numerical(format!(
                        "optimal basis violates rows by {:e}",
                        self.max_row_violation()
                    )));
                }
                return Ok(self.finish(LpStatus::Optimal));
            };
            let alpha = self.column_image(q);
            let step = self.ratio_test(&alpha, q, dir, phase1);
            self.iterations += 1;
            let theta = match step {
                Step::Unbounded => {
                    if phase1 {
                        return Err(LpError::Numerical("phase 1 ray without a bound".into()));
                    }
                    return Ok(self.finish(LpStatus::Unbounded));
                }
                Step::Flip(theta) => {
                    self.advance(&alpha, q, dir, theta);
                    self.place[q] = if dir > 0.0 { Place::Upper } else { Place::Lower };
                    self.x[q] = if dir > 0.0 { self.up[q] } else { self.lo[q] };
                    theta
                }
                Step::Pivot {
                    row,
                    theta,
                    target,
                    place,
                } => {
                    self.advance(&alpha, q, dir, theta);
                    let leaving = self.head[row];
                    self.pivot(row, q, &alpha)?;
                    self.x[leaving] = target;
                    self.place[leaving] = place;
                    theta
                }
            };
            if theta < DEGENERATE_STEP {
                self.degenerate_run += 1;
                if self.degenerate_run >= self.opts.bland_after {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
                self.bland = false;
            }
        }
    }

    fn advance(&mut self, alpha: &[f64], q: usize, dir: f64, theta: f64) {
        if theta == 0.0 {
            return;
        }
        self.x[q] += dir * theta;
        for (p, &a) in alpha.iter().enumerate() {
            if a != 0.0 {
                self.x[self.head[p]] -= dir * a * theta;
            }
        }
    }

    fn finish(self, status: LpStatus) -> LpSolution {
        let x = self.x[..self.n].to_vec();
        let (objective, duals) = match status {
            LpStatus::Optimal => (self.p.objective(&x), self.duals(false)),
            LpStatus::Infeasible => (f64::INFINITY, Vec::new()),
            LpStatus::Unbounded => (f64::NEG_INFINITY, Vec::new()),
        };
        let at_upper = (0..self.n + self.m)
            .map(|j| self.pos[j] == NONBASIC && self.place[j] == Place::Upper)
            .collect();
        LpSolution {
            status,
            x,
            objective,
            duals,
            iterations: self.iterations,
            basis: Some(Basis {
                num_vars: self.n,
                num_rows: self.m,
                head: self.head,
                at_upper,
            }),
        }
    }
}
