//! Primal-dual interior point solver for block-diagonal Hermitian semidefinite
//! programs with an optional nonnegative orthant.
//!
//! Standard form:
//! `min sum_b <C_b, X_b> + c.x  s.t.  sum_b <A_ib, X_b> + a_i.x = b_i,  X_b ⪰ 0, x >= 0`
//! with `<A, X> = Re Tr(A X)`. Directions are HKM with Mehrotra
//! predictor-corrector steps from an infeasible start.

use super::mat::{c, hermitian_part, trace_product, CMat, C64};
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConicError {
    #[error("conic program is infeasible")]
    Infeasible,
    #[error("conic program is unbounded")]
    Unbounded,
    #[error("numerical failure after {iterations} iterations (duality gap {gap:.3e}, infeasibility {infeasibility:.3e})")]
    NumericalFailure { gap: f64, infeasibility: f64, iterations: usize },
}

/// One scalar constraint. Entries are `(block, row, col, value)` of a Hermitian
/// matrix; both `(r, c)` and `(c, r)` are stored when off-diagonal.
#[derive(Debug, Clone, Default)]
pub struct Constraint {
    pub entries: Vec<(usize, usize, usize, C64)>,
    pub lin: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct ConicProblem {
    pub blocks: Vec<usize>,
    pub n_lin: usize,
    pub cost: Vec<CMat>,
    pub cost_lin: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub maximize: bool,
    /// Restrict to real symmetric matrices (imaginary parts are not constrained).
    pub real: bool,
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone)]
pub struct ConicSolution {
    pub x: Vec<CMat>,
    pub x_lin: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<CMat>,
    pub s_lin: Vec<f64>,
    /// Objective values in the caller's sense (max or min).
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub infeasibility: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl Default for ConicProblem {
    fn default() -> Self {
        Self::new()
    }
}

impl ConicProblem {
    pub fn new() -> Self {
        Self {
            blocks: Vec::new(),
            n_lin: 0,
            cost: Vec::new(),
            cost_lin: Vec::new(),
            constraints: Vec::new(),
            maximize: false,
            real: false,
            tol: 1e-9,
            max_iter: 120,
        }
    }

    pub fn maximizing(mut self) -> Self {
        self.maximize = true;
        self
    }

    pub fn real_valued(mut self, real: bool) -> Self {
        self.real = real;
        self
    }

    pub fn add_block(&mut self, d: usize) -> usize {
        self.blocks.push(d);
        self.cost.push(CMat::zeros(d, d));
        self.blocks.len() - 1
    }

    pub fn add_nonneg(&mut self) -> usize {
        self.n_lin += 1;
        self.cost_lin.push(0.0);
        self.n_lin - 1
    }

    /// Adds `scale * <w, X_b>` to the objective.
    pub fn add_cost(&mut self, b: usize, w: &CMat, scale: f64) {
        self.cost[b] += hermitian_part(w) * c(scale, 0.0);
    }

    pub fn add_cost_lin(&mut self, k: usize, v: f64) {
        self.cost_lin[k] += v;
    }

    /// `sum w Tr X_b + sum a x_k = rhs`.
    pub fn trace_equal(&mut self, terms: &[(usize, f64)], lin: &[(usize, f64)], rhs: f64) {
        let mut entries = Vec::new();
        for &(b, w) in terms {
            for r in 0..self.blocks[b] {
                entries.push((b, r, r, c(w, 0.0)));
            }
        }
        self.constraints.push(Constraint { entries, lin: lin.to_vec(), rhs });
    }

    /// `sum <W, X_b> + sum a x_k = rhs` for Hermitian `W`.
    pub fn linear_equal(&mut self, terms: &[(usize, &CMat)], lin: &[(usize, f64)], rhs: f64) {
        let mut entries = Vec::new();
        for &(b, w) in terms {
            let h = hermitian_part(w);
            for r in 0..h.nrows() {
                for col in 0..h.ncols() {
                    let v = h[(r, col)];
                    let v = if self.real { c(v.re, 0.0) } else { v };
                    if v.norm() > 0.0 {
                        entries.push((b, r, col, v));
                    }
                }
            }
        }
        self.constraints.push(Constraint { entries, lin: lin.to_vec(), rhs });
    }

    /// `sum w X_b = rhs` entrywise, one constraint per real degree of freedom.
    pub fn matrix_equal(&mut self, terms: &[(usize, f64)], rhs: &CMat) {
        let d = rhs.nrows();
        for r in 0..d {
            for col in r..d {
                if r == col {
                    let entries = terms.iter().map(|&(b, w)| (b, r, r, c(w, 0.0))).collect();
                    self.constraints.push(Constraint { entries, lin: vec![], rhs: rhs[(r, r)].re });
                    continue;
                }
                let mut entries = Vec::new();
                for &(b, w) in terms {
                    entries.push((b, r, col, c(0.5 * w, 0.0)));
                    entries.push((b, col, r, c(0.5 * w, 0.0)));
                }
                self.constraints.push(Constraint { entries, lin: vec![], rhs: rhs[(r, col)].re });
                if !self.real {
                    let mut entries = Vec::new();
                    for &(b, w) in terms {
                        entries.push((b, r, col, c(0.0, 0.5 * w)));
                        entries.push((b, col, r, c(0.0, -0.5 * w)));
                    }
                    self.constraints.push(Constraint { entries, lin: vec![], rhs: rhs[(r, col)].im });
                }
            }
        }
    }

    /// Solves to tolerance; a stalled run is a `NumericalFailure`.
    pub fn solve(&self) -> Result<ConicSolution, ConicError> {
        let sol = self.solve_best_effort()?;
        if sol.converged {
            Ok(sol)
        } else {
            Err(ConicError::NumericalFailure { gap: sol.gap, infeasibility: sol.infeasibility, iterations: sol.iterations })
        }
    }

    /// Like `solve`, but returns the last iterate of a stalled run with
    /// `converged == false`.
    pub fn solve_best_effort(&self) -> Result<ConicSolution, ConicError> {
        Solver::new(self).run()
    }
}

type Entries = Vec<(usize, usize, C64)>;

struct Solver<'a> {
    p: &'a ConicProblem,
    m: usize,
    /// Per block: (constraint, entries in that block), in constraint order.
    per_block: Vec<Vec<(usize, Entries)>>,
    /// Per orthant variable: (constraint, coefficient).
    per_lin: Vec<Vec<(usize, f64)>>,
    cost: Vec<CMat>,
    cost_lin: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Clone)]
struct Iterate {
    x: Vec<CMat>,
    xl: Vec<f64>,
    y: Vec<f64>,
    s: Vec<CMat>,
    sl: Vec<f64>,
}

struct Direction {
    dx: Vec<CMat>,
    dxl: Vec<f64>,
    dy: Vec<f64>,
    ds: Vec<CMat>,
    dsl: Vec<f64>,
}

fn frob(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn cholesky_inverse(m: &CMat) -> Option<CMat> {
    nalgebra::Cholesky::new(hermitian_part(m)).map(|ch| ch.inverse())
}

/// Largest `a` with `x + a dx ⪰ 0` (infinite if none).
fn max_step(x: &CMat, dx: &CMat) -> f64 {
    let Some(ch) = nalgebra::Cholesky::new(hermitian_part(x)) else { return 0.0 };
    let l = ch.l();
    let d = x.nrows();
    let Some(linv) = l.solve_lower_triangular(&CMat::identity(d, d)) else { return 0.0 };
    let w = &linv * dx * linv.adjoint();
    let lam = nalgebra::SymmetricEigen::new(hermitian_part(&w)).eigenvalues.min();
    if lam < 0.0 {
        -1.0 / lam
    } else {
        f64::INFINITY
    }
}

fn max_step_lin(x: &[f64], dx: &[f64]) -> f64 {
    x.iter().zip(dx).filter(|(_, d)| **d < 0.0).map(|(v, d)| -v / d).fold(f64::INFINITY, f64::min)
}

impl<'a> Solver<'a> {
    fn new(p: &'a ConicProblem) -> Self {
        let m = p.constraints.len();
        let mut per_block: Vec<Vec<(usize, Entries)>> = vec![Vec::new(); p.blocks.len()];
        let mut per_lin: Vec<Vec<(usize, f64)>> = vec![Vec::new(); p.n_lin];
        for (i, con) in p.constraints.iter().enumerate() {
            let mut grouped: BTreeMap<usize, Entries> = BTreeMap::new();
            for &(b, r, col, v) in &con.entries {
                grouped.entry(b).or_default().push((r, col, v));
            }
            for (b, e) in grouped {
                per_block[b].push((i, e));
            }
            for &(k, a) in &con.lin {
                per_lin[k].push((i, a));
            }
        }
        let sign = if p.maximize { -1.0 } else { 1.0 };
        Self {
            p,
            m,
            per_block,
            per_lin,
            cost: p
                .cost
                .iter()
                .map(|m| {
                    let mut h = hermitian_part(m) * c(sign, 0.0);
                    if p.real {
                        h.iter_mut().for_each(|v| v.im = 0.0);
                    }
                    h
                })
                .collect(),
            cost_lin: p.cost_lin.iter().map(|v| v * sign).collect(),
            b: p.constraints.iter().map(|con| con.rhs).collect(),
        }
    }

    fn apply_a(&self, x: &[CMat], xl: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (b, list) in self.per_block.iter().enumerate() {
            for (i, e) in list {
                out[*i] += e.iter().map(|&(r, col, v)| (v * x[b][(col, r)]).re).sum::<f64>();
            }
        }
        for (k, list) in self.per_lin.iter().enumerate() {
            for &(i, a) in list {
                out[i] += a * xl[k];
            }
        }
        out
    }

    fn apply_at(&self, y: &[f64]) -> (Vec<CMat>, Vec<f64>) {
        let mut mats: Vec<CMat> = self.p.blocks.iter().map(|&d| CMat::zeros(d, d)).collect();
        for (b, list) in self.per_block.iter().enumerate() {
            for (i, e) in list {
                for &(r, col, v) in e {
                    mats[b][(r, col)] += v * y[*i];
                }
            }
        }
        let lin = self.per_lin.iter().map(|list| list.iter().map(|&(i, a)| a * y[i]).sum()).collect();
        (mats, lin)
    }

    fn initial(&self) -> Iterate {
        let m = self.m;
        let mut x = Vec::new();
        let mut s = Vec::new();
        for (b, &d) in self.p.blocks.iter().enumerate() {
            let n = d as f64;
            let mut xi = 10f64.max(n.sqrt());
            let mut eta = 10f64.max(n.sqrt()).max(frob(&self.cost[b]));
            for (i, e) in &self.per_block[b] {
                let an = e.iter().map(|t| t.2.norm_sqr()).sum::<f64>().sqrt();
                xi = xi.max(n * (1.0 + self.b[*i].abs()) / (1.0 + an));
                eta = eta.max(an);
            }
            x.push(CMat::identity(d, d) * c(xi, 0.0));
            s.push(CMat::identity(d, d) * c(eta, 0.0));
        }
        let mut xl = vec![0.0; self.p.n_lin];
        let mut sl = vec![0.0; self.p.n_lin];
        for k in 0..self.p.n_lin {
            let mut xi: f64 = 10.0;
            let mut eta: f64 = 10f64.max(self.cost_lin[k].abs());
            for &(i, a) in &self.per_lin[k] {
                xi = xi.max((1.0 + self.b[i].abs()) / (1.0 + a.abs()));
                eta = eta.max(a.abs());
            }
            xl[k] = xi;
            sl[k] = eta;
        }
        Iterate { x, xl, y: vec![0.0; m], s, sl }
    }

    fn schur(&self, it: &Iterate, sinv: &[CMat]) -> DMatrix<f64> {
        let m = self.m;
        let mut mm = DMatrix::<f64>::zeros(m, m);
        for (b, list) in self.per_block.iter().enumerate() {
            let d = self.p.blocks[b];
            let x = &it.x[b];
            let si = &sinv[b];
            for (jj, (j, ej)) in list.iter().enumerate() {
                if ej.len() > d {
                    let mut xa = CMat::zeros(d, d);
                    for &(cc, dd, w) in ej {
                        for r in 0..d {
                            xa[(r, dd)] += x[(r, cc)] * w;
                        }
                    }
                    let t = xa * si;
                    for (i, ei) in &list[..=jj] {
                        let v: f64 = ei.iter().map(|&(a, bb, v)| (v * t[(bb, a)]).re).sum();
                        mm[(*i, *j)] += v;
                    }
                } else {
                    for (i, ei) in &list[..=jj] {
                        let mut acc = c(0.0, 0.0);
                        for &(a, bb, v) in ei {
                            for &(cc, dd, w) in ej {
                                acc += v * x[(bb, cc)] * w * si[(dd, a)];
                            }
                        }
                        mm[(*i, *j)] += acc.re;
                    }
                }
            }
        }
        for (k, list) in self.per_lin.iter().enumerate() {
            let f = it.xl[k] / it.sl[k];
            for (jj, &(j, aj)) in list.iter().enumerate() {
                for &(i, ai) in &list[..=jj] {
                    mm[(i, j)] += ai * aj * f;
                }
            }
        }
        for j in 0..m {
            for i in 0..j {
                mm[(j, i)] = mm[(i, j)];
            }
        }
        mm
    }

    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        it: &Iterate,
        sinv: &[CMat],
        solve: &dyn Fn(&[f64]) -> Vec<f64>,
        rp: &[f64],
        rd: &[CMat],
        rdl: &[f64],
        g: &[CMat],
        gl: &[f64],
    ) -> Direction {
        let nb = self.p.blocks.len();
        let t: Vec<CMat> = (0..nb).map(|b| &g[b] - hermitian_part(&(&it.x[b] * &rd[b] * &sinv[b]))).collect();
        let tl: Vec<f64> = (0..self.p.n_lin).map(|k| gl[k] - it.xl[k] * rdl[k] / it.sl[k]).collect();
        let at = self.apply_a(&t, &tl);
        let rhs: Vec<f64> = rp.iter().zip(&at).map(|(a, b)| a - b).collect();
        let dy = solve(&rhs);
        let (aty, atyl) = self.apply_at(&dy);
        let ds: Vec<CMat> = (0..nb).map(|b| &rd[b] - &aty[b]).collect();
        let dsl: Vec<f64> = (0..self.p.n_lin).map(|k| rdl[k] - atyl[k]).collect();
        let mut dx: Vec<CMat> = (0..nb).map(|b| &g[b] - hermitian_part(&(&it.x[b] * &ds[b] * &sinv[b]))).collect();
        if self.p.real {
            dx.iter_mut().for_each(|m| m.iter_mut().for_each(|v| v.im = 0.0));
        }
        let dxl: Vec<f64> = (0..self.p.n_lin).map(|k| gl[k] - it.xl[k] * dsl[k] / it.sl[k]).collect();
        Direction { dx, dxl, dy, ds, dsl }
    }

    fn step_lengths(&self, it: &Iterate, d: &Direction) -> (f64, f64) {
        let mut ap = max_step_lin(&it.xl, &d.dxl);
        let mut ad = max_step_lin(&it.sl, &d.dsl);
        for b in 0..self.p.blocks.len() {
            ap = ap.min(max_step(&it.x[b], &d.dx[b]));
            ad = ad.min(max_step(&it.s[b], &d.ds[b]));
        }
        (ap, ad)
    }

    fn run(&self) -> Result<ConicSolution, ConicError> {
        let p = self.p;
        let nb = p.blocks.len();
        let n_total = (p.blocks.iter().sum::<usize>() + p.n_lin).max(1) as f64;
        let bnorm = norm(&self.b);
        let cnorm = (self.cost.iter().map(|m| frob(m).powi(2)).sum::<f64>() + norm(&self.cost_lin).powi(2)).sqrt();
        let sign = if p.maximize { -1.0 } else { 1.0 };
        let mut it = self.initial();
        let mut iter = 0;
        let mut best: Option<(f64, ConicSolution)> = None;
        loop {
            let ax = self.apply_a(&it.x, &it.xl);
            let rp: Vec<f64> = self.b.iter().zip(&ax).map(|(a, b)| a - b).collect();
            let (aty, atyl) = self.apply_at(&it.y);
            let rd: Vec<CMat> = (0..nb).map(|b| &self.cost[b] - &aty[b] - &it.s[b]).collect();
            let rdl: Vec<f64> = (0..p.n_lin).map(|k| self.cost_lin[k] - atyl[k] - it.sl[k]).collect();
            let pobj = (0..nb).map(|b| trace_product(&self.cost[b], &it.x[b])).sum::<f64>()
                + self.cost_lin.iter().zip(&it.xl).map(|(a, b)| a * b).sum::<f64>();
            let dobj: f64 = self.b.iter().zip(&it.y).map(|(a, b)| a * b).sum();
            let comp = (0..nb).map(|b| trace_product(&it.x[b], &it.s[b])).sum::<f64>()
                + it.xl.iter().zip(&it.sl).map(|(a, b)| a * b).sum::<f64>();
            let mu = comp / n_total;
            let pinf = norm(&rp) / (1.0 + bnorm);
            let dinf = (rd.iter().map(|m| frob(m).powi(2)).sum::<f64>() + norm(&rdl).powi(2)).sqrt() / (1.0 + cnorm);
            let gap = (pobj - dobj).abs();
            let relgap = gap / (1.0 + pobj.abs() + dobj.abs());
            log::trace!("ipm {iter}: pobj {pobj:.10} dobj {dobj:.10} pinf {pinf:.2e} dinf {dinf:.2e} mu {mu:.2e}");
            let converged = pinf <= p.tol && dinf <= p.tol && (relgap <= p.tol || gap <= p.tol);
            let finish = |it: Iterate, converged: bool| ConicSolution {
                x: it.x,
                x_lin: it.xl,
                y: it.y,
                s: it.s,
                s_lin: it.sl,
                primal_objective: sign * pobj,
                dual_objective: sign * dobj,
                gap,
                infeasibility: pinf.max(dinf),
                iterations: iter,
                converged,
            };
            if converged {
                return Ok(finish(it, true));
            }
            let merit = pinf.max(dinf).max(relgap);
            if best.as_ref().map_or(true, |b| merit < b.0) {
                best = Some((merit, finish(it.clone(), false)));
            }
            let stalled = |best: Option<(f64, ConicSolution)>| Ok(best.expect("an iterate was recorded").1);
            if iter >= p.max_iter {
                return stalled(best);
            }
            let xnorm = it.x.iter().map(trace_re_abs).sum::<f64>() + it.xl.iter().sum::<f64>();
            if dobj > 1e9 * (1.0 + cnorm) && pinf > 1e-6 {
                return Err(ConicError::Infeasible);
            }
            if -pobj > 1e9 * (1.0 + bnorm) && dinf > 1e-6 && xnorm > 1e9 {
                return Err(ConicError::Unbounded);
            }
            let mut sinv = Vec::with_capacity(nb);
            for b in 0..nb {
                match cholesky_inverse(&it.s[b]) {
                    Some(si) => sinv.push(si),
                    None => return stalled(best),
                }
            }
            let mm = self.schur(&it, &sinv);
            let solve = factor(mm);
            let Some(solve) = solve else { return stalled(best) };

            let g: Vec<CMat> = it.x.iter().map(|x| -x).collect();
            let gl: Vec<f64> = it.xl.iter().map(|v| -v).collect();
            let pred = self.direction(&it, &sinv, &solve, &rp, &rd, &rdl, &g, &gl);
            let (ap, ad) = self.step_lengths(&it, &pred);
            let (ap, ad) = (ap.min(1.0), ad.min(1.0));
            let mut comp_a = 0.0;
            for b in 0..nb {
                let xa = &it.x[b] + &pred.dx[b] * c(ap, 0.0);
                let sa = &it.s[b] + &pred.ds[b] * c(ad, 0.0);
                comp_a += trace_product(&xa, &sa);
            }
            for k in 0..p.n_lin {
                comp_a += (it.xl[k] + ap * pred.dxl[k]) * (it.sl[k] + ad * pred.dsl[k]);
            }
            let sigma = (comp_a / comp).clamp(0.0, 1.0).powi(3);
            let g: Vec<CMat> = (0..nb)
                .map(|b| {
                    &sinv[b] * c(sigma * mu, 0.0) - &it.x[b] - hermitian_part(&(&pred.dx[b] * &pred.ds[b] * &sinv[b]))
                })
                .collect();
            let gl: Vec<f64> = (0..p.n_lin)
                .map(|k| sigma * mu / it.sl[k] - it.xl[k] - pred.dxl[k] * pred.dsl[k] / it.sl[k])
                .collect();
            let dir = self.direction(&it, &sinv, &solve, &rp, &rd, &rdl, &g, &gl);
            let (ap, ad) = self.step_lengths(&it, &dir);
            let gamma = 0.9 + 0.09 * pred_min(ap, ad);
            let (ap, ad) = ((gamma * ap).min(1.0), (gamma * ad).min(1.0));
            if ap < 1e-12 && ad < 1e-12 {
                return stalled(best);
            }
            for b in 0..nb {
                it.x[b] += &dir.dx[b] * c(ap, 0.0);
                it.s[b] += &dir.ds[b] * c(ad, 0.0);
                it.x[b] = hermitian_part(&it.x[b]);
                it.s[b] = hermitian_part(&it.s[b]);
            }
            for k in 0..p.n_lin {
                it.xl[k] += ap * dir.dxl[k];
                it.sl[k] += ad * dir.dsl[k];
            }
            for i in 0..self.m {
                it.y[i] += ad * dir.dy[i];
            }
            iter += 1;
        }
    }
}

fn pred_min(a: f64, b: f64) -> f64 {
    a.min(b).min(1.0)
}

fn trace_re_abs(m: &CMat) -> f64 {
    m.diagonal().iter().map(|v| v.re.abs()).sum()
}

type SchurSolve = Box<dyn Fn(&[f64]) -> Vec<f64>>;

/// Factorises the Schur complement (regularised if needed) and solves with two
/// steps of iterative refinement against the unregularised matrix.
fn factor(mm: DMatrix<f64>) -> Option<SchurSolve> {
    let n = mm.nrows();
    let scale = (0..n).map(|i| mm[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    let mut reg = mm.clone();
    let refine = move |base: &dyn Fn(&DVector<f64>) -> DVector<f64>, r: &[f64]| -> Vec<f64> {
        let rhs = DVector::from_column_slice(r);
        let mut x = base(&rhs);
        for _ in 0..2 {
            let res = &rhs - &mm * &x;
            x += base(&res);
        }
        x.iter().copied().collect()
    };
    for attempt in 0..4 {
        if let Some(ch) = reg.clone().cholesky() {
            return Some(Box::new(move |r: &[f64]| refine(&|v| ch.solve(v), r)));
        }
        let eps = scale * 1e-14 * 100f64.powi(attempt);
        for i in 0..n {
            reg[(i, i)] += eps;
        }
    }
    let lu = reg.lu();
    if lu.is_invertible() {
        Some(Box::new(move |r: &[f64]| refine(&|v| lu.solve(v).unwrap_or_else(|| DVector::zeros(v.len())), r)))
    } else {
        None
    }
}
