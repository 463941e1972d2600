//! Exact rational linear programming by two-phase dense simplex.
//!
//! Pivot selection is Dantzig's rule, switching to Bland's rule after a run of
//! degenerate pivots, so the method always terminates.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `maximize objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<BigRational>,
    pub constraints: Vec<(Vec<BigRational>, Relation, BigRational)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&BigRational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, objective: vec![BigRational::zero(); num_vars], constraints: Vec::new() }
    }

    pub fn maximize(mut self, objective: Vec<BigRational>) -> Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn constraint(&mut self, a: Vec<BigRational>, rel: Relation, b: BigRational) {
        assert_eq!(a.len(), self.num_vars);
        self.constraints.push((a, rel, b));
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

const DEGENERATE_RUN: usize = 50;

struct Tableau {
    /// rows x (cols + 1); last column is the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    n_orig: usize,
    n_cols: usize,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let mut normalized = Vec::with_capacity(lp.constraints.len());
        for (a, rel, b) in &lp.constraints {
            if b.is_negative() {
                let rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                normalized.push((a.iter().map(|v| -v).collect::<Vec<_>>(), rel, -b));
            } else {
                normalized.push((a.clone(), *rel, b.clone()));
            }
        }
        let n_slack = normalized.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let n_art = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let artificial_start = n + n_slack;
        let n_cols = artificial_start + n_art;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut s, mut t) = (n, artificial_start);
        for (a, rel, b) in normalized {
            let mut row = a;
            row.resize(n_cols + 1, BigRational::zero());
            row[n_cols] = b;
            match rel {
                Relation::Le => {
                    row[s] = BigRational::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -BigRational::one();
                    s += 1;
                    row[t] = BigRational::one();
                    basis.push(t);
                    t += 1;
                }
                Relation::Eq => {
                    row[t] = BigRational::one();
                    basis.push(t);
                    t += 1;
                }
            }
            rows.push(row);
        }
        Self { rows, basis, n_orig: n, n_cols, artificial_start }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = BigRational::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `cost` (maximization) for the current basis.
    fn reduced(&self, cost: &[BigRational], allowed: usize) -> Vec<BigRational> {
        let mut d: Vec<BigRational> = cost[..allowed].to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                if !row[j].is_zero() {
                    *dj -= cb * &row[j];
                }
            }
        }
        d
    }

    /// Maximizes `cost` using columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        let mut degenerate = 0;
        loop {
            let d = self.reduced(cost, allowed);
            let bland = degenerate >= DEGENERATE_RUN;
            let entering = if bland {
                (0..allowed).find(|&j| d[j].is_positive())
            } else {
                (0..allowed).filter(|&j| d[j].is_positive()).max_by(|&a, &b| d[a].cmp(&d[b]).then(b.cmp(&a)))
            };
            let Some(c) = entering else { return true };
            let rhs = self.n_cols;
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[rhs] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = best else { return false };
            if ratio.is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, c);
        }
    }

    fn run(mut self, objective: &[BigRational]) -> LpOutcome {
        if self.artificial_start < self.n_cols {
            let mut phase1 = vec![BigRational::zero(); self.n_cols];
            for c in phase1.iter_mut().skip(self.artificial_start) {
                *c = -BigRational::one();
            }
            self.optimize(&phase1, self.n_cols);
            let infeas: BigRational = self
                .rows
                .iter()
                .zip(&self.basis)
                .filter(|(_, &b)| b >= self.artificial_start)
                .map(|(r, _)| r[self.n_cols].clone())
                .sum();
            if infeas.is_positive() {
                return LpOutcome::Infeasible;
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.artificial_start {
                    match (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(c) => {
                            self.pivot(i, c);
                            i += 1;
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut cost = vec![BigRational::zero(); self.n_cols];
        cost[..self.n_orig].clone_from_slice(objective);
        if !self.optimize(&cost, self.artificial_start) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![BigRational::zero(); self.n_orig];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n_orig {
                x[b] = row[self.n_cols].clone();
            }
        }
        let value = x.iter().zip(objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { value, x }
    }
}
