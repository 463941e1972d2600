//! Alternating optimisation over states and measurements.
//!
//! With states fixed the best measurement is a discrimination-type SDP; with
//! the measurement and all other senders fixed, one sender's states are
//! optimised under its resource bound through the auxiliary operators
//! `σ ⪰ q_x ρ_x` (distinguishability) or `ω ⪯ q_x ρ_x` (anti-distinguishability).

use super::conic::ConicProblem;
use super::mat::{c, eigh, haar_ket, ket_to_density, kron, positive_projector, reduced_operator, trace_product, CMat};
use super::states::{DensityMatrix, Povm, QuantumError};
use super::strategy::{audit_resources, sender_priors, Strategy};
use crate::rational::to_f64;
use crate::scenario::{extended_vertices, Caps, FigureOfMerit, Kind, ScenarioSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cell::Cell;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeeSawConfig {
    pub dim: usize,
    pub restarts: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    /// Stop when a sweep improves by less than this.
    pub tol: f64,
    /// Restrict states and measurements to real matrices.
    pub real: bool,
    /// Add a deterministic start embedding the best classical vertex.
    pub classical_start: bool,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self { dim: 4, restarts: 20, seed: 42, max_sweeps: 500, tol: 1e-7, real: false, classical_start: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Initializer {
    Haar,
    Classical,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeeSawResult {
    pub value: f64,
    pub strategy: Strategy,
    pub audited_resources: Vec<f64>,
    /// Figure of merit after every sweep.
    pub trace: Vec<f64>,
    /// Seed of the winning restart.
    pub seed: u64,
    pub initializer: Initializer,
    pub restarts_completed: usize,
    pub restarts_failed: usize,
    /// Largest duality gap over every accepted conic solve.
    pub max_gap: f64,
}

/// Seed of restart `k`.
pub fn restart_seed(master: u64, k: usize) -> u64 {
    master.wrapping_add(k as u64)
}

const PIN_SLACK: f64 = 1e-6;
const ACCEPT_INFEASIBILITY: f64 = 1e-7;

type States = Vec<Vec<CMat>>;
type Povms = Vec<Vec<CMat>>;

#[derive(Debug, Clone, Copy)]
pub(crate) enum StateMode {
    /// Maximise the figure of merit with the resource at most the value.
    Cap(f64),
    /// Minimise the resource with the figure of merit pinned near the value.
    Pin(f64),
}

pub(crate) struct Engine {
    spec: ScenarioSpec,
    coeffs: Vec<f64>,
    priors: Vec<Vec<f64>>,
    dims: Vec<usize>,
    total: usize,
    real: bool,
    max_gap: Cell<f64>,
}

impl Engine {
    pub(crate) fn new(spec: &ScenarioSpec, fom: &FigureOfMerit, dim: usize, real: bool) -> Result<Self, QuantumError> {
        if dim < 2 {
            return Err(QuantumError::Invalid("dimension must be at least 2".into()));
        }
        if fom.coeffs.len() != spec.behavior_dim() {
            return Err(QuantumError::DimensionMismatch("figure of merit does not match the scenario".into()));
        }
        let dims = vec![dim; spec.n_senders()];
        Ok(Self {
            spec: spec.clone(),
            coeffs: fom.as_f64(),
            priors: sender_priors(spec),
            total: dims.iter().product(),
            dims,
            real,
            max_gap: Cell::new(0.0),
        })
    }

    fn accept(&self, sol: super::ConicSolution) -> Result<super::ConicSolution, QuantumError> {
        let sol = accept(sol)?;
        self.max_gap.set(self.max_gap.get().max(sol.gap));
        Ok(sol)
    }

    fn joint_states(&self, st: &States) -> Vec<CMat> {
        (0..self.spec.n_joint_inputs())
            .map(|k| {
                let xs = self.spec.joint_input(k);
                xs.iter().enumerate().fold(CMat::identity(1, 1), |acc, (i, &x)| kron(&acc, &st[i][x]))
            })
            .collect()
    }

    fn value_joint(&self, joint: &[CMat], povms: &Povms) -> f64 {
        let mut v = 0.0;
        for (k, rho) in joint.iter().enumerate() {
            let xs = self.spec.joint_input(k);
            for (y, m) in povms.iter().enumerate() {
                for (z, e) in m.iter().enumerate() {
                    let cf = self.coeffs[self.spec.index(z, &xs, y)];
                    if cf != 0.0 {
                        v += cf * trace_product(rho, e);
                    }
                }
            }
        }
        v
    }

    pub(crate) fn value(&self, st: &States, povms: &Povms) -> f64 {
        self.value_joint(&self.joint_states(st), povms)
    }

    /// Best measurement for fixed states.
    fn povm_step(&self, joint: &[CMat]) -> Result<Povms, QuantumError> {
        let (n_z, d) = (self.spec.n_z, self.total);
        let mut out = Vec::with_capacity(self.spec.n_y);
        for y in 0..self.spec.n_y {
            let mut w = vec![CMat::zeros(d, d); n_z];
            for (k, rho) in joint.iter().enumerate() {
                let xs = self.spec.joint_input(k);
                for (z, wz) in w.iter_mut().enumerate() {
                    let cf = self.coeffs[self.spec.index(z, &xs, y)];
                    if cf != 0.0 {
                        *wz += rho * c(cf, 0.0);
                    }
                }
            }
            if n_z == 2 {
                let p = positive_projector(&(&w[0] - &w[1]));
                let q = CMat::identity(d, d) - &p;
                out.push(vec![p, q]);
                continue;
            }
            let mut p = ConicProblem::new().maximizing().real_valued(self.real);
            let blocks: Vec<usize> = (0..n_z).map(|_| p.add_block(d)).collect();
            for (b, wz) in blocks.iter().zip(&w) {
                p.add_cost(*b, wz, 1.0);
            }
            let terms: Vec<(usize, f64)> = blocks.iter().map(|&b| (b, 1.0)).collect();
            p.matrix_equal(&terms, &CMat::identity(d, d));
            let sol = self.accept(p.solve_best_effort()?)?;
            out.push(Povm::repair(&sol.x).elements().to_vec());
        }
        Ok(out)
    }

    /// `G_x` with `F = sum_x Tr(ρ_x G_x)` for sender `i`.
    fn state_operators(&self, i: usize, st: &States, povms: &Povms) -> Vec<CMat> {
        let di = self.dims[i];
        let mut g = vec![CMat::zeros(di, di); self.spec.senders[i].n_x];
        for k in 0..self.spec.n_joint_inputs() {
            let xs = self.spec.joint_input(k);
            for (y, m) in povms.iter().enumerate() {
                let mut op = CMat::zeros(self.total, self.total);
                let mut any = false;
                for (z, e) in m.iter().enumerate() {
                    let cf = self.coeffs[self.spec.index(z, &xs, y)];
                    if cf != 0.0 {
                        op += e * c(cf, 0.0);
                        any = true;
                    }
                }
                if !any {
                    continue;
                }
                let others: Vec<Option<&CMat>> =
                    (0..xs.len()).map(|j| if j == i { None } else { Some(&st[j][xs[j]]) }).collect();
                g[xs[i]] += reduced_operator(&op, &self.dims, i, &others);
            }
        }
        g
    }

    /// New states for sender `i` and the resource bound certified by the step.
    fn state_step(&self, i: usize, g: &[CMat], mode: StateMode) -> Result<(Vec<CMat>, f64), QuantumError> {
        let d = self.dims[i];
        let q = &self.priors[i];
        let n_x = q.len();
        if let StateMode::Cap(r) = mode {
            if r >= 1.0 {
                let states = g
                    .iter()
                    .map(|gx| {
                        let (_, vecs) = eigh(gx);
                        ket_to_density(&vecs.column(d - 1).into_owned())
                    })
                    .collect();
                return Ok((states, 1.0));
            }
        }
        let mut p = ConicProblem::new().real_valued(self.real);
        if matches!(mode, StateMode::Cap(_)) {
            p = p.maximizing();
        }
        let rho: Vec<usize> = (0..n_x).map(|_| p.add_block(d)).collect();
        for &b in &rho {
            p.trace_equal(&[(b, 1.0)], &[], 1.0);
        }
        let zero = CMat::zeros(d, d);
        // Resource = scale * Tr(aux) + offset.
        let (aux, offset) = match self.spec.kind {
            Kind::Distinguishability => {
                let sigma = p.add_block(d);
                for x in 0..n_x {
                    let s = p.add_block(d);
                    p.matrix_equal(&[(s, 1.0), (sigma, -1.0), (rho[x], q[x])], &zero);
                }
                (sigma, 0.0)
            }
            Kind::AntiDistinguishability => {
                // ω = q_1 ρ_1 - S_1 and S_x = q_x ρ_x - ω ⪰ 0.
                let s1 = p.add_block(d);
                for x in 1..n_x {
                    let s = p.add_block(d);
                    p.matrix_equal(&[(s, 1.0), (rho[x], -q[x]), (rho[0], q[0]), (s1, -1.0)], &zero);
                }
                (s1, 1.0 - q[0])
            }
        };
        let ident = CMat::identity(d, d);
        match mode {
            StateMode::Cap(r) => {
                for (x, &b) in rho.iter().enumerate() {
                    p.add_cost(b, &g[x], 1.0);
                }
                let t = p.add_nonneg();
                p.trace_equal(&[(aux, 1.0)], &[(t, 1.0)], r - offset);
            }
            StateMode::Pin(s) => {
                p.add_cost(aux, &ident, 1.0);
                let terms: Vec<(usize, &CMat)> = rho.iter().zip(g).map(|(&b, gx)| (b, gx)).collect();
                let lo = p.add_nonneg();
                let hi = p.add_nonneg();
                p.linear_equal(&terms, &[(lo, -1.0)], s - 0.5 * PIN_SLACK);
                p.linear_equal(&terms, &[(hi, 1.0)], s + 0.5 * PIN_SLACK);
            }
        }
        let sol = self.accept(p.solve_best_effort()?)?;
        let states = rho.iter().map(|&b| DensityMatrix::repair(&sol.x[b]).matrix().clone()).collect();
        let resource = match mode {
            StateMode::Cap(r) => r,
            StateMode::Pin(_) => sol.primal_objective + offset,
        };
        Ok((states, resource))
    }

    fn random_states(&self, rng: &mut ChaCha8Rng) -> States {
        self.spec
            .senders
            .iter()
            .enumerate()
            .map(|(i, s)| {
                (0..s.n_x)
                    .map(|_| {
                        let mut k = haar_ket(rng, self.dims[i]);
                        if self.real {
                            k.iter_mut().for_each(|v| *v = c(v.norm() * v.re.signum(), 0.0));
                            k = super::mat::normalized(&k);
                        }
                        ket_to_density(&k)
                    })
                    .collect()
            })
            .collect()
    }

    /// Diagonal states reproducing the best classical vertex within the resources.
    fn classical_states(&self, resources: &[f64]) -> Option<States> {
        if self.spec.senders.iter().zip(&self.dims).any(|(s, &d)| s.n_m > d) {
            return None;
        }
        let ext = extended_vertices(&self.spec, Caps::default()).ok()?;
        let best = ext
            .vertices
            .iter()
            .filter(|v| v.resources.iter().zip(resources).all(|(a, &b)| to_f64(a) <= b + 1e-12))
            .map(|v| (v, self.coeffs.iter().zip(&v.behavior).map(|(c, p)| c * to_f64(p)).sum::<f64>()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?
            .0;
        Some(
            self.spec
                .senders
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let e = &ext.encodings[i][best.encodings[i]];
                    (0..s.n_x)
                        .map(|x| {
                            let mut m = CMat::zeros(self.dims[i], self.dims[i]);
                            for k in 0..s.n_m {
                                m[(k, k)] = c(to_f64(&e.probs[x * s.n_m + k]), 0.0);
                            }
                            m
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Sweeps from `states` maximising the figure of merit under resource caps.
    fn maximise(
        &self,
        mut st: States,
        caps: &[f64],
        feasible_start: bool,
        cfg: &SeeSawConfig,
    ) -> Result<(States, Povms, Vec<f64>), QuantumError> {
        let mut trace: Vec<f64> = Vec::new();
        let mut povms = self.povm_step(&self.joint_states(&st))?;
        for sweep in 0..cfg.max_sweeps {
            if sweep > 0 {
                let joint = self.joint_states(&st);
                let cand = self.povm_step(&joint)?;
                if self.value_joint(&joint, &cand) >= self.value_joint(&joint, &povms) {
                    povms = cand;
                }
            }
            for i in 0..st.len() {
                let before = self.value(&st, &povms);
                let g = self.state_operators(i, &st, &povms);
                let (new, _) = self.state_step(i, &g, StateMode::Cap(caps[i]))?;
                let old = std::mem::replace(&mut st[i], new);
                let must_take = sweep == 0 && !feasible_start;
                if !must_take && self.value(&st, &povms) < before {
                    st[i] = old;
                }
            }
            let v = self.value(&st, &povms);
            let done = trace.last().is_some_and(|&prev| v - prev < cfg.tol);
            trace.push(v);
            if done {
                break;
            }
        }
        Ok((st, povms, trace))
    }
}

fn accept(sol: super::ConicSolution) -> Result<super::ConicSolution, QuantumError> {
    if sol.converged || sol.infeasibility <= ACCEPT_INFEASIBILITY {
        Ok(sol)
    } else {
        Err(QuantumError::Conic(super::ConicError::NumericalFailure {
            gap: sol.gap,
            infeasibility: sol.infeasibility,
            iterations: sol.iterations,
        }))
    }
}

fn to_strategy(st: &States, povms: &Povms) -> Strategy {
    Strategy {
        states: st.iter().map(|s| s.iter().map(DensityMatrix::repair).collect()).collect(),
        povms: povms.iter().map(|m| Povm::repair(m)).collect(),
    }
}

fn check_resources(spec: &ScenarioSpec, resources: &[f64]) -> Result<(), QuantumError> {
    if resources.len() != spec.n_senders() {
        return Err(QuantumError::DimensionMismatch(format!("{} resources for {} senders", resources.len(), spec.n_senders())));
    }
    for (i, &r) in resources.iter().enumerate() {
        let lb = to_f64(&spec.resource_lower_bound(i));
        if !(lb - 1e-12..=1.0 + 1e-12).contains(&r) {
            return Err(QuantumError::Invalid(format!("{} = {r} outside [{lb}, 1]", spec.resource_name(i))));
        }
    }
    Ok(())
}

struct Candidate {
    value: f64,
    seed: u64,
    initializer: Initializer,
    states: States,
    povms: Povms,
    trace: Vec<f64>,
}

/// Best figure of merit found over restarts at fixed resource bounds.
pub fn seesaw(spec: &ScenarioSpec, fom: &FigureOfMerit, resources: &[f64], cfg: &SeeSawConfig) -> Result<SeeSawResult, QuantumError> {
    check_resources(spec, resources)?;
    let eng = Engine::new(spec, fom, cfg.dim, cfg.real)?;
    let mut cands: Vec<Candidate> = Vec::new();
    let mut failed = 0;
    if cfg.classical_start {
        if let Some(st) = eng.classical_states(resources) {
            match eng.maximise(st, resources, true, cfg) {
                Ok((st, povms, trace)) => cands.push(Candidate {
                    value: *trace.last().unwrap(),
                    seed: cfg.seed,
                    initializer: Initializer::Classical,
                    states: st,
                    povms,
                    trace,
                }),
                Err(e) => {
                    log::warn!("classical start failed: {e}");
                    failed += 1;
                }
            }
        }
    }
    for k in 0..cfg.restarts {
        let seed = restart_seed(cfg.seed, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = eng.random_states(&mut rng);
        match eng.maximise(st, resources, false, cfg) {
            Ok((st, povms, trace)) => cands.push(Candidate {
                value: *trace.last().unwrap(),
                seed,
                initializer: Initializer::Haar,
                states: st,
                povms,
                trace,
            }),
            Err(e) => {
                log::warn!("restart with seed {seed} skipped: {e}");
                failed += 1;
            }
        }
    }
    let completed = cands.len();
    // Highest value first; ties go to the lowest seed, Haar before classical.
    cands.sort_by(|a, b| {
        b.value
            .total_cmp(&a.value)
            .then(a.seed.cmp(&b.seed))
            .then((a.initializer == Initializer::Classical).cmp(&(b.initializer == Initializer::Classical)))
    });
    for cand in cands {
        let strategy = to_strategy(&cand.states, &cand.povms);
        let audited = audit_resources(spec, &strategy.states)?;
        if audited.iter().zip(resources).any(|(a, r)| *a > r + 1e-6) {
            log::warn!("restart with seed {} violates resource audit: {audited:?}", cand.seed);
            continue;
        }
        let value = fom.evaluate_f64(&strategy.behavior(spec)?);
        return Ok(SeeSawResult {
            value,
            strategy,
            audited_resources: audited,
            trace: cand.trace,
            seed: cand.seed,
            initializer: cand.initializer,
            restarts_completed: completed,
            restarts_failed: failed,
            max_gap: eng.max_gap.get(),
        });
    }
    Err(QuantumError::Invalid("no restart produced an admissible strategy".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TotalVariant {
    /// Alternately minimise each sender's resource with the value pinned.
    Sum,
    /// Additionally search over the leading senders' caps for the smallest product.
    Product,
    /// Minimise one sender's resource, the others unrestricted.
    Single { sender: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct TotalResourceResult {
    pub variant: TotalVariant,
    pub target: f64,
    /// Audited resources of the final strategy.
    pub resources: Vec<f64>,
    pub product: f64,
    pub sum: f64,
    pub value: f64,
    pub strategy: Strategy,
    pub seed: u64,
    pub restarts_completed: usize,
    pub restarts_failed: usize,
    pub max_gap: f64,
}

enum Outcome {
    Short(f64),
    Reached(f64, States, Povms),
}

impl Engine {
    /// Alternation minimising the resources of uncapped senders with the value
    /// pinned, the others held to their caps.
    fn minimise(
        &self,
        mut st: States,
        target: f64,
        caps: &[Option<f64>],
        cfg: &SeeSawConfig,
    ) -> Result<(States, Povms, Vec<f64>), QuantumError> {
        let n = st.len();
        let mut res = vec![f64::INFINITY; n];
        let mut povms = self.povm_step(&self.joint_states(&st))?;
        let mut prev = f64::INFINITY;
        for sweep in 0..cfg.max_sweeps {
            if sweep > 0 {
                let joint = self.joint_states(&st);
                let cand = self.povm_step(&joint)?;
                if self.value_joint(&joint, &cand) >= self.value_joint(&joint, &povms) {
                    povms = cand;
                }
            }
            for i in 0..n {
                let g = self.state_operators(i, &st, &povms);
                let mode = match caps[i] {
                    Some(r) => StateMode::Cap(r),
                    None => StateMode::Pin(target),
                };
                let step = self.state_step(i, &g, mode);
                let (new, r) = match step {
                    Ok(v) => v,
                    Err(e) if sweep == 0 => return Err(e),
                    Err(_) => continue,
                };
                let before = self.value(&st, &povms);
                let old = std::mem::replace(&mut st[i], new);
                let after = self.value(&st, &povms);
                let ok = match mode {
                    StateMode::Cap(_) => sweep == 0 || after >= before,
                    StateMode::Pin(_) => after >= target - PIN_SLACK && r <= res[i] + 1e-12,
                };
                if ok {
                    res[i] = r;
                } else {
                    st[i] = old;
                }
            }
            if res.iter().any(|r| !r.is_finite()) {
                return Err(QuantumError::Unachievable { target, best: self.value(&st, &povms) });
            }
            let prod: f64 = res.iter().product();
            if prev - prod < cfg.tol {
                break;
            }
            prev = prod;
        }
        Ok((st, povms, res))
    }
}

/// Smallest total resource at which `fom` reaches `target`, by alternating
/// minimisation of each sender's resource with the value pinned.
pub fn min_total_resource(
    spec: &ScenarioSpec,
    fom: &FigureOfMerit,
    target: f64,
    cfg: &SeeSawConfig,
    variant: TotalVariant,
) -> Result<TotalResourceResult, QuantumError> {
    let eng = Engine::new(spec, fom, cfg.dim, cfg.real)?;
    let n = spec.n_senders();
    let full = vec![1.0; n];
    let (free, objective): (Vec<Option<f64>>, Box<dyn Fn(&[f64]) -> f64>) = match variant {
        TotalVariant::Single { sender } if sender >= n => {
            return Err(QuantumError::Invalid(format!("no sender {}", sender + 1)));
        }
        TotalVariant::Single { sender } => (
            (0..n).map(|i| if i == sender { None } else { Some(1.0) }).collect(),
            Box::new(move |r: &[f64]| r[sender]),
        ),
        _ => (vec![None; n], Box::new(|r: &[f64]| r.iter().product())),
    };
    let mut best: Option<(f64, u64, States, Povms)> = None;
    let mut best_reach = f64::NEG_INFINITY;
    let mut failed = 0;
    let mut completed = 0;
    for k in 0..cfg.restarts.max(1) {
        let seed = restart_seed(cfg.seed, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut run = || -> Result<Outcome, QuantumError> {
            let (st, _, trace) = eng.maximise(eng.random_states(&mut rng), &full, false, cfg)?;
            let reach = *trace.last().unwrap();
            if reach < target - PIN_SLACK {
                return Ok(Outcome::Short(reach));
            }
            let (st, povms, res) = eng.minimise(st, target, &free, cfg)?;
            Ok(Outcome::Reached(objective(&res), st, povms))
        };
        match run() {
            Ok(Outcome::Short(reach)) => {
                completed += 1;
                best_reach = best_reach.max(reach);
            }
            Ok(Outcome::Reached(prod, st, povms)) => {
                completed += 1;
                best_reach = best_reach.max(target);
                if best.as_ref().map_or(true, |b| prod < b.0) {
                    best = Some((prod, seed, st, povms));
                }
            }
            Err(e) => {
                log::warn!("restart with seed {seed} skipped: {e}");
                failed += 1;
            }
        }
    }
    let Some((_, seed, mut st, mut povms)) = best else {
        return Err(QuantumError::Unachievable { target, best: best_reach });
    };
    if variant == TotalVariant::Product {
        (st, povms) = refine_product(&eng, st, povms, target, cfg)?;
    }
    let strategy = to_strategy(&st, &povms);
    let resources = audit_resources(spec, &strategy.states)?;
    let value = fom.evaluate_f64(&strategy.behavior(spec)?);
    Ok(TotalResourceResult {
        variant,
        target,
        product: resources.iter().product(),
        sum: resources.iter().sum(),
        resources,
        value,
        strategy,
        seed,
        restarts_completed: completed,
        restarts_failed: failed,
        max_gap: eng.max_gap.get(),
    })
}

/// Golden-section search over each leading sender's cap, the last sender's
/// resource minimised at every trial, keeping the smallest product.
fn refine_product(eng: &Engine, st: States, povms: Povms, target: f64, cfg: &SeeSawConfig) -> Result<(States, Povms), QuantumError> {
    let n = st.len();
    if n < 2 {
        return Ok((st, povms));
    }
    let audit = |s: &States| -> Result<Vec<f64>, QuantumError> {
        let dm: Vec<Vec<DensityMatrix>> = s.iter().map(|v| v.iter().map(DensityMatrix::repair).collect()).collect();
        audit_resources(&eng.spec, &dm)
    };
    let mut caps: Vec<f64> = audit(&st)?;
    let mut best = (caps.iter().product::<f64>(), st, povms);
    let inner = SeeSawConfig { max_sweeps: cfg.max_sweeps.min(100), ..cfg.clone() };
    for j in 0..n - 1 {
        let lb = to_f64(&eng.spec.resource_lower_bound(j));
        let eval = |t: f64, from: &States| -> Option<(f64, States, Povms)> {
            let mut cv: Vec<Option<f64>> = vec![None; n];
            for (i, c) in cv.iter_mut().enumerate().take(n - 1) {
                *c = Some(if i == j { t } else { caps[i] });
            }
            let (s, p, _) = eng.minimise(from.clone(), target, &cv, &inner).ok()?;
            if eng.value(&s, &p) < target - PIN_SLACK {
                return None;
            }
            let r = audit(&s).ok()?;
            Some((r.iter().product(), s, p))
        };
        let start = best.1.clone();
        let (mut a, mut b) = (lb, 1.0);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..12 {
            let t1 = b - phi * (b - a);
            let t2 = a + phi * (b - a);
            let f1 = eval(t1, &start);
            let f2 = eval(t2, &start);
            let v1 = f1.as_ref().map_or(f64::INFINITY, |r| r.0);
            let v2 = f2.as_ref().map_or(f64::INFINITY, |r| r.0);
            for r in [f1, f2].into_iter().flatten() {
                if r.0 < best.0 {
                    best = r;
                }
            }
            if v1 <= v2 {
                b = t2;
            } else {
                a = t1;
            }
        }
        caps = audit(&best.1)?;
    }
    Ok((best.1, best.2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::scenario::{classical_value, operational_relaxation, parse_inequality};

    fn cfg(dim: usize, restarts: usize) -> SeeSawConfig {
        SeeSawConfig { dim, restarts, ..SeeSawConfig::default() }
    }

    #[test]
    fn i6_qubit_advantage() {
        let spec = ScenarioSpec::two_sender(2, 2, 4, Kind::AntiDistinguishability);
        let ineq = parse_inequality(
            &spec,
            "p(1|1,2)-p(1|2,2)-p(2|1,1)+p(2|2,1)+p(2|1,2)-p(2|2,2)+p(3|2,1)-p(3|2,2) <= 2A1+2A2-2",
        )
        .unwrap();
        let r = seesaw(&spec, &ineq.fom, &[0.85, 0.85], &cfg(2, 10)).unwrap();
        assert!(r.value / ineq.bound_f64(&[0.85, 0.85]) > 1.035, "{}", r.value);
        for a in &r.audited_resources {
            assert!(*a <= 0.85 + 1e-6);
        }
        assert!(r.trace.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{:?}", r.trace);
        let relax = operational_relaxation(&spec, &ineq.fom, &[ratio(17, 20), ratio(17, 20)]).unwrap();
        assert!(r.value <= relax + 1e-6);
    }

    #[test]
    fn no_information_at_lower_bounds() {
        let spec = ScenarioSpec::two_sender(2, 2, 2, Kind::Distinguishability);
        let ineq = parse_inequality(&spec, "p(1|2,1) - p(1|2,2) <= 2D2 - 1").unwrap();
        let r = seesaw(&spec, &ineq.fom, &[0.5, 0.5], &cfg(2, 3)).unwrap();
        assert!(r.value.abs() < 1e-5, "{}", r.value);
    }

    #[test]
    fn classical_start_contains_classical_vertex() {
        let spec = ScenarioSpec::two_sender(2, 2, 3, Kind::Distinguishability);
        let fom = FigureOfMerit::parse(&spec, "p(1|1,1) + p(2|2,1) + p(3|2,2) - p(1|1,2)").unwrap();
        let r = seesaw(&spec, &fom, &[0.75, 0.75], &cfg(2, 0)).unwrap();
        assert_eq!(r.initializer, Initializer::Classical);
        let ext = extended_vertices(&spec, Caps::default()).unwrap();
        let vertex_best = ext
            .vertices
            .iter()
            .filter(|v| v.resources.iter().all(|a| *a <= ratio(3, 4)))
            .map(|v| to_f64(&fom.evaluate(&v.behavior)))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(r.value >= vertex_best - 1e-6, "{} < {vertex_best}", r.value);
        let cv = to_f64(&classical_value(&spec, &fom, &[ratio(3, 4), ratio(3, 4)]).unwrap());
        assert!(vertex_best <= cv);
    }

    #[test]
    fn reproducible_given_seed() {
        let spec = ScenarioSpec::two_sender(2, 2, 2, Kind::AntiDistinguishability);
        let fom = FigureOfMerit::parse(&spec, "p(1|1,1) - p(1|2,2) + p(2|1,2)").unwrap();
        let a = seesaw(&spec, &fom, &[0.8, 0.9], &cfg(2, 3)).unwrap();
        let b = seesaw(&spec, &fom, &[0.8, 0.9], &cfg(2, 3)).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.seed, b.seed);
    }

    #[test]
    fn total_resource_at_no_information_value() {
        let spec = ScenarioSpec::two_sender(2, 2, 2, Kind::Distinguishability);
        let ineq = parse_inequality(&spec, "p(1|2,1) - p(1|2,2) <= 2D2 - 1").unwrap();
        let r = min_total_resource(&spec, &ineq.fom, 0.0, &cfg(2, 3), TotalVariant::Sum).unwrap();
        assert!((r.product - 0.25).abs() < 1e-5, "{:?}", r.resources);
    }

    #[test]
    fn single_sender_resource_matches_classical() {
        let spec = ScenarioSpec::two_sender(2, 2, 2, Kind::Distinguishability);
        let ineq = parse_inequality(&spec, "p(1|2,1) - p(1|2,2) <= 2D2 - 1").unwrap();
        let r = min_total_resource(&spec, &ineq.fom, 0.5, &cfg(2, 3), TotalVariant::Single { sender: 1 }).unwrap();
        assert!((r.resources[1] - 0.75).abs() < 1e-5, "{:?}", r.resources);
        assert!(r.value >= 0.5 - 1e-5);
        let bad = min_total_resource(&spec, &ineq.fom, 0.5, &cfg(2, 1), TotalVariant::Single { sender: 2 });
        assert!(bad.is_err());
    }
}
