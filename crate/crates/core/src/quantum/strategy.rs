use super::discrimination::{antidistinguishability, distinguishability};
use super::mat::{kron, trace_product, CMat};
use super::states::{DensityMatrix, Povm, QuantumError};
use crate::rational::to_f64;
use crate::scenario::{FigureOfMerit, Kind, ScenarioSpec};
use serde::{Deserialize, Serialize};

/// States for every sender and input, and one POVM per measurement setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    /// `states[i][x]` is sender `i`'s state for input `x`.
    pub states: Vec<Vec<DensityMatrix>>,
    /// `povms[y]`, each with `n_z` elements.
    pub povms: Vec<Povm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub value: f64,
    pub behavior: Vec<f64>,
    pub audited_resources: Vec<f64>,
}

impl Strategy {
    pub fn dims(&self) -> Vec<usize> {
        self.states.iter().map(|s| s[0].dim()).collect()
    }

    pub fn check(&self, spec: &ScenarioSpec) -> Result<(), QuantumError> {
        let mismatch = |m: String| Err(QuantumError::DimensionMismatch(m));
        if self.states.len() != spec.n_senders() {
            return mismatch(format!("{} senders in strategy, {} in scenario", self.states.len(), spec.n_senders()));
        }
        for (i, (st, s)) in self.states.iter().zip(&spec.senders).enumerate() {
            if st.len() != s.n_x {
                return mismatch(format!("sender {} has {} states for {} inputs", i + 1, st.len(), s.n_x));
            }
            if st.iter().any(|r| r.dim() != st[0].dim()) {
                return mismatch(format!("sender {} states differ in dimension", i + 1));
            }
        }
        if self.povms.len() != spec.n_y {
            return mismatch(format!("{} POVMs for {} settings", self.povms.len(), spec.n_y));
        }
        let total: usize = self.dims().iter().product();
        for p in &self.povms {
            if p.len() != spec.n_z {
                return mismatch(format!("POVM with {} outcomes, expected {}", p.len(), spec.n_z));
            }
            if p.dim() != total {
                return mismatch(format!("POVM acts on dimension {}, states on {total}", p.dim()));
            }
        }
        Ok(())
    }

    /// `p(z|x,y) = Tr[(ρ_{x_1} ⊗ ... ⊗ ρ_{x_N}) M_{z|y}]` in scenario coordinate order.
    pub fn behavior(&self, spec: &ScenarioSpec) -> Result<Vec<f64>, QuantumError> {
        self.check(spec)?;
        let mut p = vec![0.0; spec.behavior_dim()];
        for k in 0..spec.n_joint_inputs() {
            let xs = spec.joint_input(k);
            let joint = self.joint_state(&xs);
            for (y, povm) in self.povms.iter().enumerate() {
                for (z, m) in povm.elements().iter().enumerate() {
                    p[spec.index(z, &xs, y)] = trace_product(&joint, m);
                }
            }
        }
        Ok(p)
    }

    pub fn joint_state(&self, xs: &[usize]) -> CMat {
        let mut out = CMat::identity(1, 1);
        for (i, &x) in xs.iter().enumerate() {
            out = kron(&out, self.states[i][x].matrix());
        }
        out
    }
}

pub fn sender_priors(spec: &ScenarioSpec) -> Vec<Vec<f64>> {
    spec.senders.iter().map(|s| s.prior.iter().map(to_f64).collect()).collect()
}

/// Distinguishability or anti-distinguishability of each sender's ensemble.
pub fn audit_resources(spec: &ScenarioSpec, states: &[Vec<DensityMatrix>]) -> Result<Vec<f64>, QuantumError> {
    sender_priors(spec)
        .iter()
        .zip(states)
        .map(|(q, st)| {
            Ok(match spec.kind {
                Kind::Distinguishability => distinguishability(st, q)?.value,
                Kind::AntiDistinguishability => antidistinguishability(st, q)?.value,
            })
        })
        .collect()
}

pub fn verify_strategy(spec: &ScenarioSpec, strategy: &Strategy, fom: &FigureOfMerit) -> Result<Verification, QuantumError> {
    let behavior = strategy.behavior(spec)?;
    let value = fom.evaluate_f64(&behavior);
    let audited_resources = audit_resources(spec, &strategy.states)?;
    Ok(Verification { value, behavior, audited_resources })
}
