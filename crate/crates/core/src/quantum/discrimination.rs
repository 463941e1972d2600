use super::conic::ConicProblem;
use super::mat::{identity, CVec};
use super::states::{DensityMatrix, Povm, QuantumError};

#[derive(Debug, Clone)]
pub struct DiscriminationResult {
    pub value: f64,
    /// Value of the dual program.
    pub dual: f64,
    pub povm: Povm,
}

fn check(states: &[DensityMatrix], priors: &[f64]) -> Result<usize, QuantumError> {
    if states.len() < 2 {
        return Err(QuantumError::Invalid("need at least two states".into()));
    }
    if priors.len() != states.len() {
        return Err(QuantumError::DimensionMismatch(format!("{} priors for {} states", priors.len(), states.len())));
    }
    if priors.iter().any(|&q| q < 0.0) || (priors.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(QuantumError::Invalid("priors must be a probability vector".into()));
    }
    let d = states[0].dim();
    if states.iter().any(|s| s.dim() != d) {
        return Err(QuantumError::DimensionMismatch("states of different dimensions".into()));
    }
    Ok(d)
}

/// Optimum of `sum_x q_x Tr(ρ_x M_x)` over `n`-outcome POVMs.
fn guessing(states: &[DensityMatrix], priors: &[f64], maximize: bool) -> Result<(f64, f64, Povm), QuantumError> {
    let d = check(states, priors)?;
    let mut p = if maximize { ConicProblem::new().maximizing() } else { ConicProblem::new() };
    let blocks: Vec<usize> = states.iter().map(|_| p.add_block(d)).collect();
    for ((&b, s), &q) in blocks.iter().zip(states).zip(priors) {
        p.add_cost(b, s.matrix(), q);
    }
    let terms: Vec<(usize, f64)> = blocks.iter().map(|&b| (b, 1.0)).collect();
    p.matrix_equal(&terms, &identity(d));
    let sol = p.solve()?;
    Ok((sol.primal_objective, sol.dual_objective, Povm::repair(&sol.x)))
}

pub fn distinguishability(states: &[DensityMatrix], priors: &[f64]) -> Result<DiscriminationResult, QuantumError> {
    let (value, dual, povm) = guessing(states, priors, true)?;
    Ok(DiscriminationResult { value, dual, povm })
}

/// `1 - min_M sum_x q_x Tr(ρ_x M_x)`; outcome `x` excludes input `x`.
pub fn antidistinguishability(states: &[DensityMatrix], priors: &[f64]) -> Result<DiscriminationResult, QuantumError> {
    let (value, dual, povm) = guessing(states, priors, false)?;
    Ok(DiscriminationResult { value: 1.0 - value, dual: 1.0 - dual, povm })
}

/// Anti-distinguishability of two pure states with equal priors.
pub fn helstrom_antidist_two(psi0: &CVec, psi1: &CVec) -> Result<f64, QuantumError> {
    for v in [psi0, psi1] {
        let n = v.norm();
        if (n - 1.0).abs() > 1e-9 {
            return Err(QuantumError::NonUnit(n));
        }
    }
    if psi0.len() != psi1.len() {
        return Err(QuantumError::DimensionMismatch("kets of different dimensions".into()));
    }
    let overlap = psi0.dotc(psi1).norm_sqr();
    Ok(0.5 * (1.0 + (1.0 - overlap).max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::mat::{c, kron_ket};
    use std::f64::consts::PI;

    fn ket(v: &[(f64, f64)]) -> CVec {
        CVec::from_iterator(v.len(), v.iter().map(|&(a, b)| c(a, b)))
    }

    fn pure(v: &CVec) -> DensityMatrix {
        DensityMatrix::pure(v).unwrap()
    }

    pub(crate) fn trine_like() -> Vec<CVec> {
        let (a, b) = (5.0 * PI / 18.0, 19.0 * PI / 60.0);
        let w = c((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
        vec![
            ket(&[(1.0, 0.0), (0.0, 0.0)]),
            ket(&[(a.cos(), 0.0), (a.sin(), 0.0)]),
            CVec::from_vec(vec![c(b.cos(), 0.0), w * b.sin()]),
        ]
    }

    #[test]
    fn three_qubit_states_exclusion() {
        let states: Vec<DensityMatrix> = trine_like().iter().map(pure).collect();
        let r = antidistinguishability(&states, &[1.0 / 3.0; 3]).unwrap();
        assert!((r.value - 0.9798).abs() < 5e-5, "{}", r.value);
        assert!((r.value - r.dual).abs() < 1e-8);
    }

    #[test]
    fn product_states_are_perfectly_excluded() {
        let k = trine_like();
        let states: Vec<DensityMatrix> =
            k.iter().flat_map(|a| k.iter().map(move |b| pure(&kron_ket(a, b)))).collect();
        let r = antidistinguishability(&states, &[1.0 / 9.0; 9]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn pairwise_exclusion_matches_closed_form() {
        for theta in [0.1, PI / 4.0, 1.0, PI / 2.0] {
            let a = ket(&[(1.0, 0.0), (0.0, 0.0)]);
            let b = ket(&[(theta.cos(), 0.0), (0.0, theta.sin())]);
            let exact = helstrom_antidist_two(&a, &b).unwrap();
            let r = antidistinguishability(&[pure(&a), pure(&b)], &[0.5, 0.5]).unwrap();
            assert!((r.value - exact).abs() < 1e-8, "{theta}: {} vs {exact}", r.value);
        }
        let a = ket(&[(1.0, 0.0), (0.0, 0.0)]);
        let b = ket(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(helstrom_antidist_two(&a, &b).unwrap(), 1.0);
        assert_eq!(helstrom_antidist_two(&a, &a).unwrap(), 0.5);
        assert!(helstrom_antidist_two(&ket(&[(1.0, 0.0), (1.0, 0.0)]), &a).is_err());
    }

    #[test]
    fn discrimination_examples() {
        let a = ket(&[(1.0, 0.0), (0.0, 0.0)]);
        let p = ket(&[(0.5f64.sqrt(), 0.0), (0.5f64.sqrt(), 0.0)]);
        let r = distinguishability(&[pure(&a), pure(&p)], &[0.5, 0.5]).unwrap();
        assert!((r.value - 0.5 * (1.0 + 0.5f64.sqrt())).abs() < 1e-8);
        let basis: Vec<DensityMatrix> = (0..3)
            .map(|i| pure(&CVec::from_fn(3, |r, _| if r == i { c(1.0, 0.0) } else { c(0.0, 0.0) })))
            .collect();
        assert!((distinguishability(&basis, &[1.0 / 3.0; 3]).unwrap().value - 1.0).abs() < 1e-8);
        let same = vec![pure(&p); 3];
        assert!((distinguishability(&same, &[1.0 / 3.0; 3]).unwrap().value - 1.0 / 3.0).abs() < 1e-8);
        let orth = antidistinguishability(&basis[..2], &[0.5, 0.5]).unwrap();
        assert!((orth.value - 1.0).abs() < 1e-8);
    }
}
