//! Anti-distinguishing a string of inputs held by independent senders.

use crate::geometry::h_to_v;
use crate::quantum::mat::{c, kron_ket, CVec};
use crate::quantum::{antidistinguishability, seesaw, DensityMatrix, QuantumError, SeeSawConfig};
use crate::rational::{int, ratio, to_f64};
use crate::scenario::{build_encoding_polytope, DEFAULT_SELECTOR_CAP, FigureOfMerit, Kind, ScenarioError, ScenarioSpec, SenderSpec};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributedError {
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("theta {theta} outside [{min}, pi/2]")]
    ThetaOutOfRange { theta: f64, min: f64 },
    #[error("{what} count {count} exceeds cap {cap}")]
    SizeOverflow { what: &'static str, count: u128, cap: u128 },
    #[error("vector is not normalised (norm {0})")]
    NonUnit(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("success {target} not reached at full resources (best {best})")]
    Unachievable { target: f64, best: f64 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// `N` senders with `n` inputs each; the receiver names one input string to exclude.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributedTask {
    pub n_senders: usize,
    pub n_inputs: usize,
    pub priors: Vec<Vec<BigRational>>,
}

pub const BRUTE_FORCE_CAP: u128 = 1_000_000;
const FEASIBLE_TOL: f64 = 1e-6;
const BISECTION_TOL: f64 = 1e-4;

impl DistributedTask {
    pub fn uniform(n_senders: usize, n_inputs: usize) -> Result<Self, DistributedError> {
        let q = ratio(1, n_inputs.max(1) as i64);
        Self::with_priors(vec![vec![q; n_inputs]; n_senders])
    }

    pub fn with_priors(priors: Vec<Vec<BigRational>>) -> Result<Self, DistributedError> {
        let n = priors.first().map_or(0, |p| p.len());
        if priors.is_empty() || n < 2 {
            return Err(DistributedError::Invalid("need at least one sender with two inputs".into()));
        }
        for p in &priors {
            if p.len() != n || p.iter().any(|q| q.is_negative()) || p.iter().sum::<BigRational>() != BigRational::one() {
                return Err(DistributedError::Invalid("priors must be probability vectors of equal length".into()));
            }
        }
        Ok(Self { n_senders: priors.len(), n_inputs: n, priors })
    }

    /// One outcome per input string.
    pub fn n_outcomes(&self) -> usize {
        self.n_inputs.pow(self.n_senders as u32)
    }

    /// `1 - min_x q_x` for sender `i`.
    pub fn floor(&self, i: usize) -> BigRational {
        BigRational::one() - self.priors[i].iter().min().unwrap()
    }

    pub fn scenario(&self) -> ScenarioSpec {
        let senders = self
            .priors
            .iter()
            .map(|p| SenderSpec { prior: p.clone(), ..SenderSpec::uniform(self.n_inputs) })
            .collect();
        ScenarioSpec::new(senders, 1, self.n_outcomes(), Kind::AntiDistinguishability).expect("validated priors")
    }

    /// `-sum_x q_x p(z = x | x)`; the success is one plus this.
    pub fn figure_of_merit(&self, spec: &ScenarioSpec) -> FigureOfMerit {
        let mut f = FigureOfMerit::zero(spec);
        for k in 0..spec.n_joint_inputs() {
            let xs = spec.joint_input(k);
            f.coeffs[spec.index(k, &xs, 0)] = -self.joint_prior(&xs);
        }
        f
    }

    pub fn joint_prior(&self, xs: &[usize]) -> BigRational {
        xs.iter().zip(&self.priors).map(|(&x, q)| q[x].clone()).product()
    }

    fn check(&self, a: &[BigRational]) -> Result<(), DistributedError> {
        if a.len() != self.n_senders {
            return Err(DistributedError::OutOfRange(format!("{} values for {} senders", a.len(), self.n_senders)));
        }
        for (i, v) in a.iter().enumerate() {
            if *v < self.floor(i) || *v > int(1) {
                return Err(DistributedError::OutOfRange(format!("A{} = {} outside [{}, 1]", i + 1, v, self.floor(i))));
            }
        }
        Ok(())
    }
}

/// `1 - prod_i (1 - A_i)`.
pub fn classical_bound(task: &DistributedTask, a: &[BigRational]) -> Result<BigRational, DistributedError> {
    task.check(a)?;
    Ok(BigRational::one() - a.iter().map(|v| BigRational::one() - v).product::<BigRational>())
}

/// Exact classical optimum: every tuple of vertices of the senders' encoding
/// polytopes cut at `R <= A_i`, each with its best decoder.
pub fn brute_force_distributed(task: &DistributedTask, a: &[BigRational]) -> Result<BigRational, DistributedError> {
    task.check(a)?;
    let spec = task.scenario();
    let mut encodings: Vec<Vec<Vec<BigRational>>> = Vec::new();
    for (i, ai) in a.iter().enumerate() {
        let mut h = build_encoding_polytope(&spec, i, DEFAULT_SELECTOR_CAP)?;
        let mut cut = vec![BigRational::zero(); h.dim];
        cut[h.dim - 1] = int(1);
        h.add_inequality(cut, ai.clone());
        let v = h_to_v(&h).map_err(ScenarioError::from)?;
        let set: BTreeSet<Vec<BigRational>> = v.vertices.into_iter().map(|mut p| {
            p.pop();
            p
        }).collect();
        encodings.push(set.into_iter().collect());
    }
    let count = encodings.iter().map(|e| e.len() as u128).product::<u128>();
    if count > BRUTE_FORCE_CAP {
        return Err(DistributedError::SizeOverflow { what: "encoding tuple", count, cap: BRUTE_FORCE_CAP });
    }
    let n_m: Vec<usize> = spec.senders.iter().map(|s| s.n_m).collect();
    let joint_x: Vec<Vec<usize>> = (0..spec.n_joint_inputs()).map(|k| spec.joint_input(k)).collect();
    let joint_m = odometer(&n_m);
    let priors: Vec<BigRational> = joint_x.iter().map(|xs| task.joint_prior(xs)).collect();
    let mut best: Option<BigRational> = None;
    for pick in odometer(&encodings.iter().map(|e| e.len()).collect::<Vec<_>>()) {
        let mut miss = BigRational::zero();
        for ms in &joint_m {
            let weight = |(xs, q): (&Vec<usize>, &BigRational)| -> BigRational {
                let mut w = q.clone();
                for (i, (&x, &m)) in xs.iter().zip(ms).enumerate() {
                    w *= &encodings[i][pick[i]][x * n_m[i] + m];
                }
                w
            };
            miss += joint_x.iter().zip(&priors).map(weight).min().unwrap();
        }
        let v = BigRational::one() - miss;
        if best.as_ref().map_or(true, |b| v > *b) {
            best = Some(v);
        }
    }
    Ok(best.expect("at least one encoding per sender"))
}

/// All index tuples below `sizes`, last index fastest.
fn odometer(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out.into_iter().flat_map(|p| (0..s).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

/// `(2 atan(2^(1/N) - 1), pi/2)`.
pub fn pbr_theta_range(n_senders: u32) -> Result<(f64, f64), DistributedError> {
    if n_senders == 0 {
        return Err(DistributedError::Invalid("need at least one sender".into()));
    }
    Ok((2.0 * (2f64.powf(1.0 / n_senders as f64) - 1.0).atan(), FRAC_PI_2))
}

/// `cos(theta/2)|0> + (-1)^x sin(theta/2)|1>` for `x = 0, 1`.
pub fn pbr_states(theta: f64) -> [CVec; 2] {
    let (a, b) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [CVec::from_vec(vec![c(a, 0.0), c(b, 0.0)]), CVec::from_vec(vec![c(a, 0.0), c(-b, 0.0)])]
}

/// `(1 + sin theta) / 2`.
pub fn pbr_antidist(theta: f64) -> f64 {
    0.5 * (1.0 + theta.sin())
}

/// `(2 / (1 + sin theta))^N`.
pub fn pbr_ratio(theta: f64, n_senders: u32) -> Result<f64, DistributedError> {
    let (min, max) = pbr_theta_range(n_senders)?;
    if !(min - 1e-12..=max + 1e-12).contains(&theta) {
        return Err(DistributedError::ThetaOutOfRange { theta, min });
    }
    Ok((1.0 / pbr_antidist(theta)).powi(n_senders as i32))
}

/// `2^N (1 + 2^(1 - 2/N) - 2^(1 - 1/N))^N`.
pub fn pbr_optimal_ratio(n_senders: u32) -> Result<f64, DistributedError> {
    if n_senders < 2 {
        return Err(DistributedError::Invalid("need at least two senders".into()));
    }
    let n = n_senders as f64;
    let base = 1.0 + 2f64.powf(1.0 - 2.0 / n) - 2f64.powf(1.0 - 1.0 / n);
    Ok(2f64.powf(n) * base.powf(n))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExclusionCertificate {
    pub theta: f64,
    pub n_senders: usize,
    pub excluded: bool,
    pub sdp_value: f64,
}

/// Whether the `2^N` product states built from [`pbr_states`] are perfectly
/// anti-distinguishable, by SDP.
pub fn certify_perfect_exclusion(theta: f64, n_senders: usize) -> Result<ExclusionCertificate, DistributedError> {
    if n_senders == 0 || n_senders > 3 {
        return Err(DistributedError::SizeOverflow { what: "sender", count: n_senders as u128, cap: 3 });
    }
    let pair = pbr_states(theta);
    let kets = product_kets(&pair, n_senders);
    let states = kets.iter().map(DensityMatrix::pure).collect::<Result<Vec<_>, _>>()?;
    let q = vec![1.0 / states.len() as f64; states.len()];
    let sdp_value = antidistinguishability(&states, &q)?.value;
    Ok(ExclusionCertificate { theta, n_senders, excluded: sdp_value >= 1.0 - 1e-7, sdp_value })
}

/// All `n^N` tensor products, first factor slowest.
fn product_kets(kets: &[CVec], n_senders: usize) -> Vec<CVec> {
    odometer(&vec![kets.len(); n_senders])
        .into_iter()
        .map(|idx| idx.iter().skip(1).fold(kets[idx[0]].clone(), |acc, &k| kron_ket(&acc, &kets[k])))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct GramSummary {
    /// `sum_{j != l} |<psi_j|psi_l>|^2` over ordered pairs.
    pub alpha: f64,
    /// `sum_{j != l} |<psi_j|psi_l>|` over ordered pairs.
    pub beta: f64,
    /// `(n + alpha)^N`, the squared Frobenius norm of the product Gram matrix.
    pub frob_sq: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SufficientCondition {
    /// `n (n - 2) < beta`.
    pub cond1: bool,
    /// `alpha <= n^2 / 2^(1/N) - n`.
    pub cond2: bool,
    pub gram: GramSummary,
}

fn check_unit(states: &[CVec]) -> Result<(), DistributedError> {
    if states.len() < 2 {
        return Err(DistributedError::Invalid("need at least two states".into()));
    }
    if states.iter().any(|s| s.len() != states[0].len()) {
        return Err(DistributedError::Invalid("states of different dimensions".into()));
    }
    match states.iter().map(|s| s.norm()).find(|n| (n - 1.0).abs() > 1e-9) {
        Some(n) => Err(DistributedError::NonUnit(n)),
        None => Ok(()),
    }
}

pub fn gram_summary(states: &[CVec], n_senders: usize) -> Result<GramSummary, DistributedError> {
    check_unit(states)?;
    let (mut alpha, mut beta) = (0.0, 0.0);
    for (j, a) in states.iter().enumerate() {
        for (l, b) in states.iter().enumerate() {
            if j != l {
                let o = a.dotc(b).norm();
                alpha += o * o;
                beta += o;
            }
        }
    }
    let frob_sq = (states.len() as f64 + alpha).powi(n_senders as i32);
    Ok(GramSummary { alpha, beta, frob_sq })
}

/// Squared Frobenius norm of the Gram matrix of the `n^N` product states, assembled directly.
pub fn product_gram_frob_sq(states: &[CVec], n_senders: usize) -> Result<f64, DistributedError> {
    check_unit(states)?;
    let count = (states.len() as u128).pow(n_senders as u32);
    if count > 256 {
        return Err(DistributedError::SizeOverflow { what: "product state", count, cap: 256 });
    }
    let kets = product_kets(states, n_senders);
    Ok(kets.iter().flat_map(|a| kets.iter().map(move |b| a.dotc(b).norm_sqr())).sum())
}

pub fn sufficient_condition(states: &[CVec], n_senders: usize) -> Result<SufficientCondition, DistributedError> {
    let gram = gram_summary(states, n_senders)?;
    let n = states.len() as f64;
    Ok(SufficientCondition {
        cond1: n * (n - 2.0) < gram.beta,
        cond2: gram.alpha <= n * n / 2f64.powf(1.0 / n_senders as f64) - n,
        gram,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Advantage {
    /// Success of excluding the input string, each sender using `states`.
    pub success: f64,
    /// Anti-distinguishability of `states`.
    pub a_q: f64,
    /// Classical resource needed for the same success, all senders equal.
    pub a_c: f64,
    /// `(a_c / a_q)^N`.
    pub ratio: f64,
}

/// `1 - (1 - s)^(1/N)`.
pub fn classical_common_resource(success: f64, n_senders: usize) -> f64 {
    1.0 - (1.0 - success).max(0.0).powf(1.0 / n_senders as f64)
}

/// Advantage of every sender encoding into the same pure states, uniform priors.
pub fn explicit_advantage(states: &[CVec], n_senders: usize) -> Result<Advantage, DistributedError> {
    check_unit(states)?;
    let single = states.iter().map(DensityMatrix::pure).collect::<Result<Vec<_>, _>>()?;
    let a_q = antidistinguishability(&single, &vec![1.0 / single.len() as f64; single.len()])?.value;
    let kets = product_kets(states, n_senders);
    let joint = kets.iter().map(DensityMatrix::pure).collect::<Result<Vec<_>, _>>()?;
    let success = antidistinguishability(&joint, &vec![1.0 / joint.len() as f64; joint.len()])?.value;
    let a_c = classical_common_resource(success, n_senders);
    Ok(Advantage { success, a_q, a_c, ratio: (a_c / a_q).powi(n_senders as i32) })
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub s: f64,
    pub a_q: f64,
    pub a_c: f64,
    pub ratio: f64,
}

/// Smallest common anti-distinguishability reaching each success value, by
/// bisection over a see-saw feasibility check. Points are returned in
/// increasing order of success.
pub fn advantage_curve(task: &DistributedTask, s_grid: &[f64], cfg: &SeeSawConfig) -> Result<Vec<CurvePoint>, DistributedError> {
    let floors: Vec<f64> = (0..task.n_senders).map(|i| to_f64(&task.floor(i))).collect();
    if floors.iter().any(|f| (f - floors[0]).abs() > 1e-15) {
        return Err(DistributedError::Invalid("senders need equal resource floors".into()));
    }
    let floor = floors[0];
    let spec = task.scenario();
    let fom = task.figure_of_merit(&spec);
    let n = task.n_senders;
    let success_at = |a: f64| -> Result<f64, DistributedError> { Ok(1.0 + seesaw(&spec, &fom, &vec![a; n], cfg)?.value) };
    let mut grid: Vec<f64> = s_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let s_floor = 1.0 - (1.0 - floor).powi(n as i32);
    let mut out = Vec::with_capacity(grid.len());
    let mut lo = floor;
    let mut top: Option<f64> = None;
    for &s in &grid {
        if !(0.0..=1.0).contains(&s) {
            return Err(DistributedError::OutOfRange(format!("success {s}")));
        }
        let a_c = classical_common_resource(s, n).max(floor);
        if s <= s_floor + 1e-12 {
            out.push(CurvePoint { s, a_q: floor, a_c: floor, ratio: 1.0 });
            continue;
        }
        let best = match top {
            Some(v) => v,
            None => *top.insert(success_at(1.0)?),
        };
        if best < s - FEASIBLE_TOL {
            return Err(DistributedError::Unachievable { target: s, best });
        }
        let (mut a, mut b) = (lo, 1.0);
        while b - a > BISECTION_TOL {
            let mid = 0.5 * (a + b);
            if success_at(mid)? >= s - FEASIBLE_TOL {
                b = mid;
            } else {
                a = mid;
            }
        }
        lo = b;
        out.push(CurvePoint { s, a_q: b, a_c, ratio: (a_c / b).powi(n as i32) });
    }
    Ok(out)
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut s = String::from("S,A_Q,A_C,ratio\n");
    for p in points {
        s.push_str(&format!("{},{},{},{}\n", p.s, p.a_q, p.a_c, p.ratio));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::helstrom_antidist_two;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn q(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn classical_bound_values() {
        let t = DistributedTask::uniform(2, 2).unwrap();
        assert_eq!(classical_bound(&t, &[q(1, 2), q(1, 2)]).unwrap(), q(3, 4));
        assert_eq!(classical_bound(&t, &[int(1), q(1, 2)]).unwrap(), int(1));
        assert!(matches!(classical_bound(&t, &[q(1, 3), q(1, 2)]), Err(DistributedError::OutOfRange(_))));
        assert!(classical_bound(&t, &[q(1, 2)]).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let t = DistributedTask::uniform(2, 2).unwrap();
        assert_eq!(brute_force_distributed(&t, &[q(1, 2), q(1, 2)]).unwrap(), q(3, 4));
        assert_eq!(brute_force_distributed(&t, &[int(1), int(1)]).unwrap(), int(1));
        assert_eq!(brute_force_distributed(&t, &[int(1), q(3, 4)]).unwrap(), int(1));
        let v = brute_force_distributed(&t, &[q(9, 10), q(4, 5)]).unwrap();
        assert!(v <= q(49, 50));
        let t3 = DistributedTask::uniform(2, 3).unwrap();
        assert_eq!(brute_force_distributed(&t3, &[q(2, 3), q(2, 3)]).unwrap(), q(8, 9));
    }

    #[test]
    fn task_scenario_layout() {
        let t = DistributedTask::uniform(3, 2).unwrap();
        let spec = t.scenario();
        assert_eq!(spec.n_z, 8);
        let f = t.figure_of_merit(&spec);
        assert_eq!(f.coeffs.iter().filter(|c| !c.is_zero()).count(), 8);
        assert_eq!(f.coeffs.iter().sum::<BigRational>(), int(-1));
    }

    #[test]
    fn pbr_formulas() {
        assert!((pbr_theta_range(2).unwrap().0 - FRAC_PI_4).abs() < 1e-12);
        assert!((pbr_theta_range(1).unwrap().0 - FRAC_PI_2).abs() < 1e-12);
        let mins: Vec<f64> = (2..12).map(|n| pbr_theta_range(n).unwrap().0).collect();
        assert!(mins.windows(2).all(|w| w[1] < w[0]));
        let direct = (2.0 / (1.0 + 0.5f64.sqrt())).powi(2);
        assert!((pbr_ratio(FRAC_PI_4, 2).unwrap() - direct).abs() < 1e-12);
        assert!((pbr_optimal_ratio(2).unwrap() - 1.37258).abs() < 1e-5);
        for n in 2..12 {
            let t = pbr_theta_range(n).unwrap().0;
            assert!((pbr_ratio(t, n).unwrap() - pbr_optimal_ratio(n).unwrap()).abs() < 1e-12);
        }
        assert!((pbr_ratio(FRAC_PI_2, 5).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(pbr_ratio(0.1, 2), Err(DistributedError::ThetaOutOfRange { .. })));
        // base ~ 1 - 2 ln2 / N, so value / 2^N -> 1/4 while value^(1/N) -> 2.
        let r = pbr_optimal_ratio(1000).unwrap() / 2f64.powi(1000);
        assert!((r - 0.25).abs() < 2e-3, "{r}");
        assert!((pbr_optimal_ratio(1000).unwrap().powf(1.0 / 1000.0) - 2.0).abs() < 5e-3);
    }

    #[test]
    fn pbr_pair_matches_closed_form() {
        for theta in [0.3, FRAC_PI_4, 1.2, FRAC_PI_2] {
            let [a, b] = pbr_states(theta);
            assert!((helstrom_antidist_two(&a, &b).unwrap() - pbr_antidist(theta)).abs() < 1e-9);
        }
    }

    #[test]
    fn perfect_exclusion_certificates() {
        assert!(certify_perfect_exclusion(FRAC_PI_4, 2).unwrap().excluded);
        let below = certify_perfect_exclusion(PI / 8.0, 2).unwrap();
        assert!(!below.excluded && below.sdp_value < 1.0);
        assert!(certify_perfect_exclusion(PI / 3.0, 3).unwrap().excluded);
        assert!(certify_perfect_exclusion(PI / 3.0, 4).is_err());
    }

    fn trine_like() -> Vec<CVec> {
        let (a, b) = (5.0 * PI / 18.0, 19.0 * PI / 60.0);
        let w = c((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
        vec![
            CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]),
            CVec::from_vec(vec![c(a.cos(), 0.0), c(a.sin(), 0.0)]),
            CVec::from_vec(vec![c(b.cos(), 0.0), w * b.sin()]),
        ]
    }

    #[test]
    fn gram_conditions() {
        let s = trine_like();
        let g = sufficient_condition(&s, 2).unwrap();
        // Ordered-pair sums of |cos(5pi/18)|, |cos(19pi/60)| and the third overlap.
        let (a, b) = (5.0 * PI / 18.0, 19.0 * PI / 60.0);
        let o3 = (c(a.cos() * b.cos(), 0.0) + c((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin()) * (a.sin() * b.sin())).norm();
        let beta = 2.0 * (a.cos() + b.cos() + o3);
        assert!((g.gram.beta - beta).abs() < 1e-12);
        assert!((g.gram.beta - 3.489).abs() < 1e-3, "{}", g.gram.beta);
        assert!((g.gram.alpha - 2.040).abs() < 1e-3, "{}", g.gram.alpha);
        assert!(g.cond1 && g.cond2);
        for n in 1..=3 {
            let d = product_gram_frob_sq(&s, n).unwrap();
            assert!((d - gram_summary(&s, n).unwrap().frob_sq).abs() < 1e-9);
        }
        let basis: Vec<CVec> =
            (0..3).map(|i| CVec::from_fn(3, |r, _| c(if r == i { 1.0 } else { 0.0 }, 0.0))).collect();
        let g = sufficient_condition(&basis, 2).unwrap();
        assert_eq!(g.gram.beta, 0.0);
        assert!(!g.cond1);
        let same = vec![basis[0].clone(); 3];
        let g = sufficient_condition(&same, 2).unwrap();
        assert_eq!((g.gram.alpha, g.gram.beta), (6.0, 6.0));
        assert!(g.cond1 && !g.cond2);
        let bad = vec![basis[0].clone() * c(2.0, 0.0), basis[1].clone()];
        assert!(matches!(gram_summary(&bad, 2), Err(DistributedError::NonUnit(_))));
    }

    #[test]
    fn explicit_states_advantage() {
        let r = explicit_advantage(&trine_like(), 2).unwrap();
        assert!((r.a_q - 0.9798).abs() < 5e-4);
        assert!(r.success > 1.0 - 1e-6);
        assert!((r.ratio - 1.042).abs() < 3e-3, "{}", r.ratio);
    }

    #[test]
    fn curve_at_floor_and_small_task() {
        let t = DistributedTask::uniform(2, 2).unwrap();
        let cfg = SeeSawConfig { dim: 2, restarts: 2, ..Default::default() };
        let pts = advantage_curve(&t, &[0.9, 0.75], &cfg).unwrap();
        assert_eq!(pts[0].s, 0.75);
        assert_eq!(pts[0].ratio, 1.0);
        assert!(pts[1].a_q >= pts[0].a_q);
        assert!(pts[1].ratio >= 1.0 - 1e-3, "{:?}", pts[1]);
        assert!(curve_csv(&pts).starts_with("S,A_Q,A_C,ratio\n"));
    }
}
