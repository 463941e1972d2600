use super::extended::{extended_vertices, Caps, ExtendedVertices};
use super::facets::{facet_table_from, FacetTable};
use super::fom::FigureOfMerit;
use super::{Kind, ScenarioError, ScenarioSpec};
use crate::geometry::CoordinatePermutation;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{approximate, int, to_f64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Extended classical polytope of a scenario, kept for repeated value queries.
#[derive(Debug, Clone)]
pub struct ClassicalModel {
    pub spec: ScenarioSpec,
    pub ext: ExtendedVertices,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TotalResource {
    pub resources: Vec<f64>,
    pub product: f64,
    /// Classical value reached at `resources`.
    pub value: f64,
}

const DENOMINATOR_LIMIT: u64 = 1_000_000_000_000;
const GRID: usize = 64;

impl ClassicalModel {
    pub fn new(spec: &ScenarioSpec, caps: Caps) -> Result<Self, ScenarioError> {
        Ok(Self { spec: spec.clone(), ext: extended_vertices(spec, caps)? })
    }

    pub fn facet_table(&self, generators: Option<&[CoordinatePermutation]>) -> Result<FacetTable, ScenarioError> {
        facet_table_from(&self.spec, &self.ext, generators)
    }

    /// Distinct resource vectors with the best figure-of-merit value at each,
    /// with dominated entries removed.
    fn candidates(&self, fom: &FigureOfMerit) -> Vec<(BigRational, Vec<BigRational>)> {
        let mut best: BTreeMap<&Vec<BigRational>, BigRational> = BTreeMap::new();
        for v in &self.ext.vertices {
            let val = fom.evaluate(&v.behavior);
            best.entry(&v.resources)
                .and_modify(|b| {
                    if val > *b {
                        *b = val.clone()
                    }
                })
                .or_insert(val);
        }
        let all: Vec<(BigRational, Vec<BigRational>)> = best.into_iter().map(|(r, v)| (v, r.clone())).collect();
        all.iter()
            .filter(|(v, r)| {
                !all.iter().any(|(v2, r2)| {
                    (v2 > v && r2.iter().zip(r.iter()).all(|(a, b)| a <= b))
                        || (v2 == v && r2 != r && r2.iter().zip(r.iter()).all(|(a, b)| a <= b))
                })
            })
            .cloned()
            .collect()
    }

    /// Best classical value with each resource at most the given value.
    pub fn value(&self, fom: &FigureOfMerit, resources: &[BigRational]) -> Result<BigRational, ScenarioError> {
        self.spec.check_resources(resources)?;
        let cands = self.candidates(fom);
        let n = cands.len();
        let mut lp = LinearProgram::new(n).maximize(cands.iter().map(|(v, _)| v.clone()).collect());
        lp.constraint(vec![BigRational::one(); n], Relation::Eq, BigRational::one());
        for (i, r) in resources.iter().enumerate() {
            lp.constraint(cands.iter().map(|(_, rv)| rv[i].clone()).collect(), Relation::Le, r.clone());
        }
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => Ok(value),
            _ => Err(ScenarioError::InfeasibleResources),
        }
    }

    /// Smallest mixed value of resource `target` reaching `s`, with the other
    /// resources bounded by `fixed` (entry `target` ignored). `None` if unreachable.
    fn min_resource(
        &self,
        cands: &[(BigRational, Vec<BigRational>)],
        s: &BigRational,
        fixed: &[BigRational],
        target: usize,
    ) -> Option<BigRational> {
        let n = cands.len();
        let obj = cands.iter().map(|(_, r)| -r[target].clone()).collect();
        let mut lp = LinearProgram::new(n).maximize(obj);
        lp.constraint(vec![BigRational::one(); n], Relation::Eq, BigRational::one());
        lp.constraint(cands.iter().map(|(v, _)| v.clone()).collect(), Relation::Ge, s.clone());
        for (i, r) in fixed.iter().enumerate() {
            if i != target {
                lp.constraint(cands.iter().map(|(_, rv)| rv[i].clone()).collect(), Relation::Le, r.clone());
            }
        }
        let v = lp.solve().value().map(|v| -v.clone())?;
        let lb = self.spec.resource_lower_bound(target);
        Some(if v < lb { lb } else { v })
    }

    /// Minimizes the product of resources subject to the classical value reaching `s`.
    /// The last resource is solved exactly by LP; the others by grid search and
    /// golden-section refinement (coordinate descent for three or more senders).
    pub fn total(&self, fom: &FigureOfMerit, s: f64) -> Result<TotalResource, ScenarioError> {
        let n = self.spec.n_senders();
        let ones = vec![int(1); n];
        let target = approximate(s, DENOMINATOR_LIMIT);
        let max = self.value(fom, &ones)?;
        if max < target {
            return Err(ScenarioError::Unachievable(format!("{s} > {}", to_f64(&max))));
        }
        let cands = self.candidates(fom);
        let last = n - 1;
        let lbs: Vec<f64> = (0..n).map(|i| to_f64(&self.spec.resource_lower_bound(i))).collect();
        let eval = |r: &[f64]| -> Option<(f64, f64)> {
            let fixed: Vec<BigRational> = r.iter().map(|&x| approximate(x.clamp(0.0, 1.0), DENOMINATOR_LIMIT)).collect();
            let rl = self.min_resource(&cands, &target, &fixed, last)?;
            let rl = to_f64(&rl);
            Some((r[..last].iter().product::<f64>() * rl, rl))
        };
        let mut r = vec![1.0; n];
        if n == 1 {
            let (_, rl) = eval(&r).expect("reachable at full resources");
            return Ok(self.finish(fom, vec![rl]));
        }
        let mut best = eval(&r).expect("reachable at full resources").0;
        for _sweep in 0..if n == 2 { 1 } else { 6 } {
            let before = best;
            for k in 0..last {
                let f = |x: f64| {
                    let mut rr = r.clone();
                    rr[k] = x;
                    eval(&rr).map_or(f64::INFINITY, |(p, _)| p)
                };
                let (lo, hi) = (lbs[k], 1.0);
                let step = (hi - lo) / GRID as f64;
                let mut bi = GRID;
                let mut bv = f(hi);
                for g in 0..GRID {
                    let v = f(lo + g as f64 * step);
                    if v < bv {
                        bv = v;
                        bi = g;
                    }
                }
                let a = (lo + (bi as f64 - 1.0) * step).max(lo);
                let b = (lo + (bi as f64 + 1.0) * step).min(hi);
                let (x, v) = golden(f, a, b, 1e-11);
                let (x, v) = if v <= bv { (x, v) } else { (lo + bi as f64 * step, bv) };
                if v <= best {
                    best = v;
                    r[k] = x;
                }
            }
            if before - best < 1e-12 {
                break;
            }
        }
        let (_, rl) = eval(&r).expect("reachable at chosen resources");
        r[last] = rl;
        Ok(self.finish(fom, r))
    }

    /// Smallest resource of `sender` at which the classical value reaches `s`,
    /// the other senders unrestricted.
    pub fn min_sender_resource(&self, fom: &FigureOfMerit, s: f64, sender: usize) -> Result<BigRational, ScenarioError> {
        let n = self.spec.n_senders();
        if sender >= n {
            return Err(ScenarioError::InvalidSpec(format!("no sender {}", sender + 1)));
        }
        let target = approximate(s, DENOMINATOR_LIMIT);
        let ones = vec![int(1); n];
        let max = self.value(fom, &ones)?;
        if max < target {
            return Err(ScenarioError::Unachievable(format!("{s} > {}", to_f64(&max))));
        }
        Ok(self.min_resource(&self.candidates(fom), &target, &ones, sender).expect("reachable at full resources"))
    }

    fn finish(&self, fom: &FigureOfMerit, r: Vec<f64>) -> TotalResource {
        let exact: Vec<BigRational> = r.iter().map(|&x| approximate(x, DENOMINATOR_LIMIT)).collect();
        // Rounding can leave the point a hair below a lower bound.
        let exact: Vec<BigRational> = exact
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                let lb = self.spec.resource_lower_bound(i);
                if x < lb {
                    lb
                } else if x > int(1) {
                    int(1)
                } else {
                    x
                }
            })
            .collect();
        let value = self.value(fom, &exact).map(|v| to_f64(&v)).unwrap_or(f64::NAN);
        TotalResource { product: r.iter().product(), resources: r, value }
    }
}

/// One-shot [`ClassicalModel::value`].
pub fn classical_value(spec: &ScenarioSpec, fom: &FigureOfMerit, resources: &[BigRational]) -> Result<BigRational, ScenarioError> {
    ClassicalModel::new(spec, Caps::default())?.value(fom, resources)
}

/// One-shot [`ClassicalModel::total`].
pub fn classical_total(spec: &ScenarioSpec, fom: &FigureOfMerit, s: f64) -> Result<TotalResource, ScenarioError> {
    ClassicalModel::new(spec, Caps::default())?.total(fom, s)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    (x, f(x))
}

/// Upper bound on the value over behaviors obeying only positivity,
/// normalization and the per-sender resource constraints (independence dropped).
/// Sender `i`'s constraint is imposed for every fixed input of the other senders
/// and every receiver input, linearized over selectors `s: [n_z] -> [n_x_i]`.
pub fn operational_relaxation(spec: &ScenarioSpec, fom: &FigureOfMerit, resources: &[BigRational]) -> Result<f64, ScenarioError> {
    spec.check_resources(resources)?;
    let b = spec.behavior_dim();
    let mut lp = LinearProgram::new(b).maximize(fom.coeffs.clone());
    for xi in 0..spec.n_joint_inputs() {
        let xs = spec.joint_input(xi);
        for y in 0..spec.n_y {
            let mut a = vec![BigRational::zero(); b];
            for z in 0..spec.n_z {
                a[spec.index(z, &xs, y)] = BigRational::one();
            }
            lp.constraint(a, Relation::Eq, BigRational::one());
        }
    }
    for (i, sender) in spec.senders.iter().enumerate() {
        let others: Vec<usize> = (0..spec.n_joint_inputs())
            .map(|k| spec.joint_input(k))
            .filter(|xs| xs[i] == 0)
            .map(|xs| spec.joint_input_index(&xs))
            .collect();
        for &base in &others {
            let base_xs = spec.joint_input(base);
            for y in 0..spec.n_y {
                let mut sel = vec![0usize; spec.n_z];
                loop {
                    let mut a = vec![BigRational::zero(); b];
                    for (z, &x) in sel.iter().enumerate() {
                        let mut xs = base_xs.clone();
                        xs[i] = x;
                        a[spec.index(z, &xs, y)] += &sender.prior[x];
                    }
                    match spec.kind {
                        Kind::Distinguishability => lp.constraint(a, Relation::Le, resources[i].clone()),
                        Kind::AntiDistinguishability => {
                            lp.constraint(a, Relation::Ge, BigRational::one() - &resources[i])
                        }
                    }
                    let mut k = spec.n_z;
                    let mut done = true;
                    while k > 0 {
                        k -= 1;
                        sel[k] += 1;
                        if sel[k] < sender.n_x {
                            done = false;
                            break;
                        }
                        sel[k] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(to_f64(&value)),
        _ => Err(ScenarioError::InfeasibleResources),
    }
}
