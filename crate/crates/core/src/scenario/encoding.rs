use super::{Kind, ScenarioError, ScenarioSpec};
use crate::geometry::{h_to_v, HPolyhedron};
use crate::rational::int;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const DEFAULT_SELECTOR_CAP: u128 = 1_000_000;

/// Vertex of a sender's encoding polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingVertex {
    /// `p_e(m|x)` at index `x * n_m + m`.
    pub probs: Vec<BigRational>,
    /// Resource coordinate of the vertex: the tight value or 1.
    pub resource: BigRational,
}

/// `sum_m max_x q_x p_e(m|x)` for D, `1 - sum_m min_x q_x p_e(m|x)` for A.
pub fn tight_resource(kind: Kind, prior: &[BigRational], n_m: usize, probs: &[BigRational]) -> BigRational {
    let n_x = prior.len();
    let per_m = (0..n_m).map(|m| (0..n_x).map(move |x| &prior[x] * &probs[x * n_m + m]));
    match kind {
        Kind::Distinguishability => per_m.map(|v| v.max().unwrap()).sum(),
        Kind::AntiDistinguishability => BigRational::one() - per_m.map(|v| v.min().unwrap()).sum::<BigRational>(),
    }
}

/// Encoding polytope of one sender over `(p_e(m|x) ..., R)`, with the resource
/// constraint written out for every selector `s: [n_m] -> [n_x]`.
pub fn build_encoding_polytope(spec: &ScenarioSpec, sender: usize, selector_cap: u128) -> Result<HPolyhedron, ScenarioError> {
    let s = spec
        .senders
        .get(sender)
        .ok_or_else(|| ScenarioError::InvalidSpec(format!("no sender {}", sender + 1)))?;
    let (n_x, n_m) = (s.n_x, s.n_m);
    let selectors = (n_x as u128).checked_pow(n_m as u32).unwrap_or(u128::MAX);
    if selectors > selector_cap {
        return Err(ScenarioError::SizeOverflow { what: "selector", count: selectors, cap: selector_cap });
    }
    let dim = n_x * n_m + 1;
    let r = dim - 1;
    let zero = || vec![BigRational::zero(); dim];
    let mut h = HPolyhedron::new(dim);
    for j in 0..r {
        let mut a = zero();
        a[j] = int(-1);
        h.add_inequality(a, int(0));
    }
    for x in 0..n_x {
        let mut c = zero();
        for m in 0..n_m {
            c[x * n_m + m] = int(1);
        }
        h.add_equality(c, int(1));
    }
    let mut lo = zero();
    lo[r] = int(-1);
    h.add_inequality(lo, -spec.resource_lower_bound(sender));
    let mut hi = zero();
    hi[r] = int(1);
    h.add_inequality(hi, int(1));
    let mut sel = vec![0usize; n_m];
    loop {
        let mut a = zero();
        for (m, &x) in sel.iter().enumerate() {
            a[x * n_m + m] = s.prior[x].clone();
        }
        match spec.kind {
            // sum_m q p <= D
            Kind::Distinguishability => {
                a[r] = int(-1);
                h.add_inequality(a, int(0));
            }
            // 1 - sum_m q p <= A
            Kind::AntiDistinguishability => {
                a.iter_mut().for_each(|v| *v = -v.clone());
                a[r] = int(-1);
                h.add_inequality(a, int(-1));
            }
        }
        let mut k = n_m;
        loop {
            if k == 0 {
                return Ok(h);
            }
            k -= 1;
            sel[k] += 1;
            if sel[k] < n_x {
                break;
            }
            sel[k] = 0;
        }
    }
}

/// Vertices of the encoding polytope of `sender`, in lexicographic order.
pub fn encoding_vertices(spec: &ScenarioSpec, sender: usize, selector_cap: u128) -> Result<Vec<EncodingVertex>, ScenarioError> {
    let h = build_encoding_polytope(spec, sender, selector_cap)?;
    let v = h_to_v(&h)?;
    Ok(v.vertices
        .into_iter()
        .map(|mut p| {
            let resource = p.pop().unwrap();
            EncodingVertex { probs: p, resource }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::scenario::SenderSpec;

    fn q(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(n, d)| ratio(n, d)).collect()
    }

    #[test]
    fn binary_input_constraints() {
        let s = ScenarioSpec::two_sender(2, 2, 2, Kind::Distinguishability);
        let h = build_encoding_polytope(&s, 0, DEFAULT_SELECTOR_CAP).unwrap();
        // 4 positivity + 2 resource bounds + 4 selectors.
        assert_eq!(h.inequalities.len(), 10);
        assert_eq!(h.equalities.len(), 2);
    }

    /// Vertices by solving every square subsystem of tight constraints.
    fn basis_oracle(h: &HPolyhedron) -> Vec<Vec<BigRational>> {
        use crate::geometry::linalg::solve;
        let need = h.dim - h.equalities.len();
        let m = h.inequalities.len();
        let mut out = Vec::new();
        let mut pick: Vec<usize> = (0..need).collect();
        loop {
            let mut rows: Vec<Vec<BigRational>> = h.equalities.iter().map(|(c, _)| c.clone()).collect();
            let mut rhs: Vec<BigRational> = h.equalities.iter().map(|(_, d)| d.clone()).collect();
            for &k in &pick {
                rows.push(h.inequalities[k].0.clone());
                rhs.push(h.inequalities[k].1.clone());
            }
            if crate::geometry::linalg::rank(rows.clone(), h.dim) == h.dim {
                if let Some(x) = solve(&rows, &rhs) {
                    if h.contains(&x) && !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
            let mut i = need;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                if pick[i] < m - need + i {
                    pick[i] += 1;
                    for j in i + 1..need {
                        pick[j] = pick[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn binary_input_vertices() {
        let s = ScenarioSpec::two_sender(2, 2, 2, Kind::Distinguishability);
        let h = build_encoding_polytope(&s, 0, DEFAULT_SELECTOR_CAP).unwrap();
        let v = encoding_vertices(&s, 0, DEFAULT_SELECTOR_CAP).unwrap();
        let pts: Vec<Vec<BigRational>> =
            v.iter().map(|e| e.probs.iter().cloned().chain([e.resource.clone()]).collect()).collect();
        assert_eq!(pts, basis_oracle(&h));
        let has = |p: &[(i64, i64)], r: (i64, i64)| v.iter().any(|e| e.probs == q(p) && e.resource == ratio(r.0, r.1));
        assert!(has(&[(1, 1), (0, 1), (0, 1), (1, 1)], (1, 1)));
        // Constant encodings with minimal resource lie on the edge between two
        // deterministic constant encodings.
        assert!(has(&[(1, 1), (0, 1), (1, 1), (0, 1)], (1, 2)));
        assert!(has(&[(0, 1), (1, 1), (0, 1), (1, 1)], (1, 2)));
        assert!(!has(&[(1, 2), (1, 2), (1, 2), (1, 2)], (1, 2)));
        let mut mid = q(&[(1, 2); 4]);
        mid.push(ratio(1, 2));
        assert!(h.contains(&mid));
        for e in &v {
            let t = tight_resource(s.kind, &s.senders[0].prior, 2, &e.probs);
            assert!(e.resource == t || e.resource == int(1));
        }
    }

    #[test]
    fn ternary_input_vertices_match_oracle() {
        let s = ScenarioSpec::new(
            vec![SenderSpec { n_x: 3, prior: vec![ratio(1, 3); 3], n_m: 2 }],
            1,
            2,
            Kind::AntiDistinguishability,
        )
        .unwrap();
        let h = build_encoding_polytope(&s, 0, DEFAULT_SELECTOR_CAP).unwrap();
        let v = encoding_vertices(&s, 0, DEFAULT_SELECTOR_CAP).unwrap();
        let pts: Vec<Vec<BigRational>> =
            v.iter().map(|e| e.probs.iter().cloned().chain([e.resource.clone()]).collect()).collect();
        assert_eq!(pts, basis_oracle(&h));
    }

    #[test]
    fn constant_encoding_has_minimal_resource() {
        let prior = vec![ratio(1, 3); 3];
        let probs = vec![ratio(1, 4); 12];
        assert_eq!(tight_resource(Kind::Distinguishability, &prior, 4, &probs), ratio(1, 3));
        assert_eq!(tight_resource(Kind::AntiDistinguishability, &prior, 4, &probs), ratio(2, 3));
    }

    #[test]
    fn selector_cap() {
        let s = ScenarioSpec::new(vec![SenderSpec::uniform(4)], 1, 2, Kind::Distinguishability).unwrap();
        assert!(matches!(build_encoding_polytope(&s, 0, 1000), Err(ScenarioError::SizeOverflow { .. })));
    }
}
