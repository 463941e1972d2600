use super::extended::{extended_vertices, Caps, ExtendedVertices};
use super::fom::{push_term, ParsedInequality};
use super::{ScenarioError, ScenarioSpec};
use crate::geometry::{orbit_classify, v_to_facets, AffineHull, CanonicalFacet, CoordinatePermutation, GeometryError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};

/// Facet read as `sum c p <= sum_i r_i R_i + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResourceFacet {
    pub coeffs: Vec<BigInt>,
    pub resource_coeffs: Vec<BigInt>,
    pub constant: BigInt,
}

impl ResourceFacet {
    pub fn from_canonical(spec: &ScenarioSpec, f: &CanonicalFacet) -> Self {
        let b = spec.behavior_dim();
        Self {
            coeffs: f.coeffs[..b].to_vec(),
            resource_coeffs: f.coeffs[b..].iter().map(|c| -c).collect(),
            constant: f.bound.clone(),
        }
    }

    pub fn to_canonical(&self) -> CanonicalFacet {
        CanonicalFacet {
            coeffs: self.coeffs.iter().cloned().chain(self.resource_coeffs.iter().map(|c| -c)).collect(),
            bound: self.constant.clone(),
        }
    }

    pub fn display(&self, spec: &ScenarioSpec) -> String {
        let mut lhs = String::new();
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            push_term(&mut lhs, &BigRational::from_integer(c.clone()), &format!("p({})", spec.key(i)));
        }
        let mut rhs = String::new();
        for (i, c) in self.resource_coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            push_term(&mut rhs, &BigRational::from_integer(c.clone()), &spec.resource_name(i));
        }
        if !self.constant.is_zero() || rhs.is_empty() {
            push_term(&mut rhs, &BigRational::from_integer(self.constant.clone()), "");
        }
        if lhs.is_empty() {
            lhs.push('0');
        }
        format!("{lhs} <= {rhs}")
    }
}

#[derive(Debug, Clone)]
pub struct FacetClass {
    pub representative: ResourceFacet,
    pub orbit_size: usize,
    pub trivial: bool,
    pub members: Vec<CanonicalFacet>,
}

#[derive(Debug, Clone)]
pub struct FacetTable {
    pub spec: ScenarioSpec,
    pub hull: AffineHull,
    pub n_vertices: usize,
    pub total: usize,
    pub trivial_count: usize,
    /// Trivial classes first, then nontrivial, each by representative.
    pub classes: Vec<FacetClass>,
}

#[derive(Serialize)]
struct ClassJson {
    coeffs: BTreeMap<String, String>,
    resource_coeffs: BTreeMap<String, String>,
    constant: String,
    orbit_size: usize,
    trivial: bool,
    inequality: String,
}

impl FacetTable {
    pub fn nontrivial(&self) -> impl Iterator<Item = &FacetClass> {
        self.classes.iter().filter(|c| !c.trivial)
    }

    pub fn nontrivial_orbit_sizes(&self) -> Vec<usize> {
        self.nontrivial().map(|c| c.orbit_size).collect()
    }

    /// Index of the class containing the inequality, compared modulo the affine hull.
    pub fn find(&self, ineq: &ParsedInequality) -> Option<usize> {
        let a: Vec<BigRational> = ineq.fom.coeffs.iter().cloned().chain(ineq.resource_coeffs.iter().map(|r| -r)).collect();
        let f = self.hull.reduce(&a, &ineq.constant);
        self.classes.iter().position(|c| c.members.binary_search(&f).is_ok())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let spec = &self.spec;
        let classes: Vec<ClassJson> = self
            .classes
            .iter()
            .map(|c| {
                let r = &c.representative;
                ClassJson {
                    coeffs: r
                        .coeffs
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(i, v)| (spec.key(i), v.to_string()))
                        .collect(),
                    resource_coeffs: r
                        .resource_coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (spec.resource_name(i), v.to_string()))
                        .collect(),
                    constant: r.constant.to_string(),
                    orbit_size: c.orbit_size,
                    trivial: c.trivial,
                    inequality: r.display(spec),
                }
            })
            .collect();
        serde_json::json!({
            "total": self.total,
            "trivial": self.trivial_count,
            "nontrivial_classes": self.classes.iter().filter(|c| !c.trivial).count(),
            "vertices": self.n_vertices,
            "equalities": self.hull.equalities.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "classes": classes,
        })
    }
}

fn permutation(
    spec: &ScenarioSpec,
    map: impl Fn(usize, &[usize], usize) -> (usize, Vec<usize>, usize),
    resource: impl Fn(usize) -> usize,
) -> CoordinatePermutation {
    let b = spec.behavior_dim();
    let mut perm = vec![0; spec.dim()];
    for (idx, slot) in perm.iter_mut().enumerate().take(b) {
        let (z, xs, y) = spec.coordinate(idx);
        let (z2, xs2, y2) = map(z, &xs, y);
        *slot = spec.index(z2, &xs2, y2);
    }
    for i in 0..spec.n_senders() {
        perm[b + i] = b + resource(i);
    }
    CoordinatePermutation::new(perm).expect("relabeling is a bijection")
}

fn swap(v: usize, a: usize, b: usize) -> usize {
    if v == a {
        b
    } else if v == b {
        a
    } else {
        v
    }
}

/// Relabelings that preserve the classical polytope: input transpositions with
/// equal priors, outcome transpositions for each receiver input, receiver-input
/// transpositions, and sender exchange (with resources) for identical senders.
pub fn symmetry_generators(spec: &ScenarioSpec) -> Vec<CoordinatePermutation> {
    let mut gens = Vec::new();
    for (i, s) in spec.senders.iter().enumerate() {
        for a in 0..s.n_x {
            for b in a + 1..s.n_x {
                if s.prior[a] != s.prior[b] {
                    continue;
                }
                gens.push(permutation(
                    spec,
                    |z, xs, y| {
                        let mut xs = xs.to_vec();
                        xs[i] = swap(xs[i], a, b);
                        (z, xs, y)
                    },
                    |r| r,
                ));
            }
        }
    }
    for yy in 0..spec.n_y {
        for a in 0..spec.n_z {
            for b in a + 1..spec.n_z {
                gens.push(permutation(spec, |z, xs, y| (if y == yy { swap(z, a, b) } else { z }, xs.to_vec(), y), |r| r));
            }
        }
    }
    for a in 0..spec.n_y {
        for b in a + 1..spec.n_y {
            gens.push(permutation(spec, |z, xs, y| (z, xs.to_vec(), swap(y, a, b)), |r| r));
        }
    }
    for i in 0..spec.n_senders() {
        for j in i + 1..spec.n_senders() {
            if spec.senders[i] != spec.senders[j] {
                continue;
            }
            gens.push(permutation(
                spec,
                |z, xs, y| {
                    let mut xs = xs.to_vec();
                    xs.swap(i, j);
                    (z, xs, y)
                },
                |r| swap(r, i, j),
            ));
        }
    }
    gens.retain(|g| !g.is_identity());
    gens
}

/// Single-coordinate bounds `min <= x_j <= max` over the vertices, reduced modulo the hull.
fn trivial_forms(hull: &AffineHull, points: &[Vec<BigRational>], dim: usize) -> HashSet<CanonicalFacet> {
    let mut out = HashSet::new();
    for j in 0..dim {
        let lo = points.iter().map(|p| &p[j]).min().unwrap();
        let hi = points.iter().map(|p| &p[j]).max().unwrap();
        let mut a = vec![BigRational::zero(); dim];
        a[j] = BigRational::from_integer(1.into());
        out.insert(hull.reduce(&a, hi));
        a[j] = -a[j].clone();
        out.insert(hull.reduce(&a, &-lo.clone()));
    }
    out
}

/// Facets of the extended classical polytope grouped into symmetry classes.
/// `generators` defaults to [`symmetry_generators`].
pub fn facet_table(
    spec: &ScenarioSpec,
    generators: Option<&[CoordinatePermutation]>,
    caps: Caps,
) -> Result<FacetTable, ScenarioError> {
    let ext = extended_vertices(spec, caps)?;
    facet_table_from(spec, &ext, generators)
}

pub(crate) fn facet_table_from(
    spec: &ScenarioSpec,
    ext: &ExtendedVertices,
    generators: Option<&[CoordinatePermutation]>,
) -> Result<FacetTable, ScenarioError> {
    let poly = ext.polytope(spec);
    let default_gens;
    let gens = match generators {
        Some(g) => g,
        None => {
            default_gens = symmetry_generators(spec);
            &default_gens
        }
    };
    for (i, g) in gens.iter().enumerate() {
        if !g.preserves(&poly) {
            return Err(GeometryError::InvalidSymmetry(i).into());
        }
    }
    let en = v_to_facets(&poly)?;
    let trivial = trivial_forms(&en.hull, &poly.vertices, spec.dim());
    let orbits = orbit_classify(&en.hull, &en.facets, gens)?;
    let mut classes: Vec<FacetClass> = orbits
        .into_iter()
        .map(|o| FacetClass {
            representative: ResourceFacet::from_canonical(spec, &o.representative),
            orbit_size: o.members.len(),
            trivial: trivial.contains(&o.representative),
            members: o.members,
        })
        .collect();
    classes.sort_by_key(|c| !c.trivial);
    let trivial_count = classes.iter().filter(|c| c.trivial).map(|c| c.orbit_size).sum();
    Ok(FacetTable {
        spec: spec.clone(),
        hull: en.hull,
        n_vertices: poly.len(),
        total: en.facets.len(),
        trivial_count,
        classes,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{parse_inequality, Kind};

    #[test]
    fn two_two_two_table() {
        let s = ScenarioSpec::two_sender(2, 2, 2, Kind::Distinguishability);
        let t = facet_table(&s, None, Caps::default()).unwrap();
        assert_eq!(t.total, 18);
        assert_eq!(t.trivial_count, 10);
        assert_eq!(t.nontrivial_orbit_sizes(), vec![8]);
        let row = parse_inequality(&s, "p(1|2,1) - p(1|2,2) <= 2D2 - 1").unwrap();
        let k = t.find(&row).unwrap();
        assert!(!t.classes[k].trivial);
    }

    #[test]
    fn generators_preserve_vertices() {
        let s = ScenarioSpec::two_sender(3, 2, 2, Kind::AntiDistinguishability);
        let ext = extended_vertices(&s, Caps::default()).unwrap();
        let poly = ext.polytope(&s);
        for g in symmetry_generators(&s) {
            assert!(g.preserves(&poly));
        }
        // Unequal senders are never exchanged.
        assert_eq!(symmetry_generators(&s).len(), 3 + 1 + 1);
    }

    #[test]
    fn display_reads_like_a_table_row() {
        let s = ScenarioSpec::two_sender(2, 2, 2, Kind::Distinguishability);
        let row = parse_inequality(&s, "p(2|2,1) - p(2|2,2) <= 2D2 - 1").unwrap();
        let a: Vec<BigRational> = row.fom.coeffs.iter().cloned().chain(row.resource_coeffs.iter().map(|r| -r)).collect();
        let f = ResourceFacet::from_canonical(&s, &CanonicalFacet::from_rational(&a, &row.constant));
        assert_eq!(f.display(&s), "p(2|2,1) - p(2|2,2) <= 2D2 - 1");
    }
}
