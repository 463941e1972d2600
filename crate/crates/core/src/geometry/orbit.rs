use super::polytope::{AffineHull, CanonicalFacet, VPolytope};
use super::GeometryError;
use num_rational::BigRational;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

/// Coordinate relabeling: coordinate `j` of the input becomes coordinate `perm[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordinatePermutation {
    pub perm: Vec<usize>,
}

impl CoordinatePermutation {
    pub fn new(perm: Vec<usize>) -> Result<Self, GeometryError> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(GeometryError::Invalid(format!("not a permutation: {perm:?}")));
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(dim: usize) -> Self {
        Self { perm: (0..dim).collect() }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn apply<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let mut out = x.to_vec();
        for (j, v) in x.iter().enumerate() {
            out[self.perm[j]] = v.clone();
        }
        out
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { perm: other.perm.iter().map(|&j| self.perm[j]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Checks that the relabeling maps the point set onto itself.
    pub fn preserves(&self, v: &VPolytope) -> bool {
        if self.dim() != v.dim {
            return false;
        }
        let set: HashSet<&Vec<BigRational>> = v.vertices.iter().collect();
        v.vertices.iter().all(|p| set.contains(&self.apply(p)))
    }

    /// Image of `f` reduced modulo `hull`.
    pub fn apply_facet(&self, hull: &AffineHull, f: &CanonicalFacet) -> CanonicalFacet {
        let moved = CanonicalFacet { coeffs: self.apply(&f.coeffs), bound: f.bound.clone() };
        hull.reduce_facet(&moved)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Lexicographically least member.
    pub representative: CanonicalFacet,
    pub members: Vec<CanonicalFacet>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partitions `facets` into orbits under the group generated by `generators`.
/// Facets must be canonical with respect to `hull`. Orbits are returned in order
/// of their representatives.
pub fn orbit_classify(
    hull: &AffineHull,
    facets: &[CanonicalFacet],
    generators: &[CoordinatePermutation],
) -> Result<Vec<Orbit>, GeometryError> {
    for (i, g) in generators.iter().enumerate() {
        if g.dim() != hull.dim {
            return Err(GeometryError::DimensionMismatch { expected: hull.dim, got: g.dim() });
        }
        // Equalities must map into the hull.
        if hull.equalities.iter().any(|e| !g.apply_facet(hull, e).coeffs.iter().all(|c| c == &0.into()) || g.apply_facet(hull, e).bound != 0.into()) {
            return Err(GeometryError::InvalidSymmetry(i));
        }
    }
    let index: BTreeMap<&CanonicalFacet, usize> = facets.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut assigned = vec![false; facets.len()];
    let mut orbits = Vec::new();
    for start in 0..facets.len() {
        if assigned[start] {
            continue;
        }
        let mut members = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        assigned[start] = true;
        members.insert(start);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in generators.iter().enumerate() {
                let img = g.apply_facet(hull, &facets[i]);
                let j = *index.get(&img).ok_or(GeometryError::InvalidSymmetry(gi))?;
                if !assigned[j] {
                    assigned[j] = true;
                    members.insert(j);
                    queue.push_back(j);
                }
            }
        }
        let members: Vec<CanonicalFacet> = members.into_iter().map(|i| facets[i].clone()).collect();
        let mut sorted = members.clone();
        sorted.sort();
        orbits.push(Orbit { representative: sorted[0].clone(), members: sorted });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

/// Order of the generated group, by closure. Returns `None` past `cap` elements.
pub fn group_order(generators: &[CoordinatePermutation], cap: usize) -> Option<usize> {
    let dim = generators.first().map_or(0, |g| g.dim());
    let id = CoordinatePermutation::identity(dim);
    let mut seen: HashSet<CoordinatePermutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(q);
            }
        }
    }
    Some(seen.len())
}
