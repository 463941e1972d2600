use super::dd::{extreme_rays, DdFailure, Ray};
use super::linalg::{nullspace, rank, rref};
use super::GeometryError;
use crate::rational::{format_rational, primitive_integer_vector, serde_rational::value_to_rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;

/// `{x : a.x <= b for each inequality, c.x = d for each equality}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    pub dim: usize,
    pub inequalities: Vec<(Vec<BigRational>, BigRational)>,
    pub equalities: Vec<(Vec<BigRational>, BigRational)>,
}

impl HPolyhedron {
    pub fn new(dim: usize) -> Self {
        Self { dim, inequalities: Vec::new(), equalities: Vec::new() }
    }

    pub fn add_inequality(&mut self, a: Vec<BigRational>, b: BigRational) {
        debug_assert_eq!(a.len(), self.dim);
        self.inequalities.push((a, b));
    }

    pub fn add_equality(&mut self, c: Vec<BigRational>, d: BigRational) {
        debug_assert_eq!(c.len(), self.dim);
        self.equalities.push((c, d));
    }

    fn check_dims(&self) -> Result<(), GeometryError> {
        for (a, _) in self.inequalities.iter().chain(&self.equalities) {
            if a.len() != self.dim {
                return Err(GeometryError::DimensionMismatch { expected: self.dim, got: a.len() });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        let dot = |a: &[BigRational]| -> BigRational { a.iter().zip(x).map(|(p, q)| p * q).sum() };
        self.inequalities.iter().all(|(a, b)| dot(a) <= *b)
            && self.equalities.iter().all(|(c, d)| dot(c) == *d)
    }
}

/// Point list whose convex hull is the polytope. Points are kept sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<BigRational>>,
}

impl VPolytope {
    pub fn new(dim: usize, mut vertices: Vec<Vec<BigRational>>) -> Result<Self, GeometryError> {
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(GeometryError::DimensionMismatch { expected: dim, got: v.len() });
        }
        vertices.sort();
        vertices.dedup();
        Ok(Self { dim, vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Primitive integer inequality `coeffs . x <= bound` (or equality, for affine-hull rows).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalFacet {
    pub coeffs: Vec<BigInt>,
    pub bound: BigInt,
}

impl CanonicalFacet {
    /// Scales `(coeffs, bound)` by a positive factor to coprime integers.
    pub fn from_rational(coeffs: &[BigRational], bound: &BigRational) -> Self {
        let mut all: Vec<BigRational> = coeffs.to_vec();
        all.push(bound.clone());
        let mut ints = primitive_integer_vector(&all);
        let bound = ints.pop().unwrap();
        Self { coeffs: ints, bound }
    }

    pub fn from_ints(coeffs: &[i64], bound: i64) -> Self {
        let q: Vec<BigRational> = coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        Self::from_rational(&q, &BigRational::from_integer(bound.into()))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `bound - coeffs . x`; nonnegative iff `x` satisfies the inequality.
    pub fn slack(&self, x: &[BigRational]) -> BigRational {
        let lhs: BigRational = self
            .coeffs
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| v * c)
            .sum();
        BigRational::from_integer(self.bound.clone()) - lhs
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    fn sign_fixed(mut self) -> Self {
        if let Some(first) = self.coeffs.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                self.coeffs.iter_mut().for_each(|c| *c = -c.clone());
                self.bound = -self.bound;
            }
        }
        self
    }
}

impl std::fmt::Display for CanonicalFacet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{c}*x{i}"))
            .collect();
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{lhs} <= {}", self.bound)
    }
}

/// Affine hull `{x : E x = e}` kept in reduced row echelon form. Pivot
/// coordinates are the leftmost ones; inequalities are reported with zero
/// coefficients on them, which makes facet representations unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineHull {
    pub dim: usize,
    /// Primitive integer rows, first nonzero coefficient positive.
    pub equalities: Vec<CanonicalFacet>,
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl AffineHull {
    /// Builds the hull description from arbitrary (possibly redundant) equalities.
    pub fn from_equalities(dim: usize, eqs: &[(Vec<BigRational>, BigRational)]) -> Result<Self, GeometryError> {
        let rows: Vec<Vec<BigRational>> = eqs
            .iter()
            .map(|(c, d)| c.iter().cloned().chain(std::iter::once(d.clone())).collect())
            .collect();
        let (rows, pivots) = rref(rows, dim + 1);
        if pivots.last() == Some(&dim) {
            return Err(GeometryError::Infeasible);
        }
        let equalities = rows
            .iter()
            .map(|r| CanonicalFacet::from_rational(&r[..dim], &r[dim]).sign_fixed())
            .collect();
        Ok(Self { dim, equalities, rows, pivots })
    }

    pub fn whole_space(dim: usize) -> Self {
        Self { dim, equalities: Vec::new(), rows: Vec::new(), pivots: Vec::new() }
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.dim - self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn free_coords(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Canonical form of `a . x <= b` on the hull: zero on pivot coordinates, primitive.
    pub fn reduce(&self, a: &[BigRational], b: &BigRational) -> CanonicalFacet {
        let mut a = a.to_vec();
        let mut b = b.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if a[p].is_zero() {
                continue;
            }
            let f = a[p].clone();
            for (x, r) in a.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
            b -= &f * &row[self.dim];
        }
        CanonicalFacet::from_rational(&a, &b)
    }

    pub fn reduce_facet(&self, f: &CanonicalFacet) -> CanonicalFacet {
        let a: Vec<BigRational> = f.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        self.reduce(&a, &BigRational::from_integer(f.bound.clone()))
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.equalities.iter().all(|e| e.slack(x).is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetEnumeration {
    pub hull: AffineHull,
    /// Sorted lexicographically.
    pub facets: Vec<CanonicalFacet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FacetCheck {
    pub valid: bool,
    pub tight_count: usize,
    /// Linear rank of the homogenized tight vertices `(1, v)`.
    pub tight_rank: usize,
}

fn to_rows_i128(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    rows.iter().map(|r| r.iter().map(num_traits::ToPrimitive::to_i128).collect()).collect()
}

fn run_dd(rows: &[Vec<BigInt>], dim: usize) -> Result<Vec<Vec<BigInt>>, DdFailure> {
    let big = |rays: Vec<Ray<BigInt>>| rays.into_iter().map(|r| r.coords).collect::<Vec<_>>();
    if let Some(small) = to_rows_i128(rows) {
        match extreme_rays(&small, dim) {
            Ok(rays) => {
                return Ok(rays
                    .into_iter()
                    .map(|r| r.coords.iter().map(|v| BigInt::from(*v)).collect())
                    .collect())
            }
            Err(DdFailure::Overflow) => log::debug!("i128 overflow in double description, retrying with BigInt"),
            Err(e) => return Err(e),
        }
    }
    extreme_rays(rows, dim).map(big)
}

fn lex_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    a.cmp(b)
}

/// Extreme points of a bounded polyhedron, sorted lexicographically.
pub fn h_to_v(h: &HPolyhedron) -> Result<VPolytope, GeometryError> {
    h.check_dims()?;
    let n = h.dim;
    let hull = AffineHull::from_equalities(n, &h.equalities)?;
    let free = hull.free_coords();
    // x = base + sum_f y_f * dir_f on the equality solution set.
    let mut base = vec![BigRational::zero(); n];
    for (row, &p) in hull.rows.iter().zip(&hull.pivots) {
        base[p] = row[n].clone();
    }
    let dirs: Vec<Vec<BigRational>> = free
        .iter()
        .map(|&f| {
            let mut d = vec![BigRational::zero(); n];
            d[f] = BigRational::one();
            for (row, &p) in hull.rows.iter().zip(&hull.pivots) {
                d[p] = -row[f].clone();
            }
            d
        })
        .collect();
    let k = free.len();
    // Inequalities in y: a' . y <= b'.
    let reduced: Vec<(Vec<BigRational>, BigRational)> = h
        .inequalities
        .iter()
        .map(|(a, b)| {
            let ap: Vec<BigRational> = dirs
                .iter()
                .map(|d| a.iter().zip(d).filter(|(_, q)| !q.is_zero()).map(|(p, q)| p * q).sum())
                .collect();
            let shift: BigRational = a.iter().zip(&base).map(|(p, q)| p * q).sum();
            (ap, b - shift)
        })
        .collect();
    let ys = vertices_of_reduced(&reduced, k)?;
    let vertices = ys
        .into_iter()
        .map(|y| {
            let mut x = base.clone();
            for (yi, d) in y.iter().zip(&dirs) {
                if yi.is_zero() {
                    continue;
                }
                for (xj, dj) in x.iter_mut().zip(d) {
                    if !dj.is_zero() {
                        *xj += yi * dj;
                    }
                }
            }
            x
        })
        .collect();
    VPolytope::new(n, vertices)
}

/// Vertices of `{y in Q^k : a . y <= b}`.
fn vertices_of_reduced(ineqs: &[(Vec<BigRational>, BigRational)], k: usize) -> Result<Vec<Vec<BigRational>>, GeometryError> {
    if k == 0 {
        return if ineqs.iter().all(|(_, b)| !b.is_negative()) {
            Ok(vec![Vec::new()])
        } else {
            Err(GeometryError::Infeasible)
        };
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(ineqs.len() + 1);
    let mut t_row = vec![BigInt::zero(); k + 1];
    t_row[0] = BigInt::one();
    rows.push(t_row);
    for (a, b) in ineqs {
        let v: Vec<BigRational> = std::iter::once(b.clone()).chain(a.iter().map(|x| -x)).collect();
        let ints = primitive_integer_vector(&v);
        if ints.iter().all(|x| x.is_zero()) {
            continue;
        }
        rows.push(ints);
    }
    rows[1..].sort_by(|a, b| lex_cmp(a, b));
    rows.dedup();
    match run_dd(&rows, k + 1) {
        Ok(rays) => {
            let mut verts = Vec::new();
            let mut has_direction = false;
            for r in rays {
                if r[0].is_zero() {
                    has_direction = true;
                    continue;
                }
                let t = BigRational::from_integer(r[0].clone());
                verts.push(r[1..].iter().map(|v| BigRational::from_integer(v.clone()) / &t).collect());
            }
            if verts.is_empty() {
                Err(GeometryError::Infeasible)
            } else if has_direction {
                Err(GeometryError::Unbounded)
            } else {
                Ok(verts)
            }
        }
        Err(DdFailure::Lineality) => {
            // Restrict to a complement of the lineality space to decide emptiness.
            let a_rows: Vec<Vec<BigRational>> = ineqs.iter().map(|(a, _)| a.clone()).collect();
            let (_, piv) = rref(a_rows, k);
            let sub: Vec<(Vec<BigRational>, BigRational)> = ineqs
                .iter()
                .map(|(a, b)| (piv.iter().map(|&p| a[p].clone()).collect(), b.clone()))
                .collect();
            match vertices_of_reduced(&sub, piv.len()) {
                Err(GeometryError::Infeasible) => Err(GeometryError::Infeasible),
                _ => Err(GeometryError::Unbounded),
            }
        }
        Err(DdFailure::Overflow) => unreachable!("BigInt backend cannot overflow"),
    }
}

fn affine_hull_of_points(v: &VPolytope) -> AffineHull {
    let n = v.dim;
    let pts: Vec<Vec<BigRational>> = v
        .vertices
        .iter()
        .map(|p| std::iter::once(BigRational::one()).chain(p.iter().cloned()).collect())
        .collect();
    let ns = nullspace(pts, n + 1);
    let eqs: Vec<(Vec<BigRational>, BigRational)> = ns
        .into_iter()
        .map(|w| (w[1..].to_vec(), -w[0].clone()))
        .collect();
    AffineHull::from_equalities(n, &eqs).expect("points satisfy their own hull equations")
}

/// Affine hull equalities and canonical facets of `conv(v)`.
pub fn v_to_facets(v: &VPolytope) -> Result<FacetEnumeration, GeometryError> {
    if v.is_empty() {
        return Err(GeometryError::Invalid("empty vertex set".into()));
    }
    let hull = affine_hull_of_points(v);
    let free = hull.free_coords();
    let k = free.len();
    if k == 0 {
        return Ok(FacetEnumeration { hull, facets: Vec::new() });
    }
    // Valid inequalities a.y <= b correspond to (b, a) with (1, -u).(b, a) >= 0.
    let mut rows: Vec<Vec<BigInt>> = v
        .vertices
        .iter()
        .map(|p| {
            let q: Vec<BigRational> = std::iter::once(BigRational::one())
                .chain(free.iter().map(|&f| -p[f].clone()))
                .collect();
            primitive_integer_vector(&q)
        })
        .collect();
    rows.sort_by(|a, b| lex_cmp(a, b));
    rows.dedup();
    let rays = run_dd(&rows, k + 1).map_err(|e| match e {
        DdFailure::Lineality => GeometryError::Invalid("degenerate vertex set".into()),
        DdFailure::Overflow => unreachable!(),
    })?;
    let mut facets: Vec<CanonicalFacet> = rays
        .into_iter()
        .map(|r| {
            let mut coeffs = vec![BigInt::zero(); v.dim];
            for (j, &f) in free.iter().enumerate() {
                coeffs[f] = r[j + 1].clone();
            }
            let g = coeffs.iter().fold(r[0].clone(), |g, c| g.gcd(c));
            if !g.is_one() && !g.is_zero() {
                coeffs.iter_mut().for_each(|c| *c = &*c / &g);
                CanonicalFacet { coeffs, bound: &r[0] / &g }
            } else {
                CanonicalFacet { coeffs, bound: r[0].clone() }
            }
        })
        .collect();
    facets.sort();
    facets.dedup();
    Ok(FacetEnumeration { hull, facets })
}

pub fn validate_facet(v: &VPolytope, f: &CanonicalFacet) -> Result<FacetCheck, GeometryError> {
    if f.dim() != v.dim {
        return Err(GeometryError::DimensionMismatch { expected: v.dim, got: f.dim() });
    }
    let mut valid = true;
    let mut tight = Vec::new();
    for p in &v.vertices {
        let s = f.slack(p);
        if s.is_negative() {
            valid = false;
        } else if s.is_zero() {
            tight.push(std::iter::once(BigRational::one()).chain(p.iter().cloned()).collect::<Vec<_>>());
        }
    }
    let tight_count = tight.len();
    let tight_rank = rank(tight, v.dim + 1);
    Ok(FacetCheck { valid, tight_count, tight_rank })
}

impl VPolytope {
    /// Dimension of the affine hull of the points.
    pub fn affine_dim(&self) -> usize {
        affine_hull_of_points(self).affine_dim()
    }
}

// --- JSON interchange: all numbers as exact "p/q" strings ---

#[derive(Serialize, Deserialize)]
struct HJson {
    dim: usize,
    #[serde(default)]
    inequalities: Vec<Vec<serde_json::Value>>,
    #[serde(default)]
    equalities: Vec<Vec<serde_json::Value>>,
}

fn split_rows(dim: usize, rows: &[Vec<serde_json::Value>]) -> Result<Vec<(Vec<BigRational>, BigRational)>, String> {
    rows.iter()
        .map(|r| {
            if r.len() != dim + 1 {
                return Err(format!("row has {} entries, expected {}", r.len(), dim + 1));
            }
            let mut q = r.iter().map(value_to_rational).collect::<Result<Vec<_>, _>>()?;
            let b = q.pop().unwrap();
            Ok((q, b))
        })
        .collect()
}

fn join_rows(rows: &[(Vec<BigRational>, BigRational)]) -> Vec<Vec<serde_json::Value>> {
    rows.iter()
        .map(|(a, b)| {
            a.iter()
                .chain(std::iter::once(b))
                .map(|x| serde_json::Value::String(format_rational(x)))
                .collect()
        })
        .collect()
}

impl Serialize for HPolyhedron {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HJson { dim: self.dim, inequalities: join_rows(&self.inequalities), equalities: join_rows(&self.equalities) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HPolyhedron {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = HJson::deserialize(d)?;
        Ok(HPolyhedron {
            dim: raw.dim,
            inequalities: split_rows(raw.dim, &raw.inequalities).map_err(D::Error::custom)?,
            equalities: split_rows(raw.dim, &raw.equalities).map_err(D::Error::custom)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct VJson {
    #[serde(default)]
    dim: Option<usize>,
    vertices: Vec<Vec<serde_json::Value>>,
}

impl Serialize for VPolytope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        VJson {
            dim: Some(self.dim),
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| serde_json::Value::String(format_rational(x))).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VPolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = VJson::deserialize(d)?;
        let vertices = raw
            .vertices
            .iter()
            .map(|v| v.iter().map(value_to_rational).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let dim = raw.dim.or_else(|| vertices.first().map(|v| v.len())).unwrap_or(0);
        VPolytope::new(dim, vertices).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn unit_square() -> HPolyhedron {
        let mut h = HPolyhedron::new(2);
        h.add_inequality(q(&[-1, 0]), int(0));
        h.add_inequality(q(&[1, 0]), int(1));
        h.add_inequality(q(&[0, -1]), int(0));
        h.add_inequality(q(&[0, 1]), int(1));
        h
    }

    #[test]
    fn square_vertices() {
        let v = h_to_v(&unit_square()).unwrap();
        assert_eq!(v.vertices, vec![q(&[0, 0]), q(&[0, 1]), q(&[1, 0]), q(&[1, 1])]);
    }

    #[test]
    fn simplex_with_equality() {
        let mut h = HPolyhedron::new(3);
        for i in 0..3 {
            let mut a = q(&[0, 0, 0]);
            a[i] = int(-1);
            h.add_inequality(a, int(0));
        }
        h.add_equality(q(&[1, 1, 1]), int(1));
        let v = h_to_v(&h).unwrap();
        assert_eq!(v.vertices, vec![q(&[0, 0, 1]), q(&[0, 1, 0]), q(&[1, 0, 0])]);
    }

    #[test]
    fn square_facets() {
        let v = h_to_v(&unit_square()).unwrap();
        let f = v_to_facets(&v).unwrap();
        assert!(f.hull.equalities.is_empty());
        let expect = vec![
            CanonicalFacet::from_ints(&[-1, 0], 0),
            CanonicalFacet::from_ints(&[0, -1], 0),
            CanonicalFacet::from_ints(&[0, 1], 1),
            CanonicalFacet::from_ints(&[1, 0], 1),
        ];
        assert_eq!(f.facets, expect);
    }

    #[test]
    fn unbounded_and_infeasible() {
        let mut h = HPolyhedron::new(2);
        h.add_inequality(q(&[-1, 0]), int(0));
        h.add_inequality(q(&[0, -1]), int(0));
        assert_eq!(h_to_v(&h), Err(GeometryError::Unbounded));

        let mut e = HPolyhedron::new(1);
        e.add_inequality(q(&[1]), int(0));
        e.add_inequality(q(&[-1]), int(-1));
        assert_eq!(h_to_v(&e), Err(GeometryError::Infeasible));

        // A strip has a lineality space.
        let mut s = HPolyhedron::new(2);
        s.add_inequality(q(&[1, 0]), int(1));
        s.add_inequality(q(&[-1, 0]), int(0));
        assert_eq!(h_to_v(&s), Err(GeometryError::Unbounded));
        s.add_inequality(q(&[1, 0]), int(-1));
        assert_eq!(h_to_v(&s), Err(GeometryError::Infeasible));

        let mut bad = HPolyhedron::new(2);
        bad.add_equality(q(&[1, 1]), int(1));
        bad.add_equality(q(&[2, 2]), int(3));
        assert_eq!(h_to_v(&bad), Err(GeometryError::Infeasible));
    }

    #[test]
    fn zero_dimensional_point() {
        let mut h = HPolyhedron::new(2);
        h.add_equality(q(&[1, 0]), ratio(1, 2));
        h.add_equality(q(&[0, 1]), int(3));
        h.add_inequality(q(&[1, 1]), int(4));
        let v = h_to_v(&h).unwrap();
        assert_eq!(v.vertices, vec![vec![ratio(1, 2), int(3)]]);
        let f = v_to_facets(&v).unwrap();
        assert!(f.facets.is_empty());
        assert_eq!(f.hull.equalities.len(), 2);
    }

    #[test]
    fn validate_square_faces() {
        let v = h_to_v(&unit_square()).unwrap();
        let facet = validate_facet(&v, &CanonicalFacet::from_ints(&[1, 0], 1)).unwrap();
        assert_eq!(facet, FacetCheck { valid: true, tight_count: 2, tight_rank: 2 });
        let edge = validate_facet(&v, &CanonicalFacet::from_ints(&[1, 1], 2)).unwrap();
        assert_eq!(edge, FacetCheck { valid: true, tight_count: 1, tight_rank: 1 });
        let bad = validate_facet(&v, &CanonicalFacet::from_ints(&[1, 1], 1)).unwrap();
        assert!(!bad.valid);
        assert!(validate_facet(&v, &CanonicalFacet::from_ints(&[1], 1)).is_err());
    }

    #[test]
    fn facets_reduced_modulo_hull() {
        // Segment from (0,1) to (1,0) in the plane x + y = 1.
        let v = VPolytope::new(2, vec![q(&[0, 1]), q(&[1, 0])]).unwrap();
        let f = v_to_facets(&v).unwrap();
        assert_eq!(f.hull.equalities, vec![CanonicalFacet::from_ints(&[1, 1], 1)]);
        // Pivot is x, so facets only involve y.
        assert_eq!(
            f.facets,
            vec![CanonicalFacet::from_ints(&[0, -1], 0), CanonicalFacet::from_ints(&[0, 1], 1)]
        );
        // x <= 1 is the same facet as -y <= 0 on the hull.
        assert_eq!(f.hull.reduce(&q(&[1, 0]), &int(1)), CanonicalFacet::from_ints(&[0, -1], 0));
    }

    #[test]
    fn json_round_trip() {
        let h = unit_square();
        let s = serde_json::to_string(&h).unwrap();
        assert!(s.contains("\"-1\""));
        let back: HPolyhedron = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        let v: VPolytope = serde_json::from_str(r#"{"vertices": [["1/2","0"],["0","1/3"]]}"#).unwrap();
        assert_eq!(v.dim, 2);
        assert_eq!(v.vertices[0], vec![int(0), ratio(1, 3)]);
    }
}
