//! Multi-sender, single-receiver scenarios with bounded distinguishability or
//! anti-distinguishability, and their classical polytopes.

mod encoding;
mod extended;
mod facets;
mod fom;
mod value;

pub use encoding::{build_encoding_polytope, DEFAULT_SELECTOR_CAP, encoding_vertices, tight_resource, EncodingVertex};
pub use extended::{enumerate_decoders, extended_vertices, Caps, Decoder, ExtendedVertex, ExtendedVertices};
pub use facets::{facet_table, symmetry_generators, FacetClass, FacetTable, ResourceFacet};
pub use fom::{parse_inequality, FigureOfMerit, ParsedInequality};
pub use value::{classical_total, classical_value, operational_relaxation, ClassicalModel, TotalResource};

use crate::geometry::GeometryError;
use crate::rational::{format_rational, int, ratio, serde_rational::value_to_rational};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    InvalidSpec(String),
    #[error("{what} count {count} exceeds cap {cap}")]
    SizeOverflow { what: &'static str, count: u128, cap: u128 },
    #[error("resources below their lower bounds or above 1")]
    InfeasibleResources,
    #[error("target value {0} is not reachable with maximal resources")]
    Unachievable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "D")]
    Distinguishability,
    #[serde(rename = "A")]
    AntiDistinguishability,
}

impl Kind {
    pub fn symbol(self) -> char {
        match self {
            Kind::Distinguishability => 'D',
            Kind::AntiDistinguishability => 'A',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenderSpec {
    pub n_x: usize,
    pub prior: Vec<BigRational>,
    pub n_m: usize,
}

impl SenderSpec {
    /// Uniform prior and `2^(n_x - 1)` messages.
    pub fn uniform(n_x: usize) -> Self {
        Self { n_x, prior: vec![ratio(1, n_x as i64); n_x], n_m: default_messages(n_x) }
    }

    pub fn has_uniform_prior(&self) -> bool {
        self.prior.iter().all(|q| q == &self.prior[0])
    }
}

pub fn default_messages(n_x: usize) -> usize {
    1usize << n_x.saturating_sub(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub senders: Vec<SenderSpec>,
    pub n_y: usize,
    pub n_z: usize,
    pub kind: Kind,
}

impl ScenarioSpec {
    pub fn new(senders: Vec<SenderSpec>, n_y: usize, n_z: usize, kind: Kind) -> Result<Self, ScenarioError> {
        let s = Self { senders, n_y, n_z, kind };
        s.validate()?;
        Ok(s)
    }

    /// Two senders, no receiver input, uniform priors: the `(n_x1, n_x2, n_z)` scenario.
    pub fn two_sender(n_x1: usize, n_x2: usize, n_z: usize, kind: Kind) -> Self {
        Self::new(vec![SenderSpec::uniform(n_x1), SenderSpec::uniform(n_x2)], 1, n_z, kind)
            .expect("sizes are positive")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::InvalidSpec(m));
        if self.senders.is_empty() {
            return bad("at least one sender is required".into());
        }
        if self.n_y == 0 || self.n_z == 0 {
            return bad("n_y and n_z must be positive".into());
        }
        for (i, s) in self.senders.iter().enumerate() {
            if s.n_x == 0 || s.n_m == 0 {
                return bad(format!("sender {}: n_x and n_m must be positive", i + 1));
            }
            if s.prior.len() != s.n_x {
                return bad(format!("sender {}: prior has {} entries, expected {}", i + 1, s.prior.len(), s.n_x));
            }
            if s.prior.iter().any(|q| q.is_negative()) || s.prior.iter().sum::<BigRational>() != BigRational::one() {
                return bad(format!("sender {}: prior must be a probability vector", i + 1));
            }
        }
        Ok(())
    }

    pub fn n_senders(&self) -> usize {
        self.senders.len()
    }

    pub fn n_x(&self) -> Vec<usize> {
        self.senders.iter().map(|s| s.n_x).collect()
    }

    /// Number of joint inputs `x = (x_1, ..., x_N)`.
    pub fn n_joint_inputs(&self) -> usize {
        self.senders.iter().map(|s| s.n_x).product()
    }

    pub fn n_joint_messages(&self) -> usize {
        self.senders.iter().map(|s| s.n_m).product()
    }

    /// Number of behavior coordinates `p(z|x,y)`.
    pub fn behavior_dim(&self) -> usize {
        self.n_z * self.n_joint_inputs() * self.n_y
    }

    /// Behavior coordinates followed by one resource coordinate per sender.
    pub fn dim(&self) -> usize {
        self.behavior_dim() + self.n_senders()
    }

    /// Flat index of the joint input (0-based, first sender most significant).
    pub fn joint_input_index(&self, xs: &[usize]) -> usize {
        xs.iter().zip(&self.senders).fold(0, |acc, (&x, s)| acc * s.n_x + x)
    }

    pub fn joint_input(&self, mut idx: usize) -> Vec<usize> {
        let mut xs = vec![0; self.n_senders()];
        for (i, s) in self.senders.iter().enumerate().rev() {
            xs[i] = idx % s.n_x;
            idx /= s.n_x;
        }
        xs
    }

    /// Coordinate of `p(z|x,y)`, lexicographic in `(z, x, y)`; all labels 0-based.
    pub fn index(&self, z: usize, xs: &[usize], y: usize) -> usize {
        (z * self.n_joint_inputs() + self.joint_input_index(xs)) * self.n_y + y
    }

    /// Inverse of [`ScenarioSpec::index`].
    pub fn coordinate(&self, idx: usize) -> (usize, Vec<usize>, usize) {
        let y = idx % self.n_y;
        let rest = idx / self.n_y;
        let xi = rest % self.n_joint_inputs();
        (rest / self.n_joint_inputs(), self.joint_input(xi), y)
    }

    pub fn resource_index(&self, sender: usize) -> usize {
        self.behavior_dim() + sender
    }

    /// 1-based key `"z|x1,x2[,y]"`; `y` is omitted when the receiver has no input.
    pub fn key(&self, idx: usize) -> String {
        let (z, xs, y) = self.coordinate(idx);
        let mut parts: Vec<String> = xs.iter().map(|x| (x + 1).to_string()).collect();
        if self.n_y > 1 {
            parts.push((y + 1).to_string());
        }
        format!("{}|{}", z + 1, parts.join(","))
    }

    pub fn parse_key(&self, key: &str) -> Result<usize, ScenarioError> {
        let err = || ScenarioError::Parse(format!("bad coordinate key {key:?}"));
        let (z, rest) = key.split_once('|').ok_or_else(err)?;
        let z: usize = z.trim().parse().map_err(|_| err())?;
        let labels: Vec<usize> = rest
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| err()))
            .collect::<Result<_, _>>()?;
        let n = self.n_senders();
        let (xs, y) = match labels.len() {
            l if l == n => (&labels[..], 1),
            l if l == n + 1 => (&labels[..n], labels[n]),
            _ => return Err(err()),
        };
        if z == 0 || z > self.n_z || y == 0 || y > self.n_y {
            return Err(err());
        }
        for (x, s) in xs.iter().zip(&self.senders) {
            if *x == 0 || *x > s.n_x {
                return Err(err());
            }
        }
        let xs: Vec<usize> = xs.iter().map(|x| x - 1).collect();
        Ok(self.index(z - 1, &xs, y - 1))
    }

    /// Smallest admissible resource value: `max q` for D, `1 - min q` for A.
    pub fn resource_lower_bound(&self, sender: usize) -> BigRational {
        let p = &self.senders[sender].prior;
        match self.kind {
            Kind::Distinguishability => p.iter().max().cloned().unwrap(),
            Kind::AntiDistinguishability => BigRational::one() - p.iter().min().cloned().unwrap(),
        }
    }

    pub fn resource_name(&self, sender: usize) -> String {
        format!("{}{}", self.kind.symbol(), sender + 1)
    }

    /// Checks `lower bound <= r_i <= 1` for every sender.
    pub fn check_resources(&self, r: &[BigRational]) -> Result<(), ScenarioError> {
        if r.len() != self.n_senders() {
            return Err(ScenarioError::InvalidSpec(format!(
                "expected {} resource values, got {}",
                self.n_senders(),
                r.len()
            )));
        }
        for (i, v) in r.iter().enumerate() {
            if *v < self.resource_lower_bound(i) || *v > int(1) {
                return Err(ScenarioError::InfeasibleResources);
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let xs: Vec<String> = self.senders.iter().map(|s| s.n_x.to_string()).collect();
        let kind = match self.kind {
            Kind::Distinguishability => "dist",
            Kind::AntiDistinguishability => "anti",
        };
        if self.n_y > 1 {
            format!("({},{};y={}) {kind}", xs.join(","), self.n_z, self.n_y)
        } else {
            format!("({},{}) {kind}", xs.join(","), self.n_z)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SenderJson {
    n_x: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prior: Option<Vec<serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_m: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct ScenarioJson {
    senders: Vec<SenderJson>,
    #[serde(default = "one")]
    n_y: usize,
    n_z: usize,
    kind: Kind,
}

fn one() -> usize {
    1
}

impl Serialize for ScenarioSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScenarioJson {
            senders: self
                .senders
                .iter()
                .map(|x| SenderJson {
                    n_x: x.n_x,
                    prior: Some(x.prior.iter().map(|q| serde_json::Value::String(format_rational(q))).collect()),
                    n_m: Some(x.n_m),
                })
                .collect(),
            n_y: self.n_y,
            n_z: self.n_z,
            kind: self.kind,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScenarioSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ScenarioJson::deserialize(d)?;
        let mut senders = Vec::new();
        for s in raw.senders {
            let prior = match s.prior {
                Some(p) => p.iter().map(value_to_rational).collect::<Result<Vec<_>, _>>().map_err(D::Error::custom)?,
                None if s.n_x > 0 => vec![ratio(1, s.n_x as i64); s.n_x],
                None => Vec::new(),
            };
            senders.push(SenderSpec { n_x: s.n_x, prior, n_m: s.n_m.unwrap_or_else(|| default_messages(s.n_x)) });
        }
        ScenarioSpec::new(senders, raw.n_y, raw.n_z, raw.kind).map_err(D::Error::custom)
    }
}
