use super::mat::{
    c, eigh, hermiticity_error, ket_to_density, psd_part, spectral_map, trace_re, CMat, CVec,
};
use super::ConicError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("vector is not normalised (norm {0})")]
    NonUnit(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("target value {target} is not reached at full resources (best {best})")]
    Unachievable { target: f64, best: f64 },
    #[error(transparent)]
    Conic(#[from] ConicError),
}

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-9;
pub const POVM_SUM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMat);

impl DensityMatrix {
    pub fn new(m: CMat) -> Result<Self, QuantumError> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(QuantumError::InvalidState("not a square matrix".into()));
        }
        let h = hermiticity_error(&m);
        if h > HERMITIAN_TOL {
            return Err(QuantumError::InvalidState(format!("not Hermitian (error {h:.2e})")));
        }
        let lam = eigh(&m).0[0];
        if lam < -PSD_TOL {
            return Err(QuantumError::InvalidState(format!("negative eigenvalue {lam:.2e}")));
        }
        let t = trace_re(&m);
        if (t - 1.0).abs() > TRACE_TOL {
            return Err(QuantumError::InvalidState(format!("trace {t}")));
        }
        Ok(Self(m))
    }

    pub fn pure(v: &CVec) -> Result<Self, QuantumError> {
        let n = v.norm();
        if (n - 1.0).abs() > 1e-9 {
            return Err(QuantumError::NonUnit(n));
        }
        Self::new(ket_to_density(v))
    }

    /// Nearest density matrix to a numerically approximate one.
    pub fn repair(m: &CMat) -> Self {
        let p = psd_part(m);
        let t = trace_re(&p);
        Self(p / c(t, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm(Vec<CMat>);

impl Povm {
    pub fn new(elements: Vec<CMat>) -> Result<Self, QuantumError> {
        let Some(first) = elements.first() else {
            return Err(QuantumError::InvalidPovm("no elements".into()));
        };
        let d = first.nrows();
        let mut sum = CMat::zeros(d, d);
        for (k, e) in elements.iter().enumerate() {
            if e.nrows() != d || e.ncols() != d {
                return Err(QuantumError::InvalidPovm(format!("element {} has the wrong shape", k + 1)));
            }
            if hermiticity_error(e) > PSD_TOL {
                return Err(QuantumError::InvalidPovm(format!("element {} is not Hermitian", k + 1)));
            }
            let lam = eigh(e).0[0];
            if lam < -PSD_TOL {
                return Err(QuantumError::InvalidPovm(format!("element {} has eigenvalue {lam:.2e}", k + 1)));
            }
            sum += e;
        }
        let err = (sum - CMat::identity(d, d)).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if err > POVM_SUM_TOL {
            return Err(QuantumError::InvalidPovm(format!("elements sum to identity only within {err:.2e}")));
        }
        Ok(Self(elements))
    }

    /// Projects numerically approximate elements onto a valid POVM.
    pub fn repair(elements: &[CMat]) -> Self {
        let d = elements[0].nrows();
        let parts: Vec<CMat> = elements.iter().map(psd_part).collect();
        let sum = parts.iter().fold(CMat::zeros(d, d), |a, b| a + b);
        let (vals, _) = eigh(&sum);
        if vals[0] < 1e-12 {
            // Fill the missing weight into the last element.
            let mut out = parts;
            let fill = psd_part(&(CMat::identity(d, d) - &sum));
            *out.last_mut().unwrap() += fill;
            let sum = out.iter().fold(CMat::zeros(d, d), |a, b| a + b);
            let w = spectral_map(&sum, |v| 1.0 / v.max(1e-300).sqrt());
            return Self(out.iter().map(|e| &w * e * &w).collect());
        }
        let w = spectral_map(&sum, |v| 1.0 / v.sqrt());
        Self(parts.iter().map(|e| &w * e * &w).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0[0].nrows()
    }

    pub fn elements(&self) -> &[CMat] {
        &self.0
    }
}

type RawMatrix = Vec<Vec<[f64; 2]>>;

pub(crate) fn to_raw(m: &CMat) -> RawMatrix {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|k| [m[(r, k)].re, m[(r, k)].im]).collect()).collect()
}

pub(crate) fn from_raw(raw: &RawMatrix) -> Result<CMat, String> {
    let n = raw.len();
    if raw.iter().any(|row| row.len() != n) {
        return Err("matrix must be square".into());
    }
    Ok(CMat::from_fn(n, n, |r, k| c(raw[r][k][0], raw[r][k][1])))
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_raw(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawMatrix::deserialize(d)?;
        let m = from_raw(&raw).map_err(serde::de::Error::custom)?;
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Povm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.iter().map(to_raw).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<RawMatrix>::deserialize(d)?;
        let els = raw.iter().map(from_raw).collect::<Result<Vec<_>, _>>().map_err(serde::de::Error::custom)?;
        Povm::new(els).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(v: &[f64]) -> CVec {
        CVec::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0)))
    }

    #[test]
    fn validation() {
        assert!(DensityMatrix::pure(&ket(&[1.0, 0.0])).is_ok());
        assert!(matches!(DensityMatrix::pure(&ket(&[1.0, 1.0])), Err(QuantumError::NonUnit(_))));
        let mut m = CMat::identity(2, 2);
        m[(0, 0)] = c(1.5, 0.0);
        m[(1, 1)] = c(-0.5, 0.0);
        assert!(DensityMatrix::new(m).is_err());
        let half = CMat::identity(2, 2) * c(0.5, 0.0);
        assert!(Povm::new(vec![half.clone(), half.clone()]).is_ok());
        assert!(Povm::new(vec![half.clone()]).is_err());
    }

    #[test]
    fn repair_produces_valid_povm() {
        let mut a = CMat::identity(2, 2) * c(0.6, 0.0);
        a[(0, 1)] = c(0.01, 0.0);
        a[(1, 0)] = c(0.01, 0.0);
        let b = CMat::identity(2, 2) * c(0.39, 0.0);
        let p = Povm::repair(&[a, b]);
        assert!(Povm::new(p.elements().to_vec()).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let r = DensityMatrix::pure(&ket(&[0.6, 0.8])).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: DensityMatrix = serde_json::from_str(&s).unwrap();
        assert!((back.matrix() - r.matrix()).norm() < 1e-15);
        assert!(serde_json::from_str::<DensityMatrix>("[[[2,0]]]").is_err());
    }
}
