use super::{ScenarioError, ScenarioSpec};
use crate::rational::{format_rational, parse_rational, to_f64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Linear functional `sum c(z|x,y) p(z|x,y)` on behaviors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureOfMerit {
    pub coeffs: Vec<BigRational>,
}

/// `fom <= sum_i resource_coeffs[i] * R_i + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInequality {
    pub fom: FigureOfMerit,
    pub resource_coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl ParsedInequality {
    pub fn bound(&self, resources: &[BigRational]) -> BigRational {
        self.resource_coeffs.iter().zip(resources).map(|(a, b)| a * b).sum::<BigRational>() + &self.constant
    }

    pub fn bound_f64(&self, resources: &[f64]) -> f64 {
        self.resource_coeffs.iter().zip(resources).map(|(a, b)| to_f64(a) * b).sum::<f64>() + to_f64(&self.constant)
    }
}

impl FigureOfMerit {
    pub fn zero(spec: &ScenarioSpec) -> Self {
        Self { coeffs: vec![BigRational::zero(); spec.behavior_dim()] }
    }

    pub fn parse(spec: &ScenarioSpec, s: &str) -> Result<Self, ScenarioError> {
        if s.contains("<=") {
            return Err(ScenarioError::Parse("expected an expression, found an inequality".into()));
        }
        let (fom, res, c) = parse_linear(spec, s)?;
        if res.iter().any(|r| !r.is_zero()) || !c.is_zero() {
            return Err(ScenarioError::Parse("figure of merit may only contain p(...) terms".into()));
        }
        Ok(fom)
    }

    /// From a `{"z|x1,x2": coeff}` map.
    pub fn from_map(spec: &ScenarioSpec, map: &BTreeMap<String, BigRational>) -> Result<Self, ScenarioError> {
        let mut f = Self::zero(spec);
        for (k, v) in map {
            f.coeffs[spec.parse_key(k)?] += v;
        }
        Ok(f)
    }

    pub fn to_map(&self, spec: &ScenarioSpec) -> BTreeMap<String, String> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (spec.key(i), format_rational(c)))
            .collect()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn evaluate(&self, p: &[BigRational]) -> BigRational {
        self.coeffs.iter().zip(p).filter(|(c, _)| !c.is_zero()).map(|(c, v)| c * v).sum()
    }

    pub fn evaluate_f64(&self, p: &[f64]) -> f64 {
        self.coeffs.iter().zip(p).filter(|(c, _)| !c.is_zero()).map(|(c, v)| to_f64(c) * v).sum()
    }

    pub fn display(&self, spec: &ScenarioSpec) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let term = format!("p({})", spec.key(i));
            push_term(&mut out, c, &term);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

pub(crate) fn push_term(out: &mut String, c: &BigRational, term: &str) {
    let mag = c.abs();
    let coef = if mag.is_one() && !term.is_empty() { String::new() } else { format_rational(&mag) };
    if out.is_empty() {
        if c.is_negative() {
            out.push('-');
        }
    } else {
        out.push_str(if c.is_negative() { " - " } else { " + " });
    }
    out.push_str(&coef);
    out.push_str(term);
}

/// Parses `lhs <= rhs` with `p(z|x1,...)` terms, resource symbols `D1`, `A2`
/// (or `R1`) and constants anywhere.
pub fn parse_inequality(spec: &ScenarioSpec, s: &str) -> Result<ParsedInequality, ScenarioError> {
    let (lhs, rhs) = s
        .split_once("<=")
        .ok_or_else(|| ScenarioError::Parse("expected an inequality with <=".into()))?;
    let (fl, rl, cl) = parse_linear(spec, lhs)?;
    let (fr, rr, cr) = parse_linear(spec, rhs)?;
    let fom = FigureOfMerit { coeffs: fl.coeffs.iter().zip(&fr.coeffs).map(|(a, b)| a - b).collect() };
    let resource_coeffs = rr.iter().zip(&rl).map(|(a, b)| a - b).collect();
    Ok(ParsedInequality { fom, resource_coeffs, constant: cr - cl })
}

type Linear = (FigureOfMerit, Vec<BigRational>, BigRational);

fn parse_linear(spec: &ScenarioSpec, s: &str) -> Result<Linear, ScenarioError> {
    let err = |m: &str| ScenarioError::Parse(format!("{m} in {s:?}"));
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut fom = FigureOfMerit::zero(spec);
    let mut res = vec![BigRational::zero(); spec.n_senders()];
    let mut constant = BigRational::zero();
    let mut i = 0;
    if chars.is_empty() {
        return Err(err("empty expression"));
    }
    while i < chars.len() {
        let mut sign = BigRational::one();
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == '/') {
            i += 1;
        }
        let num: String = chars[start..i].iter().collect();
        let coef = if num.is_empty() { None } else { Some(parse_rational(&num).map_err(|_| err("bad number"))?) };
        if i < chars.len() && chars[i] == '*' {
            i += 1;
        }
        let c = sign * coef.clone().unwrap_or_else(BigRational::one);
        match chars.get(i) {
            Some('p') => {
                if chars.get(i + 1) != Some(&'(') {
                    return Err(err("expected p("));
                }
                let close = chars[i..].iter().position(|&c| c == ')').ok_or_else(|| err("unclosed p("))? + i;
                let key: String = chars[i + 2..close].iter().collect();
                fom.coeffs[spec.parse_key(&key)?] += c;
                i = close + 1;
            }
            Some(&ch) if ch == 'D' || ch == 'A' || ch == 'R' => {
                i += 1;
                let st = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let k: usize = chars[st..i].iter().collect::<String>().parse().map_err(|_| err("bad resource index"))?;
                if k == 0 || k > spec.n_senders() {
                    return Err(err("resource index out of range"));
                }
                res[k - 1] += c;
            }
            None | Some('+') | Some('-') if coef.is_some() => constant += c,
            _ => return Err(err("unexpected token")),
        }
    }
    Ok((fom, res, constant))
}
