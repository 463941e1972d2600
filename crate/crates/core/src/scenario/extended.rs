use super::encoding::{encoding_vertices, EncodingVertex, DEFAULT_SELECTOR_CAP};
use super::{ScenarioError, ScenarioSpec};
use crate::geometry::VPolytope;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub selectors: u128,
    pub decoders: u128,
    /// Encoding-tuple x decoder combinations before deduplication.
    pub vertices: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self { selectors: DEFAULT_SELECTOR_CAP, decoders: 1_000_000, vertices: 5_000_000 }
    }
}

/// Deterministic decoder `g(m, y) = z`, with `table[m * n_y + y] = z` and `m`
/// the joint message index (first sender most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decoder {
    pub table: Vec<usize>,
}

fn decoder_count(spec: &ScenarioSpec, cap: u128) -> Result<(usize, u128), ScenarioError> {
    let slots = spec.n_joint_messages() * spec.n_y;
    let count = (spec.n_z as u128).checked_pow(slots as u32).unwrap_or(u128::MAX);
    if count > cap {
        return Err(ScenarioError::SizeOverflow { what: "decoder", count, cap });
    }
    Ok((slots, count))
}

/// Advances a base-`base` odometer, last digit fastest. Returns false after wrapping.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// All deterministic decoders, in lexicographic order of their tables.
pub fn enumerate_decoders(spec: &ScenarioSpec, cap: u128) -> Result<Vec<Decoder>, ScenarioError> {
    let (slots, count) = decoder_count(spec, cap)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut table = vec![0; slots];
    loop {
        out.push(Decoder { table: table.clone() });
        if !advance(&mut table, spec.n_z) {
            return Ok(out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedVertex {
    pub behavior: Vec<BigRational>,
    /// Resource coordinate of each sender's encoding vertex.
    pub resources: Vec<BigRational>,
    /// Index of each sender's encoding vertex.
    pub encodings: Vec<usize>,
    /// Position of the decoder in [`enumerate_decoders`] order.
    pub decoder: u64,
}

impl ExtendedVertex {
    pub fn point(&self) -> Vec<BigRational> {
        self.behavior.iter().chain(&self.resources).cloned().collect()
    }
}

#[derive(Debug, Clone)]
pub struct ExtendedVertices {
    pub encodings: Vec<Vec<EncodingVertex>>,
    /// Distinct `(behavior, resources)` pairs, sorted.
    pub vertices: Vec<ExtendedVertex>,
}

impl ExtendedVertices {
    pub fn polytope(&self, spec: &ScenarioSpec) -> VPolytope {
        VPolytope::new(spec.dim(), self.vertices.iter().map(ExtendedVertex::point).collect())
            .expect("points have scenario dimension")
    }

    /// Behavior recomputed from the stored encodings and decoder.
    pub fn reproduce(&self, spec: &ScenarioSpec, v: &ExtendedVertex) -> Vec<BigRational> {
        let (slots, _) = decoder_count(spec, u128::MAX).unwrap();
        let mut table = vec![0usize; slots];
        let mut k = v.decoder;
        for t in table.iter_mut().rev() {
            *t = (k % spec.n_z as u64) as usize;
            k /= spec.n_z as u64;
        }
        let mut p = vec![BigRational::zero(); spec.behavior_dim()];
        let n_m: Vec<usize> = spec.senders.iter().map(|s| s.n_m).collect();
        for xi in 0..spec.n_joint_inputs() {
            let xs = spec.joint_input(xi);
            for mi in 0..spec.n_joint_messages() {
                let mut ms = vec![0; n_m.len()];
                let mut r = mi;
                for i in (0..n_m.len()).rev() {
                    ms[i] = r % n_m[i];
                    r /= n_m[i];
                }
                let mut w = BigRational::from_integer(1.into());
                for (i, (&x, &m)) in xs.iter().zip(&ms).enumerate() {
                    w *= &self.encodings[i][v.encodings[i]].probs[x * n_m[i] + m];
                }
                for y in 0..spec.n_y {
                    p[spec.index(table[mi * spec.n_y + y], &xs, y)] += &w;
                }
            }
        }
        p
    }
}

/// Products of encoding vertices with deterministic decoders, deduplicated.
pub fn extended_vertices(spec: &ScenarioSpec, caps: Caps) -> Result<ExtendedVertices, ScenarioError> {
    let n = spec.n_senders();
    let encodings: Vec<Vec<EncodingVertex>> =
        (0..n).map(|i| encoding_vertices(spec, i, caps.selectors)).collect::<Result<_, _>>()?;
    let (slots, n_dec) = decoder_count(spec, caps.decoders)?;
    let combos = encodings.iter().fold(n_dec, |acc, e| acc.saturating_mul(e.len() as u128));
    if combos > caps.vertices {
        return Err(ScenarioError::SizeOverflow { what: "extended vertex", count: combos, cap: caps.vertices });
    }

    // Integer numerators over a per-sender common denominator.
    let dens: Vec<BigInt> = encodings
        .iter()
        .map(|e| e.iter().flat_map(|v| v.probs.iter()).fold(BigInt::from(1), |l, p| l.lcm(p.denom())))
        .collect();
    let nums: Vec<Vec<Vec<i128>>> = encodings
        .iter()
        .zip(&dens)
        .map(|(e, l)| {
            e.iter()
                .map(|v| v.probs.iter().map(|p| (p.numer() * (l / p.denom())).to_i128().expect("small numerators")).collect())
                .collect()
        })
        .collect();
    let total_den: BigInt = dens.iter().product();

    let n_m: Vec<usize> = spec.senders.iter().map(|s| s.n_m).collect();
    let joint_x = spec.n_joint_inputs();
    let joint_m = spec.n_joint_messages();
    let inputs: Vec<Vec<usize>> = (0..joint_x).map(|i| spec.joint_input(i)).collect();
    let messages: Vec<Vec<usize>> = (0..joint_m)
        .map(|mut r| {
            let mut ms = vec![0; n];
            for i in (0..n).rev() {
                ms[i] = r % n_m[i];
                r /= n_m[i];
            }
            ms
        })
        .collect();

    let mut seen: HashMap<(Vec<i128>, Vec<usize>), (Vec<usize>, u64)> = HashMap::new();
    let mut enc = vec![0usize; n];
    let mut joint = vec![0i128; joint_x * joint_m];
    let mut table = vec![0usize; slots];
    let mut behavior = vec![0i128; spec.behavior_dim()];
    loop {
        for (xi, xs) in inputs.iter().enumerate() {
            for (mi, ms) in messages.iter().enumerate() {
                let mut w: i128 = 1;
                for i in 0..n {
                    w = w.checked_mul(nums[i][enc[i]][xs[i] * n_m[i] + ms[i]]).expect("joint weight overflow");
                }
                joint[xi * joint_m + mi] = w;
            }
        }
        // Key resources by value, not by encoding vertex.
        let res_key: Vec<usize> = (0..n)
            .map(|i| encodings[i].iter().position(|e| e.resource == encodings[i][enc[i]].resource).unwrap())
            .collect();
        table.iter_mut().for_each(|t| *t = 0);
        let mut dec_index: u64 = 0;
        loop {
            behavior.iter_mut().for_each(|b| *b = 0);
            for (xi, xs) in inputs.iter().enumerate() {
                for mi in 0..joint_m {
                    let w = joint[xi * joint_m + mi];
                    if w == 0 {
                        continue;
                    }
                    for y in 0..spec.n_y {
                        behavior[spec.index(table[mi * spec.n_y + y], xs, y)] += w;
                    }
                }
            }
            seen.entry((behavior.clone(), res_key.clone())).or_insert_with(|| (enc.clone(), dec_index));
            dec_index += 1;
            if !advance(&mut table, spec.n_z) {
                break;
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(finish(spec, encodings, seen, &total_den));
            }
            i -= 1;
            enc[i] += 1;
            if enc[i] < encodings[i].len() {
                break;
            }
            enc[i] = 0;
        }
    }
}

type Seen = HashMap<(Vec<i128>, Vec<usize>), (Vec<usize>, u64)>;

fn finish(spec: &ScenarioSpec, encodings: Vec<Vec<EncodingVertex>>, seen: Seen, den: &BigInt) -> ExtendedVertices {
    let mut vertices: Vec<ExtendedVertex> = seen
        .into_iter()
        .map(|((b, r), (enc, decoder))| ExtendedVertex {
            behavior: b.into_iter().map(|v| BigRational::new(v.into(), den.clone())).collect(),
            resources: r.iter().enumerate().map(|(i, &k)| encodings[i][k].resource.clone()).collect(),
            encodings: enc,
            decoder,
        })
        .collect();
    vertices.sort_by(|a, b| (&a.behavior, &a.resources).cmp(&(&b.behavior, &b.resources)));
    debug_assert!(vertices.iter().all(|v| v.behavior.len() == spec.behavior_dim()));
    ExtendedVertices { encodings, vertices }
}
