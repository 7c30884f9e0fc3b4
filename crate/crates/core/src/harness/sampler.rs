//! Deterministic morphism sampling.
//!
//! Every draw is a pure function of `(seed, stream, index)` using the
//! SplitMix64 finalizer, so samples do not depend on evaluation order.
//! The stream id is derived from a role string and the objects involved,
//! which makes a sampled instance reproducible from its witness alone.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use crate::exactlin::graded::{GradedMap, GradedObject};
use crate::exactlin::matrix::Matrix;
use crate::exactlin::scalar::{Field, Scalar};

pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream id for a role and an object tuple: first 8 bytes (big-endian) of
/// `sha256(role || "|" || obj₀ || "|" || obj₁ ...)`, objects in display form.
pub fn stream_id(role: &str, objects: &[&GradedObject]) -> u64 {
    let mut h = Sha256::new();
    h.update(role.as_bytes());
    for o in objects {
        h.update(b"|");
        h.update(o.to_string().as_bytes());
    }
    let digest = h.finalize();
    u64::from_be_bytes(digest[..8].try_into().expect("8 bytes"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleStream {
    pub seed: u64,
    pub stream: u64,
    key: u64,
}

impl SampleStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix(seed.wrapping_add(GAMMA.wrapping_mul(stream.wrapping_add(1))));
        SampleStream { seed, stream, key }
    }

    pub fn for_role(seed: u64, role: &str, objects: &[&GradedObject]) -> Self {
        SampleStream::new(seed, stream_id(role, objects))
    }

    /// The `i`-th 64-bit draw.
    pub fn value(&self, i: u64) -> u64 {
        mix(self.key.wrapping_add(GAMMA.wrapping_mul(i.wrapping_add(1))))
    }

    /// `count` maps `source → target`: partial identity, zero, shift
    /// permutation, then random maps with entries from [`palette`].
    pub fn maps(&self, field: Field, source: &GradedObject, target: &GradedObject, count: usize) -> Vec<GradedMap> {
        let pal = palette(field);
        let mut counter = 0u64;
        (0..count)
            .map(|k| {
                let blocks: BTreeMap<_, _> = source
                    .degrees()
                    .filter(|d| target.dim(*d) > 0)
                    .map(|d| {
                        let (r, c) = (target.dim(d), source.dim(d));
                        let mut m = Matrix::zeros(field, r, c);
                        match k {
                            0 => (0..r.min(c)).for_each(|i| m.set(i, i, field.one())),
                            1 => {}
                            2 => (0..r.min(c)).for_each(|i| m.set(i, (i + 1) % c, field.one())),
                            _ => {
                                for i in 0..r {
                                    for j in 0..c {
                                        let v = self.value(counter);
                                        counter += 1;
                                        m.set(i, j, pal[(v % pal.len() as u64) as usize].clone());
                                    }
                                }
                            }
                        }
                        (d, m)
                    })
                    .collect();
                GradedMap::new(field, source.clone(), target.clone(), blocks).expect("sampled blocks are well-shaped")
            })
            .collect()
    }
}

/// Sample entries: `0, 1, −1, 2, 1/2` over ℚ; their distinct residues over 𝔽_p
/// (without `1/2` when `p = 2`).
pub fn palette(field: Field) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    for (n, d) in [(0, 1), (1, 1), (-1, 1), (2, 1), (1, 2)] {
        if let Ok(s) = Scalar::from_ratio(field, n, d) {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}
