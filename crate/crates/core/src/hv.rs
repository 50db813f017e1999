//! Bipolar hypervector algebra.
//!
//! A hypervector is a fixed-dimension vector with every component in
//! {-1, +1}. Components are packed one per bit (bit set = +1), so the
//! three hot operations reduce to word-level bit tricks:
//!
//! - cosine: for bipolar vectors `dot = D - 2 * hamming`, and hamming
//!   is an XOR + popcount over the packed words;
//! - rotation binding: a circular shift of the packed bit string;
//! - majority bundling: a bit-sliced binary counter (one carry plane
//!   per count bit), so adding a vector costs amortized ~2 word passes
//!   instead of one add per component.
//!
//! All values are immutable after construction and every operation is
//! a pure function, so vectors can be shared and combined from any
//! number of threads.

use crate::error::{Error, Result};
use crate::rng::{fnv1a64, mix64, GOLDEN_GAMMA};

const WORD_BITS: usize = 64;

/// Reserved lexicon key for the shared empty-utterance vector. The
/// leading NUL keeps it out of the space of real tokens.
pub const EMPTY_UTTERANCE_KEY: &str = "\x00EMPTY";

/// Deterministic generation scope: a global seed plus the dimension
/// every vector in the pipeline shares. Identical `(seed, token)`
/// pairs always yield bit-identical vectors, regardless of call order
/// or thread count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedContext {
    seed: u64,
    dim: usize,
}

impl SeedContext {
    /// Errors with `InvalidConfig` when `dim` is zero.
    pub fn new(seed: u64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig(
                "hypervector dimension must be at least 1".into(),
            ));
        }
        Ok(Self { seed, dim })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Fixed-dimension bipolar vector. See the module docs for the packed
/// representation; observable semantics are plain {-1, +1} components.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypervector {
    dim: usize,
    words: Box<[u64]>,
}

fn word_count(dim: usize) -> usize {
    dim.div_ceil(WORD_BITS)
}

/// Mask selecting the valid bits of the final word.
fn tail_mask(dim: usize) -> u64 {
    match dim % WORD_BITS {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

impl Hypervector {
    /// Deterministic pseudo-random vector for `key` under `ctx`.
    ///
    /// The word stream is SplitMix64 keyed by a stable 64-bit hash of
    /// (global seed, key bytes): a counter-based generator, so the
    /// lexicon is a pure function with no shared state.
    pub fn random(ctx: &SeedContext, key: &str) -> Self {
        let token_seed = mix64(fnv1a64(key.as_bytes()) ^ ctx.seed.wrapping_mul(GOLDEN_GAMMA));
        let n = word_count(ctx.dim);
        let mut words = vec![0u64; n].into_boxed_slice();
        for (i, w) in words.iter_mut().enumerate() {
            *w = mix64(token_seed.wrapping_add((i as u64 + 1).wrapping_mul(GOLDEN_GAMMA)));
        }
        words[n - 1] &= tail_mask(ctx.dim);
        Self {
            dim: ctx.dim,
            words,
        }
    }

    /// Build from explicit signs; every entry must be -1 or +1.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidArgument(
                "hypervector needs at least one component".into(),
            ));
        }
        let mut words = vec![0u64; word_count(signs.len())].into_boxed_slice();
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS),
                -1 => {}
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "component {i} is {other}, expected -1 or +1"
                    )))
                }
            }
        }
        Ok(Self {
            dim: signs.len(),
            words,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Component value (+1 or -1). Panics if `i >= dim`.
    pub fn component(&self, i: usize) -> i8 {
        assert!(i < self.dim, "component {i} out of range for dim {}", self.dim);
        if self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.dim).map(|i| self.component(i)).collect()
    }

    /// Circular rotation toward higher indices by `shifts mod dim`:
    /// output component `(i + shifts) mod dim` equals input component
    /// `i`. This is the position-binding operation; it preserves the
    /// component multiset and is inverted by rotating `dim - shifts`.
    pub fn permute(&self, shifts: usize) -> Self {
        let k = shifts % self.dim;
        if k == 0 {
            return self.clone();
        }
        let n = self.words.len();
        let mut words = vec![0u64; n].into_boxed_slice();
        // rotate(x, k) == (x << k | x >> (dim - k)) over a dim-bit value.
        shl_or(&self.words, k, &mut words);
        shr_or(&self.words, self.dim - k, &mut words);
        words[n - 1] &= tail_mask(self.dim);
        Self {
            dim: self.dim,
            words,
        }
    }

    /// Component-wise majority vote; ties (possible only for an even
    /// number of inputs) resolve to +1.
    ///
    /// Errors with `InvalidArgument` on an empty slice and
    /// `DimensionMismatch` when inputs disagree on dimension.
    pub fn majority(vs: &[Hypervector]) -> Result<Self> {
        let first = vs.first().ok_or_else(|| {
            Error::InvalidArgument("majority bundle of an empty sequence".into())
        })?;
        let mut acc = BundleAccumulator::new(first.dim);
        for v in vs {
            acc.add(v)?;
        }
        acc.finish()
    }

    /// Cosine similarity; for bipolar vectors this is exactly
    /// `(matches - mismatches) / dim`.
    pub fn cosine(&self, other: &Hypervector) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mismatches: u32 = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a ^ b).count_ones())
            .sum();
        let dot = self.dim as i64 - 2 * i64::from(mismatches);
        Ok(dot as f64 / self.dim as f64)
    }

    /// Vector with every component flipped.
    pub fn negated(&self) -> Self {
        let n = self.words.len();
        let mut words: Box<[u64]> = self.words.iter().map(|w| !w).collect();
        words[n - 1] &= tail_mask(self.dim);
        Self {
            dim: self.dim,
            words,
        }
    }
}

impl std::fmt::Debug for Hypervector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let head: String = (0..self.dim.min(16))
            .map(|i| if self.component(i) == 1 { '+' } else { '-' })
            .collect();
        write!(f, "Hypervector(dim={}, {head}…)", self.dim)
    }
}

/// out |= src << k, over the multi-word little-endian bit string.
fn shl_or(src: &[u64], k: usize, out: &mut [u64]) {
    let ws = k / WORD_BITS;
    let bs = k % WORD_BITS;
    let n = src.len();
    if bs == 0 {
        for i in ws..n {
            out[i] |= src[i - ws];
        }
    } else {
        for i in ws..n {
            let lo = src[i - ws] << bs;
            let hi = if i > ws {
                src[i - ws - 1] >> (WORD_BITS - bs)
            } else {
                0
            };
            out[i] |= lo | hi;
        }
    }
}

/// out |= src >> k, over the multi-word little-endian bit string.
fn shr_or(src: &[u64], k: usize, out: &mut [u64]) {
    let ws = k / WORD_BITS;
    let bs = k % WORD_BITS;
    let n = src.len();
    if bs == 0 {
        for i in 0..n.saturating_sub(ws) {
            out[i] |= src[i + ws];
        }
    } else {
        for i in 0..n.saturating_sub(ws) {
            let lo = src[i + ws] >> bs;
            let hi = if i + ws + 1 < n {
                src[i + ws + 1] << (WORD_BITS - bs)
            } else {
                0
            };
            out[i] |= lo | hi;
        }
    }
}

/// Streaming majority vote over packed vectors.
///
/// Maintains a per-component count of +1 votes as a bit-sliced binary
/// counter: `planes[p]` holds bit `p` of every component's count.
/// Adding a vector ripple-carries it through the planes; the carry
/// dies out after ~2 planes on average, so bundling stays cheap for
/// long utterances.
#[derive(Debug, Clone)]
pub struct BundleAccumulator {
    dim: usize,
    count: usize,
    planes: Vec<Vec<u64>>,
    carry: Vec<u64>,
}

impl BundleAccumulator {
    pub fn new(dim: usize) -> Self {
        let n = word_count(dim);
        Self {
            dim,
            count: 0,
            planes: Vec::new(),
            carry: vec![0u64; n],
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn add(&mut self, v: &Hypervector) -> Result<()> {
        if v.dim != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.dim,
            });
        }
        self.carry.copy_from_slice(&v.words);
        for plane in &mut self.planes {
            let mut alive = 0u64;
            for (p, c) in plane.iter_mut().zip(self.carry.iter_mut()) {
                let t = *p & *c;
                *p ^= *c;
                *c = t;
                alive |= t;
            }
            if alive == 0 {
                self.count += 1;
                return Ok(());
            }
        }
        // Counter overflowed its current width: the carry becomes a
        // new most-significant plane.
        self.planes.push(self.carry.clone());
        self.count += 1;
        Ok(())
    }

    /// Majority vector of everything added so far: component is +1
    /// iff its +1 count is at least ceil(n/2), which encodes the
    /// tie-to-+1 rule for even n.
    pub fn finish(&self) -> Result<Hypervector> {
        if self.count == 0 {
            return Err(Error::InvalidArgument(
                "majority bundle of an empty sequence".into(),
            ));
        }
        let threshold = self.count.div_ceil(2);
        let plane_bits = usize::BITS as usize - self.count.leading_zeros() as usize;
        let n = word_count(self.dim);
        let zeros = vec![0u64; n];
        // Bit-sliced comparison count >= threshold, MSB plane first.
        let mut gte = vec![0u64; n];
        let mut eq = vec![!0u64; n];
        for p in (0..plane_bits.max(self.planes.len())).rev() {
            let plane = self.planes.get(p).unwrap_or(&zeros);
            if threshold >> p & 1 == 1 {
                for (e, &pw) in eq.iter_mut().zip(plane.iter()) {
                    *e &= pw;
                }
            } else {
                for ((g, e), &pw) in gte.iter_mut().zip(eq.iter_mut()).zip(plane.iter()) {
                    *g |= *e & pw;
                    *e &= !pw;
                }
            }
        }
        let mut words: Box<[u64]> = gte
            .iter()
            .zip(eq.iter())
            .map(|(g, e)| g | e)
            .collect();
        words[n - 1] &= tail_mask(self.dim);
        Ok(Hypervector {
            dim: self.dim,
            words,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(seed: u64, dim: usize) -> SeedContext {
        SeedContext::new(seed, dim).unwrap()
    }

    // Scalar reference model, kept deliberately naive: these mirror
    // the definitions, not the packed implementation.
    mod oracle {
        pub fn rotate(v: &[i8], k: usize) -> Vec<i8> {
            let d = v.len();
            let mut out = vec![0i8; d];
            for (i, &s) in v.iter().enumerate() {
                out[(i + k) % d] = s;
            }
            out
        }

        pub fn majority(vs: &[Vec<i8>]) -> Vec<i8> {
            let d = vs[0].len();
            (0..d)
                .map(|c| {
                    let sum: i32 = vs.iter().map(|v| i32::from(v[c])).sum();
                    if sum >= 0 {
                        1
                    } else {
                        -1
                    }
                })
                .collect()
        }

        pub fn cosine(a: &[i8], b: &[i8]) -> f64 {
            let dot: i64 = a
                .iter()
                .zip(b.iter())
                .map(|(&x, &y)| i64::from(x) * i64::from(y))
                .sum();
            dot as f64 / a.len() as f64
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            SeedContext::new(42, 0),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn generation_is_deterministic() {
        let c = ctx(42, 10_000);
        let a = Hypervector::random(&c, "meeting");
        let b = Hypervector::random(&c, "meeting");
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_keys_are_pseudo_orthogonal() {
        let c = ctx(42, 10_000);
        let a = Hypervector::random(&c, "meeting");
        let b = Hypervector::random(&c, "agenda");
        assert!(a.cosine(&b).unwrap().abs() < 0.05);
    }

    #[test]
    fn distinct_seeds_decorrelate_same_token() {
        // Hamming fraction across 100 seed pairs should sit at 0.5.
        let dim = 10_000;
        let mut fractions = Vec::new();
        for s in 0..100u64 {
            let a = Hypervector::random(&ctx(2 * s, dim), "meeting");
            let b = Hypervector::random(&ctx(2 * s + 1, dim), "meeting");
            let cos = a.cosine(&b).unwrap();
            // hamming fraction = (1 - cos) / 2 for bipolar vectors
            fractions.push((1.0 - cos) / 2.0);
        }
        let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean hamming fraction {mean}");
    }

    #[test]
    fn rotation_matches_the_small_example() {
        // [a,b,c,d] rotated once toward higher indices -> [d,a,b,c]
        let v = Hypervector::from_signs(&[1, 1, -1, 1]).unwrap();
        let r = v.permute(1);
        assert_eq!(r.signs(), vec![1, 1, 1, -1]);
    }

    #[test]
    fn rotation_by_zero_is_identity() {
        let c = ctx(7, 10_000);
        let v = Hypervector::random(&c, "x");
        assert_eq!(v.permute(0), v);
    }

    #[test]
    fn rotation_inverse_round_trip() {
        let c = ctx(7, 10_000);
        let v = Hypervector::random(&c, "x");
        for k in [1, 15, 64, 65, 9_999, 4_096] {
            assert_eq!(v.permute(k).permute(10_000 - k), v, "k={k}");
        }
    }

    #[test]
    fn shifts_wrap_modulo_dimension() {
        let c = ctx(7, 129);
        let v = Hypervector::random(&c, "x");
        assert_eq!(v.permute(129), v);
        assert_eq!(v.permute(129 + 5), v.permute(5));
    }

    #[test]
    fn majority_of_one_is_identity() {
        let c = ctx(3, 10_000);
        let v = Hypervector::random(&c, "solo");
        assert_eq!(Hypervector::majority(std::slice::from_ref(&v)).unwrap(), v);
    }

    #[test]
    fn majority_follows_component_votes() {
        let a = Hypervector::from_signs(&[1, -1]).unwrap();
        let b = Hypervector::from_signs(&[1, -1]).unwrap();
        let d = Hypervector::from_signs(&[-1, 1]).unwrap();
        let m = Hypervector::majority(&[a, b, d]).unwrap();
        assert_eq!(m.signs(), vec![1, -1]);
    }

    #[test]
    fn majority_ties_resolve_to_plus_one() {
        let a = Hypervector::from_signs(&[1, -1, 1]).unwrap();
        let b = Hypervector::from_signs(&[-1, 1, 1]).unwrap();
        let m = Hypervector::majority(&[a, b]).unwrap();
        assert_eq!(m.signs(), vec![1, 1, 1]);
    }

    #[test]
    fn majority_rejects_empty_input() {
        assert!(matches!(
            Hypervector::majority(&[]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn majority_rejects_mixed_dimensions() {
        let a = Hypervector::from_signs(&[1, 1]).unwrap();
        let b = Hypervector::from_signs(&[1, 1, 1]).unwrap();
        assert!(matches!(
            Hypervector::majority(&[a, b]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bundle_member_similarity_matches_combinatorics() {
        // For k=3 the survival probability of a member component is
        // 3/4, so the expected member cosine is 2*(3/4) - 1 = 0.5.
        let c = ctx(11, 10_000);
        let mut cosines = Vec::new();
        for t in 0..100 {
            let vs: Vec<_> = (0..3)
                .map(|i| Hypervector::random(&c, &format!("m{t}_{i}")))
                .collect();
            let m = Hypervector::majority(&vs).unwrap();
            for v in &vs {
                cosines.push(m.cosine(v).unwrap());
            }
        }
        let mean = cosines.iter().sum::<f64>() / cosines.len() as f64;
        assert!((mean - 0.5).abs() < 0.05, "mean member cosine {mean}");
    }

    #[test]
    fn cosine_identity_and_antipodal() {
        let c = ctx(5, 10_000);
        let v = Hypervector::random(&c, "v");
        assert_eq!(v.cosine(&v).unwrap(), 1.0);
        assert_eq!(v.cosine(&v.negated()).unwrap(), -1.0);
    }

    #[test]
    fn cosine_rejects_mixed_dimensions() {
        let a = Hypervector::random(&ctx(1, 64), "a");
        let b = Hypervector::random(&ctx(1, 128), "a");
        assert!(matches!(
            a.cosine(&b),
            Err(Error::DimensionMismatch { left: 64, right: 128 })
        ));
    }

    #[test]
    fn mean_absolute_cosine_of_random_pairs() {
        // |cos| of independent pairs follows a half-normal with mean
        // 0.01 * sqrt(2/pi) ~ 0.008 at D=10,000.
        let c = ctx(9, 10_000);
        let n = 1_000;
        let mut total = 0.0;
        for i in 0..n {
            let a = Hypervector::random(&c, &format!("l{i}"));
            let b = Hypervector::random(&c, &format!("r{i}"));
            total += a.cosine(&b).unwrap().abs();
        }
        let mean = total / f64::from(n);
        assert!((mean - 0.008).abs() < 0.002, "mean |cos| {mean}");
    }

    #[test]
    fn majority_dominance() {
        // A vector filling more than half the slots is returned exactly.
        let c = ctx(21, 513);
        let v = Hypervector::random(&c, "dominant");
        let mut vs = vec![v.clone(), v.clone(), v.clone()];
        vs.push(Hypervector::random(&c, "noise-1"));
        vs.push(Hypervector::random(&c, "noise-2"));
        assert_eq!(Hypervector::majority(&vs).unwrap(), v);
    }

    proptest! {
        #[test]
        fn packed_rotation_matches_scalar_oracle(
            dim in 1usize..300,
            k in 0usize..700,
            seed in any::<u64>(),
        ) {
            let v = Hypervector::random(&ctx(seed, dim), "t");
            let expect = oracle::rotate(&v.signs(), k % dim);
            prop_assert_eq!(v.permute(k).signs(), expect);
        }

        #[test]
        fn packed_majority_matches_scalar_oracle(
            dim in 1usize..200,
            n in 1usize..24,
            seed in any::<u64>(),
        ) {
            let c = ctx(seed, dim);
            let vs: Vec<_> = (0..n)
                .map(|i| Hypervector::random(&c, &format!("v{i}")))
                .collect();
            let expect = oracle::majority(
                &vs.iter().map(|v| v.signs()).collect::<Vec<_>>(),
            );
            prop_assert_eq!(Hypervector::majority(&vs).unwrap().signs(), expect);
        }

        #[test]
        fn packed_cosine_matches_scalar_oracle(
            dim in 1usize..300,
            seed in any::<u64>(),
        ) {
            let c = ctx(seed, dim);
            let a = Hypervector::random(&c, "a");
            let b = Hypervector::random(&c, "b");
            prop_assert_eq!(
                a.cosine(&b).unwrap(),
                oracle::cosine(&a.signs(), &b.signs())
            );
        }

        #[test]
        fn rotation_preserves_cosine_exactly(
            k in 0usize..20_000,
            seed in any::<u64>(),
        ) {
            let c = ctx(seed, 2_048);
            let a = Hypervector::random(&c, "a");
            let b = Hypervector::random(&c, "b");
            prop_assert_eq!(
                a.permute(k).cosine(&b.permute(k)).unwrap(),
                a.cosine(&b).unwrap()
            );
        }

        #[test]
        fn rotation_decorrelates(seed in any::<u64>(), k in 1usize..9_999) {
            let c = ctx(seed, 10_000);
            let v = Hypervector::random(&c, "v");
            let cos = v.cosine(&v.permute(k)).unwrap();
            prop_assert!(cos.abs() < 0.06, "k={} cos={}", k, cos);
        }
    }
}
