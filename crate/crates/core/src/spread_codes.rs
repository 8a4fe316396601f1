//! Desarguesian spread codes and their message codecs.
//!
//! The construction lifts the projective line `G_{q^k}(1, m)` into
//! `G_q(k, n)` with `n = k*m`: every coordinate of a line representative,
//! an element of `F_{q^k}`, is replaced by the matching polynomial in the
//! companion matrix of the subfield modulus. Two codecs sit on top:
//!
//! * projective points as messages ([`SpreadContext::encode_point`] /
//!   [`SpreadContext::decode_point`]);
//! * integers `1..=(q^n-1)/(q^k-1)` as messages, through a bijection
//!   between the integer range and normalized points
//!   ([`SpreadContext::encode`] / [`SpreadContext::decode`]).
//!
//! Decoding reads a single codeword vector, splits it into blocks of `k`
//! coordinates, and normalizes the resulting `F_{q^k}`-vector by its
//! first nonzero entry.

use std::fmt;

use crate::error::{Error, Result};
use crate::finite_field::{companion_matrix, find_irreducible, FieldContext, FieldElem};
use crate::fq_matrix::FqMatrix;
use crate::subspace::{Subspace, SubspaceCode};

/// Largest message range that [`SpreadContext::codewords`] will list.
const ENUMERATION_LIMIT: u128 = 1 << 20;

/// Positional value of base-`q` digits, least significant first.
pub fn radix_compose(digits: &[u64], q: u64) -> Result<u128> {
    if digits.iter().any(|&d| d >= q) {
        return Err(Error::InvalidParameter(format!("digit outside [0, {q})")));
    }
    let mut acc: u128 = 0;
    for &d in digits.iter().rev() {
        acc = acc
            .checked_mul(q as u128)
            .and_then(|a| a.checked_add(d as u128))
            .ok_or_else(|| Error::InvalidParameter("value exceeds 128 bits".into()))?;
    }
    Ok(acc)
}

/// Base-`q` digits of `x`, least significant first, fixed length.
pub fn radix_decompose(x: u128, q: u64, len: usize) -> Result<Vec<u64>> {
    if let Some(limit) = (q as u128).checked_pow(len as u32) {
        if x >= limit {
            return Err(Error::InvalidParameter(format!(
                "{x} needs more than {len} base-{q} digits"
            )));
        }
    }
    let mut digits = Vec::with_capacity(len);
    let mut rest = x;
    for _ in 0..len {
        digits.push((rest % q as u128) as u64);
        rest /= q as u128;
    }
    Ok(digits)
}

/// A normalized basis vector of a line in `F_{q^k}^m`: the first nonzero
/// coordinate equals one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<FieldElem>,
}

impl ProjPoint {
    /// Normalize `coords` by the inverse of the first nonzero entry.
    pub fn new(coords: Vec<FieldElem>, field: &FieldContext) -> Result<Self> {
        let first = coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroElement)?;
        let inv = field.inv(&coords[first])?;
        let coords = coords
            .iter()
            .map(|c| field.mul(c, &inv))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl fmt::Display for ProjPoint {
    /// Coordinates joined by commas, each a digit string with the
    /// constant term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| c.coeffs().iter().map(|d| d.to_string()).collect::<String>())
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parameters of one Desarguesian spread: `G_{q^k}(1, m)` lifted into
/// `G_q(k, n)` through the companion matrix of a primitive subfield
/// modulus.
#[derive(Debug, Clone)]
pub struct SpreadContext {
    q: u64,
    k: u32,
    m: u32,
    n: u32,
    subfield: FieldContext,
    companion: FqMatrix,
    companion_powers: Vec<FqMatrix>,
}

impl SpreadContext {
    /// Build a context for `G_q(k, k*m)`. Without an explicit modulus the
    /// deterministically smallest primitive polynomial of degree `k` is
    /// used; an explicit modulus must be primitive.
    pub fn new(q: u64, k: u32, m: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        if k == 0 || m == 0 {
            return Err(Error::InvalidParameter(
                "dimensions k and m must be positive".into(),
            ));
        }
        let n = k
            .checked_mul(m)
            .ok_or_else(|| Error::InvalidParameter("n = k*m overflows".into()))?;
        let modulus = match modulus {
            Some(m) => m,
            None => find_irreducible(q, k, true)?,
        };
        let subfield = FieldContext::new(q, k, modulus)?;
        if !subfield.is_primitive() {
            return Err(Error::InvalidParameter(
                "spread modulus must be primitive".into(),
            ));
        }
        let companion = companion_matrix(subfield.modulus(), q)?;
        let mut companion_powers = Vec::with_capacity(k as usize);
        let mut acc = FqMatrix::identity(q, k as usize)?;
        for _ in 0..k {
            companion_powers.push(acc.clone());
            acc = acc.mul(&companion)?;
        }
        // the full ambient order must stay within 128 bits
        crate::finite_field::group_order(q, n)?;
        Ok(SpreadContext {
            q,
            k,
            m,
            n,
            subfield,
            companion,
            companion_powers,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The field `F_{q^k}` the point coordinates live in.
    pub fn subfield(&self) -> &FieldContext {
        &self.subfield
    }

    pub fn modulus(&self) -> &[u64] {
        self.subfield.modulus()
    }

    pub fn companion(&self) -> &FqMatrix {
        &self.companion
    }

    /// Number of codewords and messages: `(q^n - 1) / (q^k - 1)`.
    pub fn message_count(&self) -> u128 {
        let qn = (self.q as u128).pow(self.n) - 1;
        let qk = (self.q as u128).pow(self.k) - 1;
        qn / qk
    }

    fn check_point(&self, point: &ProjPoint) -> Result<()> {
        if point.len() != self.m as usize {
            return Err(Error::DimensionMismatch(format!(
                "point with {} coordinates in G(1, {})",
                point.len(),
                self.m
            )));
        }
        Ok(())
    }

    /// The `k x n` block matrix of a point: coordinate `sum u_i alpha^i`
    /// becomes the block `sum u_i P^i`.
    pub fn point_matrix(&self, point: &ProjPoint) -> Result<FqMatrix> {
        self.check_point(point)?;
        let mut blocks = Vec::with_capacity(self.m as usize);
        for coord in point.coords() {
            let mut block = FqMatrix::zeros(self.q, self.k as usize, self.k as usize)?;
            for (i, &c) in coord.coeffs().iter().enumerate() {
                if c != 0 {
                    block = block.add(&self.companion_powers[i].scale(c))?;
                }
            }
            blocks.push(block);
        }
        let refs: Vec<&FqMatrix> = blocks.iter().collect();
        FqMatrix::hstack(&refs)
    }

    /// Encode a projective point as a spread codeword.
    pub fn encode_point(&self, point: &ProjPoint) -> Result<Subspace> {
        Subspace::canonicalize(&self.point_matrix(point)?)
    }

    /// Read one codeword vector back as a normalized point: split into
    /// `m` blocks of `k` coordinates and divide by the first nonzero
    /// block.
    pub fn point_from_vector(&self, v: &[u64]) -> Result<ProjPoint> {
        if v.len() != self.n as usize {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in F^{}",
                v.len(),
                self.n
            )));
        }
        let k = self.k as usize;
        let coords = v
            .chunks(k)
            .map(|chunk| self.subfield.element(chunk))
            .collect::<Result<Vec<_>>>()?;
        ProjPoint::new(coords, &self.subfield)
    }

    /// Decode a spread codeword to its projective point using the first
    /// basis row. Normalization makes the row choice immaterial.
    pub fn decode_point(&self, word: &Subspace) -> Result<ProjPoint> {
        if word.dim() != self.k as usize
            || word.ambient() != self.n as usize
            || word.characteristic() != self.q
        {
            return Err(Error::DimensionMismatch(format!(
                "codeword from G_{}({}, {}), expected G_{}({}, {})",
                word.characteristic(),
                word.dim(),
                word.ambient(),
                self.q,
                self.k,
                self.n
            )));
        }
        self.point_from_vector(word.basis().row(0))
    }

    /// The bijection from `{1, ..., (q^n-1)/(q^k-1)}` onto normalized
    /// points: message `i` gets a run of leading zeros, a one, and a tail
    /// filled from the positional expansion of the remaining offset.
    pub fn point_for_message(&self, i: u128) -> Result<ProjPoint> {
        let total = self.message_count();
        if i < 1 || i > total {
            return Err(Error::MessageOutOfRange {
                message: i,
                min: 1,
                max: total,
            });
        }
        let qk = (self.q as u128).pow(self.k);
        // smallest y with 1 + q^k + ... + q^(k(y-1)) >= i
        let mut acc: u128 = 0;
        let mut power: u128 = 1;
        let mut last_power: u128 = 1;
        let mut y: u32 = 0;
        while acc < i {
            acc += power;
            last_power = power;
            power *= qk;
            y += 1;
        }
        let leading_zeros = (self.m - y) as usize;
        let tail_len = (y - 1) as usize;
        let offset = acc - last_power; // messages consumed by points with more leading zeros
        let digits = radix_decompose(i - offset - 1, self.q, tail_len * self.k as usize)?;
        let mut coords = vec![self.subfield.zero(); leading_zeros];
        coords.push(self.subfield.one());
        for chunk in digits.chunks(self.k as usize) {
            coords.push(self.subfield.element(chunk)?);
        }
        ProjPoint::new(coords, &self.subfield)
    }

    /// Inverse of [`point_for_message`](Self::point_for_message).
    pub fn message_for_point(&self, point: &ProjPoint) -> Result<u128> {
        self.check_point(point)?;
        let leading_zeros = point
            .coords()
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroElement)?;
        if point.coords()[leading_zeros] != self.subfield.one() {
            return Err(Error::InvalidParameter("point is not normalized".into()));
        }
        let y = self.m as usize - leading_zeros;
        let qk = (self.q as u128).pow(self.k);
        let mut offset: u128 = 0;
        let mut power: u128 = 1;
        for _ in 0..y - 1 {
            offset += power;
            power *= qk;
        }
        let mut digits = Vec::with_capacity((y - 1) * self.k as usize);
        for coord in &point.coords()[leading_zeros + 1..] {
            digits.extend_from_slice(coord.coeffs());
        }
        Ok(offset + radix_compose(&digits, self.q)? + 1)
    }

    /// Encode an integer message.
    pub fn encode(&self, i: u128) -> Result<Subspace> {
        self.encode_point(&self.point_for_message(i)?)
    }

    /// Decode a spread codeword to its integer message.
    pub fn decode(&self, word: &Subspace) -> Result<u128> {
        self.message_for_point(&self.decode_point(word)?)
    }

    /// The full spread, in message order.
    pub fn codewords(&self) -> Result<SubspaceCode> {
        let total = self.message_count();
        if total > ENUMERATION_LIMIT {
            return Err(Error::EnumerationTooLarge {
                count: total,
                limit: ENUMERATION_LIMIT,
            });
        }
        let mut code = SubspaceCode::new(self.k as usize, self.n as usize, self.q)
            .with_label(format!("spread({},{},{})", self.q, self.k, self.n));
        for i in 1..=total {
            code.push(self.encode(i)?)?;
        }
        Ok(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx_2_2_4() -> SpreadContext {
        SpreadContext::new(2, 2, 2, None).unwrap()
    }

    #[test]
    fn radix_examples() {
        assert_eq!(radix_compose(&[1, 0, 1], 2).unwrap(), 5);
        assert_eq!(radix_compose(&[0, 0, 0], 2).unwrap(), 0);
        assert!(radix_compose(&[2], 2).is_err());
        assert_eq!(radix_decompose(5, 2, 3).unwrap(), vec![1, 0, 1]);
        assert!(radix_decompose(8, 2, 3).is_err());
    }

    proptest! {
        #[test]
        fn radix_round_trip(x in 0u128..729, q in prop::sample::select(vec![2u64, 3])) {
            let x = x % (q as u128).pow(6);
            let digits = radix_decompose(x, q, 6).unwrap();
            prop_assert_eq!(radix_compose(&digits, q).unwrap(), x);
        }
    }

    #[test]
    fn radix_round_trip_exhaustive_f2_6() {
        for x in 0u128..64 {
            let digits = radix_decompose(x, 2, 6).unwrap();
            assert_eq!(digits.len(), 6);
            assert_eq!(radix_compose(&digits, 2).unwrap(), x);
        }
    }

    #[test]
    fn encode_point_examples() {
        let ctx = ctx_2_2_4();
        let f = ctx.subfield();
        let one = f.one();
        let zero = f.zero();
        let alpha = f.generator();

        let pt = ProjPoint::new(vec![one.clone(), zero.clone()], f).unwrap();
        let w = ctx.encode_point(&pt).unwrap();
        assert_eq!(
            w.basis().row_vecs(),
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]
        );

        let pt = ProjPoint::new(vec![one.clone(), alpha.clone()], f).unwrap();
        let w = ctx.encode_point(&pt).unwrap();
        assert_eq!(
            w.basis().row_vecs(),
            vec![vec![1, 0, 0, 1], vec![0, 1, 1, 1]]
        );

        let pt = ProjPoint::new(vec![zero.clone(), one.clone()], f).unwrap();
        let w = ctx.encode_point(&pt).unwrap();
        assert_eq!(
            w.basis().row_vecs(),
            vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]
        );

        assert!(ProjPoint::new(vec![zero.clone(), zero], f).is_err());
    }

    #[test]
    fn decode_point_round_trip_all_points() {
        let ctx = ctx_2_2_4();
        let f = ctx.subfield();
        // all five points of G_4(1, 2)
        let mut points = vec![ProjPoint::new(vec![f.zero(), f.one()], f).unwrap()];
        for idx in 0..4u128 {
            points.push(
                ProjPoint::new(vec![f.one(), f.element_from_index(idx).unwrap()], f).unwrap(),
            );
        }
        assert_eq!(points.len(), 5);
        for pt in &points {
            let w = ctx.encode_point(pt).unwrap();
            assert_eq!(&ctx.decode_point(&w).unwrap(), pt);
        }
    }

    #[test]
    fn decode_point_known_correspondence() {
        let ctx = ctx_2_2_4();
        let f = ctx.subfield();
        let w = Subspace::canonicalize(
            &FqMatrix::from_rows(2, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap(),
        )
        .unwrap();
        let expected = ProjPoint::new(vec![f.zero(), f.one()], f).unwrap();
        assert_eq!(ctx.decode_point(&w).unwrap(), expected);
    }

    #[test]
    fn decoding_is_independent_of_the_chosen_vector() {
        let ctx = ctx_2_2_4();
        for i in 1..=ctx.message_count() {
            let w = ctx.encode(i).unwrap();
            let reference = ctx.decode_point(&w).unwrap();
            for v in w.nonzero_vectors() {
                assert_eq!(ctx.point_from_vector(&v).unwrap(), reference);
            }
        }
    }

    #[test]
    fn message_map_matches_the_bijectivity_chain() {
        let ctx = ctx_2_2_4();
        let f = ctx.subfield();
        let alpha = f.generator();
        let alpha_sq = f.mul(&alpha, &alpha).unwrap();

        let p1 = ctx.point_for_message(1).unwrap();
        assert_eq!(p1, ProjPoint::new(vec![f.zero(), f.one()], f).unwrap());

        let p2 = ctx.point_for_message(2).unwrap();
        assert_eq!(p2, ProjPoint::new(vec![f.one(), f.zero()], f).unwrap());

        let p5 = ctx.point_for_message(5).unwrap();
        assert_eq!(p5, ProjPoint::new(vec![f.one(), alpha_sq], f).unwrap());
    }

    #[test]
    fn message_map_hits_every_point_once() {
        let ctx = ctx_2_2_4();
        let f = ctx.subfield();
        let mut expected = vec![ProjPoint::new(vec![f.zero(), f.one()], f).unwrap()];
        for idx in 0..4u128 {
            expected.push(
                ProjPoint::new(vec![f.one(), f.element_from_index(idx).unwrap()], f).unwrap(),
            );
        }
        let mut seen = Vec::new();
        for i in 1..=5u128 {
            let pt = ctx.point_for_message(i).unwrap();
            assert_eq!(ctx.message_for_point(&pt).unwrap(), i);
            assert!(!seen.contains(&pt));
            seen.push(pt);
        }
        for pt in expected {
            assert!(seen.contains(&pt));
        }
    }

    #[test]
    fn integer_codec_round_trip_and_range() {
        let ctx = ctx_2_2_4();
        for i in 1..=5u128 {
            let w = ctx.encode(i).unwrap();
            assert_eq!(ctx.decode(&w).unwrap(), i);
        }
        assert!(matches!(
            ctx.encode(0),
            Err(Error::MessageOutOfRange { .. })
        ));
        assert!(matches!(
            ctx.encode(6),
            Err(Error::MessageOutOfRange { .. })
        ));
    }

    #[test]
    fn enumerated_spread_is_a_spread() {
        let ctx = ctx_2_2_4();
        let code = ctx.codewords().unwrap();
        assert_eq!(code.len(), 5);
        assert!(code.verify_spread().unwrap().is_spread());
        assert_eq!(code.min_distance().unwrap(), 4);

        let ctx = SpreadContext::new(3, 2, 2, None).unwrap();
        let code = ctx.codewords().unwrap();
        assert_eq!(code.len(), 10);
        assert!(code.verify_spread().unwrap().is_spread());
    }

    #[test]
    fn encode_blocks_are_zero_or_invertible() {
        let ctx = ctx_2_2_4();
        for i in 1..=5u128 {
            let pt = ctx.point_for_message(i).unwrap();
            let m = ctx.point_matrix(&pt).unwrap();
            for l in 0..2usize {
                let block = m.submatrix(0, 2, 2 * l, 2 * l + 2).unwrap();
                assert!(block.is_zero() || block.rank() == 2);
            }
        }
    }

    #[test]
    fn non_primitive_modulus_is_rejected() {
        // x^2 + 1 over F_3: irreducible, not primitive
        assert!(SpreadContext::new(3, 2, 2, Some(vec![1, 0, 1])).is_err());
    }

    // every received word within half the minimum distance decodes to
    // the transmitted codeword: exhaustive single-row erasures and
    // single-vector insertions on the (2,2,4) and (2,2,6) spreads
    #[test]
    fn nearest_codeword_recovers_within_half_distance() {
        for m in [2u32, 3] {
            let ctx = SpreadContext::new(2, 2, m, None).unwrap();
            let code = ctx.codewords().unwrap();
            let n = ctx.n() as usize;
            for (idx, word) in code.words().iter().enumerate() {
                // erase one basis row: distance 1 to the codeword
                for drop in 0..word.dim() {
                    let rows: Vec<Vec<u64>> = word
                        .basis()
                        .row_vecs()
                        .into_iter()
                        .enumerate()
                        .filter_map(|(r, v)| (r != drop).then_some(v))
                        .collect();
                    let received =
                        Subspace::spanned_by(&FqMatrix::from_rows(2, &rows).unwrap()).unwrap();
                    assert_eq!(word.distance(&received).unwrap(), 1);
                    assert_eq!(code.nearest(&received).unwrap(), idx);
                }
                // append one vector outside the codeword
                for v in 1..(1u128 << n) {
                    let mut vector = vec![0u64; n];
                    let mut rest = v;
                    for entry in vector.iter_mut() {
                        *entry = (rest % 2) as u64;
                        rest /= 2;
                    }
                    if word.contains_vector(&vector).unwrap() {
                        continue;
                    }
                    let mut rows = word.basis().row_vecs();
                    rows.push(vector);
                    let received =
                        Subspace::spanned_by(&FqMatrix::from_rows(2, &rows).unwrap()).unwrap();
                    assert_eq!(word.distance(&received).unwrap(), 1);
                    assert_eq!(code.nearest(&received).unwrap(), idx);
                }
            }
        }
    }

    #[test]
    fn point_display_is_compact() {
        let ctx = ctx_2_2_4();
        let pt = ctx.point_for_message(5).unwrap();
        assert_eq!(pt.to_string(), "10,11");
    }
}
