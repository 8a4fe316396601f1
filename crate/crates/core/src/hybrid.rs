//! Hybrid codec: message indexing in a Desarguesian spread, channel
//! codewords in a linearly isometric primitive cyclic orbit spread.
//!
//! The bridge is an invertible matrix `A` with `S1 * A = S2` as sets of
//! subspaces. Encoding multiplies a spread codeword by `A`; decoding
//! multiplies by the precomputed `A^-1` and runs the spread message
//! decoder, so no discrete logarithm is involved.
//!
//! The isometry is constructed algebraically: a root `gamma` of the
//! spread modulus is embedded into `F_{q^n}`, making `F_q[gamma]` the
//! subfield `F_{q^k}`; a greedy scan of the powers of the field generator
//! picks an `F_{q^k}`-basis `b_1, ..., b_m` of `F_{q^n}`, and the rows of
//! `A` are the coordinate vectors of `gamma^t * b_l`. Set equality of the
//! two spreads is verified before the codec is returned.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::finite_field::{
    find_irreducible, format_poly, gcd, parse_poly, FieldContext, FieldElem,
};
use crate::fq_matrix::{similarity_to, FqMatrix, Similarity};
use crate::orbit_codes::OrbitContext;
use crate::spread_codes::SpreadContext;
use crate::subspace::{Subspace, SubspaceCode};

const ORDER_CAP: u128 = 1 << 20;

/// A root of `p_alpha` inside the field, found by scanning
/// `beta^(s * (q^n-1)/(q^k-1))` over exponent multipliers `s` coprime to
/// `q^k - 1`, smallest `s` first. Roots of a primitive degree-`k`
/// polynomial lie in the order-`(q^k - 1)` subgroup, so the scan is
/// exhaustive.
pub fn embed_subfield_root(field: &FieldContext, p_alpha: &[u64]) -> Result<FieldElem> {
    if p_alpha.len() < 2 || *p_alpha.last().unwrap() != 1 {
        return Err(Error::InvalidParameter(
            "subfield modulus must be monic of degree >= 1".into(),
        ));
    }
    let k = (p_alpha.len() - 1) as u32;
    let n = field.degree();
    if n % k != 0 {
        return Err(Error::InvalidParameter(format!(
            "degree {k} does not divide the field degree {n}"
        )));
    }
    let q = field.characteristic();
    let subgroup = (q as u128).pow(k) - 1;
    let step = field.group_order() / subgroup;
    let beta = field.generator();
    for s in 1..=subgroup.max(1) {
        if gcd(s, subgroup) != 1 {
            continue;
        }
        let candidate = field.pow(&beta, s * step)?;
        if field.eval_poly(p_alpha, &candidate)?.is_zero() {
            return Ok(candidate);
        }
    }
    Err(Error::NoRoot(format!(
        "polynomial {}",
        format_poly(p_alpha)
    )))
}

/// True iff `{canonical(c * a) : c in s1}` equals `s2` as a set of
/// subspaces, bijectively.
pub fn verify_isometry(s1: &SubspaceCode, s2: &SubspaceCode, a: &FqMatrix) -> Result<bool> {
    if !a.is_square()
        || a.rows() != s1.ambient()
        || a.rows() != s2.ambient()
        || s1.characteristic() != a.characteristic()
        || s2.characteristic() != a.characteristic()
    {
        return Err(Error::DimensionMismatch(
            "isometry size does not match the codes".into(),
        ));
    }
    if a.rank() != a.rows() {
        return Err(Error::Singular);
    }
    if s1.len() != s2.len() || s1.dim() != s2.dim() {
        return Ok(false);
    }
    let targets: HashSet<&Subspace> = s2.words().iter().collect();
    for c in s1.words() {
        if !targets.contains(&c.apply(a)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Construct the linear isometry from a Desarguesian spread onto the
/// subfield-seeded primitive cyclic orbit spread in the given field.
///
/// Returns the matrix `A` and the orbit context. Set equality
/// `S1 * A = S2` is verified before returning; a failure is reported as
/// an error rather than a wrong matrix.
pub fn build_isometry(
    spread: &SpreadContext,
    field: &FieldContext,
) -> Result<(FqMatrix, OrbitContext)> {
    if field.characteristic() != spread.q() || field.degree() != spread.n() {
        return Err(Error::DimensionMismatch(format!(
            "spread over F_{}^{} against field F_{}^{}",
            spread.q(),
            spread.n(),
            field.characteristic(),
            field.degree()
        )));
    }
    if !field.is_primitive() {
        return Err(Error::InvalidParameter(
            "the channel field modulus must be primitive".into(),
        ));
    }
    let q = spread.q();
    let k = spread.k() as usize;
    let m = spread.m() as usize;
    let n = spread.n() as usize;
    let gamma = embed_subfield_root(field, spread.modulus())?;
    let beta = field.generator();

    // Greedy F_{q^k}-basis of F_{q^n} from the powers of beta: keep
    // beta^j when it is outside the F_q-span of the rows collected so
    // far. Each kept power contributes the k rows gamma^t * beta^j.
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut power = field.one();
    for _ in 0..n {
        if rows.len() == n {
            break;
        }
        let independent = if rows.is_empty() {
            !power.is_zero()
        } else {
            let mut probe = rows.clone();
            probe.push(power.coeffs().to_vec());
            FqMatrix::from_rows(q, &probe)?.rank() == rows.len() + 1
        };
        if independent {
            let mut shifted = power.clone();
            for _ in 0..k {
                rows.push(shifted.coeffs().to_vec());
                shifted = field.mul(&shifted, &gamma)?;
            }
            let rank = FqMatrix::from_rows(q, &rows)?.rank();
            if rank != rows.len() {
                return Err(Error::IsometryConstruction(format!(
                    "block of gamma-multiples is rank deficient ({rank} of {})",
                    rows.len()
                )));
            }
        }
        power = field.mul(&power, &beta)?;
    }
    if rows.len() != n {
        return Err(Error::IsometryConstruction(format!(
            "found {} of {m} basis blocks",
            rows.len() / k
        )));
    }
    let a = FqMatrix::from_rows(q, &rows)?;
    if a.rank() != n {
        return Err(Error::IsometryConstruction("transform is singular".into()));
    }
    let orbit = OrbitContext::subfield(field, spread.k())?;
    let s1 = spread.codewords()?;
    let s2 = orbit.codewords()?;
    if !verify_isometry(&s1, &s2, &a)? {
        return Err(Error::IsometryConstruction(
            "constructed transform does not map the spread onto the orbit".into(),
        ));
    }
    Ok((a, orbit))
}

/// Outcome of a conjugacy search between two cyclic matrix groups.
#[derive(Debug, Clone)]
pub enum Conjugacy {
    /// `T` with `Q = T^-1 * P^exponent * T` for a generator exponent.
    Conjugate {
        exponent: u128,
        transform: FqMatrix,
    },
    NotConjugate,
}

/// Decide whether `<P>` and `<Q>` are conjugate subgroups of `GL_n`.
///
/// Scans generator exponents `j` coprime to `ord(P)`, compares
/// characteristic polynomials and delegates to the Krylov similarity
/// search on a match. Diagnostic path; the isometry construction does
/// not depend on it.
pub fn groups_conjugate(p_mat: &FqMatrix, q_mat: &FqMatrix) -> Result<Conjugacy> {
    let ord_p = p_mat.order(ORDER_CAP)?;
    let ord_q = q_mat.order(ORDER_CAP)?;
    if ord_p != ord_q {
        return Ok(Conjugacy::NotConjugate);
    }
    let cp_q = q_mat.charpoly();
    for j in 1..=ord_p {
        if gcd(j, ord_p) != 1 {
            continue;
        }
        let pj = p_mat.pow(j)?;
        if pj.charpoly() != cp_q {
            continue;
        }
        if let Similarity::Similar(t) = similarity_to(&pj, q_mat)? {
            return Ok(Conjugacy::Conjugate {
                exponent: j,
                transform: t,
            });
        }
    }
    Ok(Conjugacy::NotConjugate)
}

/// The full hybrid codec: spread message codec, orbit channel code, and
/// the isometry pair between them.
#[derive(Debug, Clone)]
pub struct HybridCodec {
    spread: SpreadContext,
    orbit: OrbitContext,
    isometry: FqMatrix,
    isometry_inv: FqMatrix,
}

impl HybridCodec {
    /// Build a codec for `G_q(k, k*m)`. Moduli default to the
    /// deterministically smallest primitive polynomials of degree `k`
    /// (spread side) and `n` (channel field).
    pub fn new(
        q: u64,
        k: u32,
        m: u32,
        modulus_k: Option<Vec<u64>>,
        modulus_n: Option<Vec<u64>>,
    ) -> Result<Self> {
        let spread = SpreadContext::new(q, k, m, modulus_k)?;
        let modulus_n = match modulus_n {
            Some(mn) => mn,
            None => find_irreducible(q, spread.n(), true)?,
        };
        let field = FieldContext::new(q, spread.n(), modulus_n)?;
        let (isometry, orbit) = build_isometry(&spread, &field)?;
        let isometry_inv = isometry.inv()?;
        Ok(HybridCodec {
            spread,
            orbit,
            isometry,
            isometry_inv,
        })
    }

    pub fn spread(&self) -> &SpreadContext {
        &self.spread
    }

    pub fn orbit(&self) -> &OrbitContext {
        &self.orbit
    }

    pub fn isometry(&self) -> &FqMatrix {
        &self.isometry
    }

    pub fn isometry_inv(&self) -> &FqMatrix {
        &self.isometry_inv
    }

    pub fn message_count(&self) -> u128 {
        self.spread.message_count()
    }

    /// Spread-encode the message, then carry it onto the orbit spread.
    pub fn encode(&self, i: u128) -> Result<Subspace> {
        self.spread.encode(i)?.apply(&self.isometry)
    }

    /// Carry a channel codeword back and decode it in the spread.
    /// Words outside the code are rejected.
    pub fn decode(&self, word: &Subspace) -> Result<u128> {
        let back = word.apply(&self.isometry_inv)?;
        let i = self.spread.decode(&back)?;
        if self.spread.encode(i)? != back {
            return Err(Error::NotInCode);
        }
        Ok(i)
    }

    /// The channel code `S2`, in orbit exponent order.
    pub fn channel_code(&self) -> Result<SubspaceCode> {
        self.orbit.codewords()
    }

    /// Codec bundle text: spread parameters, both moduli, and the
    /// isometry pair as matrix blocks.
    pub fn write_descriptor(&self, out: &mut String) {
        out.push_str(&format!("q={}\n", self.spread.q()));
        out.push_str(&format!("k={}\n", self.spread.k()));
        out.push_str(&format!("m={}\n", self.spread.m()));
        out.push_str(&format!("modulus={}\n", format_poly(self.spread.modulus())));
        let field = self
            .orbit
            .field_view()
            .expect("hybrid orbit always has a field view");
        out.push_str(&format!("modulus_n={}\n", format_poly(field.modulus())));
        out.push_str("A:\n");
        out.push_str(&self.isometry.to_text());
        out.push_str("A_inv:\n");
        out.push_str(&self.isometry_inv.to_text());
    }

    pub fn parse_descriptor<'a, I>(lines: &mut I) -> Result<HybridCodec>
    where
        I: Iterator<Item = &'a str>,
    {
        let q: u64 = parse_keyed(lines, "q")?;
        let k: u32 = parse_keyed(lines, "k")?;
        let m: u32 = parse_keyed(lines, "m")?;
        let modulus = parse_poly(&parse_keyed::<String, _>(lines, "modulus")?)?;
        let modulus_n = parse_poly(&parse_keyed::<String, _>(lines, "modulus_n")?)?;
        expect_marker(lines, "A:")?;
        let a = FqMatrix::parse_block(lines)?;
        expect_marker(lines, "A_inv:")?;
        let a_inv = FqMatrix::parse_block(lines)?;
        Self::from_parts(q, k, m, modulus, modulus_n, a, a_inv)
    }

    /// Rebuild a codec from serialized parts, verifying the inverse pair
    /// and the isometry before accepting it.
    pub fn from_parts(
        q: u64,
        k: u32,
        m: u32,
        modulus: Vec<u64>,
        modulus_n: Vec<u64>,
        isometry: FqMatrix,
        isometry_inv: FqMatrix,
    ) -> Result<Self> {
        let spread = SpreadContext::new(q, k, m, Some(modulus))?;
        let field = FieldContext::new(q, spread.n(), modulus_n)?;
        let orbit = OrbitContext::subfield(&field, k)?;
        if !isometry.mul(&isometry_inv)?.is_identity() {
            return Err(Error::VerificationFailed(
                "stored matrices are not an inverse pair".into(),
            ));
        }
        if !verify_isometry(&spread.codewords()?, &orbit.codewords()?, &isometry)? {
            return Err(Error::VerificationFailed(
                "stored transform does not map the spread onto the orbit".into(),
            ));
        }
        Ok(HybridCodec {
            spread,
            orbit,
            isometry,
            isometry_inv,
        })
    }
}

pub(crate) fn parse_keyed<'a, T, I>(lines: &mut I, key: &str) -> Result<T>
where
    T: std::str::FromStr,
    I: Iterator<Item = &'a str>,
{
    let line = lines
        .by_ref()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Parse(format!("expected {key}=...")))?;
    let (k, v) = line
        .trim()
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected {key}=..., found {line:?}")))?;
    if k != key {
        return Err(Error::Parse(format!("expected key {key}, found {k}")));
    }
    v.parse()
        .map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))
}

fn expect_marker<'a, I>(lines: &mut I, marker: &str) -> Result<()>
where
    I: Iterator<Item = &'a str>,
{
    let line = lines
        .by_ref()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Parse(format!("expected {marker:?}")))?;
    if line.trim() != marker {
        return Err(Error::Parse(format!("expected {marker:?}, found {line:?}")));
    }
    Ok(())
}
