//! Cyclic orbit codes: orbits of a seed subspace under a cyclic matrix
//! group `<Q>`.
//!
//! Messages are group exponents: `i` maps to the canonical form of
//! `U * Q^i`, injectively for `i` below the orbit length. Decoding
//! inverts the exponent. When the generator is the companion matrix of a
//! primitive polynomial, codeword rows can be read as elements of
//! `F_{q^n}` and the exponent is recovered by a Pohlig-Hellman discrete
//! logarithm; otherwise a stepwise orbit walk is used.

use crate::error::{Error, Result};
use crate::finite_field::{companion_matrix, factorize, FieldContext};
use crate::fq_matrix::FqMatrix;
use crate::subspace::{Subspace, SubspaceCode};

/// Cap on stepwise orbit walks and generator order searches.
const WALK_CAP: u128 = 1 << 20;

/// An orbit code descriptor: generator, its order and factorization, the
/// seed subspace, the orbit length, and an optional field view of the
/// ambient space for logarithm-based decoding.
#[derive(Debug, Clone)]
pub struct OrbitContext {
    generator: FqMatrix,
    group_order: u128,
    group_order_factors: Vec<(u128, u32)>,
    seed: Subspace,
    orbit_len: u128,
    field_view: Option<FieldContext>,
}

impl OrbitContext {
    /// Build a context for the orbit of `seed` under `generator`.
    pub fn new(seed: Subspace, generator: FqMatrix) -> Result<Self> {
        Self::check_pair(&seed, &generator)?;
        let group_order = generator.order(WALK_CAP)?;
        let group_order_factors = factorize(group_order);
        let orbit_len =
            orbit_order_via_divisors(&seed, &generator, group_order, &group_order_factors)?;
        let field_view = detect_field_view(&generator);
        Ok(OrbitContext {
            generator,
            group_order,
            group_order_factors,
            seed,
            orbit_len,
            field_view,
        })
    }

    /// The primitive cyclic orbit context whose seed is the subfield
    /// `F_{q^k}` inside `F_{q^n}` and whose generator is the companion
    /// matrix of the field modulus. Its orbit is a spread of
    /// `(q^n-1)/(q^k-1)` codewords.
    pub fn subfield(field: &FieldContext, k: u32) -> Result<Self> {
        let seed = subfield_seed(field, k)?;
        let generator = companion_matrix(field.modulus(), field.characteristic())?;
        Self::new(seed, generator)
    }

    fn check_pair(seed: &Subspace, generator: &FqMatrix) -> Result<()> {
        if !generator.is_square() {
            return Err(Error::DimensionMismatch(
                "orbit generator must be square".into(),
            ));
        }
        if generator.rank() != generator.rows() {
            return Err(Error::Singular);
        }
        if seed.ambient() != generator.rows() || seed.characteristic() != generator.characteristic()
        {
            return Err(Error::DimensionMismatch(format!(
                "seed in F_{}^{} with a {}x{} generator over F_{}",
                seed.characteristic(),
                seed.ambient(),
                generator.rows(),
                generator.cols(),
                generator.characteristic()
            )));
        }
        Ok(())
    }

    pub fn generator(&self) -> &FqMatrix {
        &self.generator
    }

    pub fn seed(&self) -> &Subspace {
        &self.seed
    }

    /// Order of the generator in `GL_n`.
    pub fn group_order(&self) -> u128 {
        self.group_order
    }

    pub fn group_order_factors(&self) -> &[(u128, u32)] {
        &self.group_order_factors
    }

    /// Orbit length: the number of distinct codewords, a divisor of the
    /// group order.
    pub fn orbit_len(&self) -> u128 {
        self.orbit_len
    }

    /// Field view of the ambient space, present when the generator is
    /// the companion matrix of a primitive polynomial.
    pub fn field_view(&self) -> Option<&FieldContext> {
        self.field_view.as_ref()
    }

    /// Canonical form of `seed * generator^i` for `i` in `0..orbit_len`.
    pub fn encode(&self, i: u128) -> Result<Subspace> {
        if i >= self.orbit_len {
            return Err(Error::MessageOutOfRange {
                message: i,
                min: 0,
                max: self.orbit_len - 1,
            });
        }
        self.seed.apply(&self.generator.pow(i)?)
    }

    /// Recover the exponent of a codeword.
    ///
    /// With a field view: read the first basis row of `word` and a
    /// nonzero seed vector as field elements, take the discrete log of
    /// their quotient, reduce modulo the orbit length and verify;
    /// candidate seed vectors are tried in deterministic order until
    /// verification succeeds. Without a field view the orbit is walked.
    pub fn decode(&self, word: &Subspace) -> Result<u128> {
        self.check_word(word)?;
        let Some(field) = &self.field_view else {
            return self.decode_walk(word);
        };
        let beta = field.generator();
        let w = field.element(word.basis().row(0))?;
        for u_vec in self.seed.nonzero_vectors() {
            let u = field.element(&u_vec)?;
            let target = field.mul(&w, &field.inv(&u)?)?;
            let exponent = field.discrete_log(&beta, &target)?;
            let i = exponent % self.orbit_len;
            if &self.encode(i)? == word {
                return Ok(i);
            }
        }
        Err(Error::NotInCode)
    }

    /// Exponent recovery by stepping through the orbit and comparing
    /// canonical forms. Used as the fallback decoder and as an
    /// independent cross-check of the logarithm path.
    pub fn decode_walk(&self, word: &Subspace) -> Result<u128> {
        self.check_word(word)?;
        let mut cur = self.seed.clone();
        for i in 0..self.orbit_len {
            if &cur == word {
                return Ok(i);
            }
            cur = cur.apply(&self.generator)?;
        }
        Err(Error::NotInCode)
    }

    fn check_word(&self, word: &Subspace) -> Result<()> {
        if word.dim() != self.seed.dim()
            || word.ambient() != self.seed.ambient()
            || word.characteristic() != self.seed.characteristic()
        {
            return Err(Error::DimensionMismatch(
                "word has different parameters than the orbit seed".into(),
            ));
        }
        Ok(())
    }

    /// The orbit as a code, in exponent order.
    pub fn codewords(&self) -> Result<SubspaceCode> {
        if self.orbit_len > WALK_CAP {
            return Err(Error::EnumerationTooLarge {
                count: self.orbit_len,
                limit: WALK_CAP,
            });
        }
        let mut code = SubspaceCode::new(
            self.seed.dim(),
            self.seed.ambient(),
            self.seed.characteristic(),
        )
        .with_label(format!(
            "orbit({},{},{})",
            self.seed.characteristic(),
            self.seed.dim(),
            self.seed.ambient()
        ));
        let mut cur = self.seed.clone();
        for _ in 0..self.orbit_len {
            code.push(cur.clone())?;
            cur = cur.apply(&self.generator)?;
        }
        Ok(code)
    }

    /// Descriptor text: generator block, seed block, then the group
    /// order and orbit length.
    pub fn write_descriptor(&self, out: &mut String) {
        out.push_str("generator:\n");
        out.push_str(&self.generator.to_text());
        out.push_str("seed:\n");
        out.push_str(&self.seed.basis().to_text());
        out.push_str(&format!("N={}\n", self.group_order));
        out.push_str(&format!("N_U={}\n", self.orbit_len));
    }

    pub fn parse_descriptor<'a, I>(lines: &mut I) -> Result<OrbitContext>
    where
        I: Iterator<Item = &'a str>,
    {
        expect_marker(lines, "generator:")?;
        let generator = FqMatrix::parse_block(lines)?;
        expect_marker(lines, "seed:")?;
        let seed = Subspace::canonicalize(&FqMatrix::parse_block(lines)?)?;
        let n = expect_value(lines, "N")?;
        let n_u = expect_value(lines, "N_U")?;
        let ctx = OrbitContext::new(seed, generator)?;
        if ctx.group_order != n || ctx.orbit_len != n_u {
            return Err(Error::Parse(format!(
                "descriptor claims N={n}, N_U={n_u} but recomputation gives N={}, N_U={}",
                ctx.group_order, ctx.orbit_len
            )));
        }
        Ok(ctx)
    }
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

fn expect_value<'a, I>(lines: &mut I, key: &str) -> Result<u128>
where
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
        .map_err(|_| Error::Parse(format!("bad integer for {key}: {v:?}")))
}

/// Field view when the generator is exactly the companion matrix of a
/// primitive polynomial, so that multiplying by the generator matches
/// scaling by the primitive field element.
fn detect_field_view(generator: &FqMatrix) -> Option<FieldContext> {
    let cp = generator.charpoly();
    let comp = companion_matrix(&cp, generator.characteristic()).ok()?;
    if &comp != generator {
        return None;
    }
    match FieldContext::new(generator.characteristic(), generator.rows() as u32, cp) {
        Ok(field) if field.is_primitive() => Some(field),
        _ => None,
    }
}

/// All divisors of the integer described by `factors`, ascending.
fn divisors(factors: &[(u128, u32)]) -> Vec<u128> {
    let mut out = vec![1u128];
    for &(p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for &d in &out {
            let mut pe = 1u128;
            for _ in 0..=e {
                next.push(d * pe);
                pe = pe.saturating_mul(p);
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

fn orbit_order_via_divisors(
    seed: &Subspace,
    generator: &FqMatrix,
    group_order: u128,
    factors: &[(u128, u32)],
) -> Result<u128> {
    for d in divisors(factors) {
        if seed.apply(&generator.pow(d)?)? == *seed {
            return Ok(d);
        }
    }
    // Lagrange: the orbit length divides the group order
    Err(Error::VerificationFailed(format!(
        "no divisor of {group_order} stabilizes the seed"
    )))
}

/// Least `d > 0` with `seed * Q^d = seed`: by divisors of the generator
/// order when it is known, by stepwise walking otherwise.
pub fn orbit_order(seed: &Subspace, generator: &FqMatrix) -> Result<u128> {
    OrbitContext::check_pair(seed, generator)?;
    match generator.order(WALK_CAP) {
        Ok(n) => orbit_order_via_divisors(seed, generator, n, &factorize(n)),
        Err(Error::OrderCapExceeded { .. }) => {
            let mut cur = seed.apply(generator)?;
            let mut d: u128 = 1;
            while &cur != seed {
                cur = cur.apply(generator)?;
                d += 1;
                if d > WALK_CAP {
                    return Err(Error::OrderCapExceeded { cap: WALK_CAP });
                }
            }
            Ok(d)
        }
        Err(e) => Err(e),
    }
}

/// Enumerate the orbit of `seed` under `generator` stepwise until the
/// seed recurs; the recurrence index is the orbit length.
pub fn build_orbit(seed: &Subspace, generator: &FqMatrix) -> Result<(OrbitContext, SubspaceCode)> {
    OrbitContext::check_pair(seed, generator)?;
    let mut words = vec![seed.clone()];
    let mut cur = seed.apply(generator)?;
    while &cur != seed {
        words.push(cur.clone());
        cur = cur.apply(generator)?;
        if words.len() as u128 > WALK_CAP {
            return Err(Error::OrderCapExceeded { cap: WALK_CAP });
        }
    }
    let group_order = generator.order(WALK_CAP)?;
    let group_order_factors = factorize(group_order);
    let field_view = detect_field_view(generator);
    let ctx = OrbitContext {
        generator: generator.clone(),
        group_order,
        group_order_factors,
        seed: seed.clone(),
        orbit_len: words.len() as u128,
        field_view,
    };
    let mut code =
        SubspaceCode::new(seed.dim(), seed.ambient(), seed.characteristic()).with_label(format!(
            "orbit({},{},{})",
            seed.characteristic(),
            seed.dim(),
            seed.ambient()
        ));
    for w in words {
        code.push(w)?;
    }
    Ok((ctx, code))
}

/// The `k`-dimensional `F_q`-subspace of `F_q^n` carrying the subfield
/// `F_{q^k}`: row `i` is the coordinate vector of `gamma^i` for
/// `gamma = beta^((q^n-1)/(q^k-1))`, `beta` the primitive field
/// generator.
pub fn subfield_seed(field: &FieldContext, k: u32) -> Result<Subspace> {
    let n = field.degree();
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidParameter(format!(
            "subfield degree {k} must divide the field degree {n}"
        )));
    }
    if !field.is_primitive() {
        return Err(Error::InvalidParameter(
            "subfield seed needs a primitive field modulus".into(),
        ));
    }
    let q = field.characteristic();
    let exponent = field.group_order() / ((q as u128).pow(k) - 1);
    let gamma = field.pow(&field.generator(), exponent)?;
    let mut rows = Vec::with_capacity(k as usize);
    let mut cur = field.one();
    for _ in 0..k {
        rows.push(cur.coeffs().to_vec());
        cur = field.mul(&cur, &gamma)?;
    }
    Subspace::canonicalize(&FqMatrix::from_rows(q, &rows)?)
}
