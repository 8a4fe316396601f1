//! Exact arithmetic in prime fields `F_p` and extension fields `F_{p^e}`.
//!
//! Extension field elements are polynomials over `F_p` reduced modulo a
//! fixed irreducible modulus, stored as coefficient vectors with the
//! constant term first. The module also provides deterministic
//! irreducible/primitive polynomial search, companion matrices, integer
//! factorization (trial division + Pollard rho) and Pohlig-Hellman
//! discrete logarithms with baby-step giant-step subgroup searches.
//!
//! Orders and factorization inputs are capped at 128 bits.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fq_matrix::FqMatrix;

// ---------------------------------------------------------------------------
// prime field helpers
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn fp_sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn fp_neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub(crate) fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn fp_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_mul(acc, base, p);
        }
        base = fp_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue, `p` prime.
#[inline]
pub(crate) fn fp_inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    fp_pow(a, p - 2, p)
}

// ---------------------------------------------------------------------------
// dense polynomials over F_p (coefficients low degree first)
// ---------------------------------------------------------------------------

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&c| c == 0)
}

fn poly_is_one(v: &[u64]) -> bool {
    !v.is_empty() && v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if poly_is_zero(a) || poly_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = fp_add(out[i + j], fp_mul(ai, bj, p), p);
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo `f` (`f` nonzero).
fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let mut fv: Vec<u64> = f.to_vec();
    poly_trim(&mut fv);
    let fd = fv.len() - 1;
    let lead_inv = fp_inv(fv[fd], p);
    while r.len() > fd {
        let coeff = fp_mul(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - 1 - fd;
        if coeff != 0 {
            for (j, &fj) in fv.iter().enumerate() {
                r[shift + j] = fp_sub(r[shift + j], fp_mul(coeff, fj, p), p);
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mod_mul(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), f, p)
}

fn poly_mod_pow(base: &[u64], mut exp: u128, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = poly_rem(&[1], f, p);
    let mut b = poly_rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mod_mul(&acc, &b, f, p);
        }
        b = poly_mod_mul(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        if lead != 1 {
            let inv = fp_inv(lead, p);
            for c in &mut x {
                *c = fp_mul(*c, inv, p);
            }
        }
    }
    x
}

/// Inverse of `a` modulo `f` via the extended Euclidean algorithm.
/// `None` when `gcd(a, f) != 1`.
fn poly_mod_inv(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0: Vec<u64> = f.to_vec();
    let mut r1 = poly_rem(a, f, p);
    poly_trim(&mut r0);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // r0 = q * r1 + r2
        let q;
        {
            let mut rem = r0.clone();
            let d1 = r1.len() - 1;
            let lead_inv = fp_inv(r1[d1], p);
            let mut quot = vec![0u64; rem.len().saturating_sub(d1)];
            while rem.len() > d1 {
                let coeff = fp_mul(*rem.last().unwrap(), lead_inv, p);
                let shift = rem.len() - 1 - d1;
                quot[shift] = coeff;
                if coeff != 0 {
                    for (j, &fj) in r1.iter().enumerate() {
                        rem[shift + j] = fp_sub(rem[shift + j], fp_mul(coeff, fj, p), p);
                    }
                }
                rem.pop();
                poly_trim(&mut rem);
                if rem.is_empty() {
                    break;
                }
            }
            poly_trim(&mut quot);
            q = quot;
            r0 = r1;
            r1 = rem;
        }
        // s2 = s0 - q * s1
        let qs = poly_mul(&q, &s1, p);
        let len = s0.len().max(qs.len());
        let mut s2 = vec![0u64; len];
        for (i, c) in s2.iter_mut().enumerate() {
            let lhs = s0.get(i).copied().unwrap_or(0);
            let rhs = qs.get(i).copied().unwrap_or(0);
            *c = fp_sub(lhs, rhs, p);
        }
        poly_trim(&mut s2);
        s0 = s1;
        s1 = s2;
    }
    if !poly_is_one(&r0) {
        // normalize: r0 is a nonzero constant iff gcd is 1
        if r0.len() == 1 && r0[0] != 0 {
            let inv = fp_inv(r0[0], p);
            let mut out = s0;
            for c in &mut out {
                *c = fp_mul(*c, inv, p);
            }
            return Some(poly_rem(&out, f, p));
        }
        return None;
    }
    Some(poly_rem(&s0, f, p))
}

/// Residue of `x` modulo the monic polynomial `f`.
fn x_residue(f: &[u64], p: u64) -> Vec<u64> {
    if f.len() > 2 {
        vec![0, 1]
    } else {
        // degree 1: x = -c0
        vec![fp_neg(f[0], p)]
    }
}

/// Irreducibility of a monic polynomial over `F_p` (Rabin's test).
pub fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let mut fv: Vec<u64> = f.to_vec();
    poly_trim(&mut fv);
    if fv.len() < 2 {
        return false; // constants are not irreducible
    }
    let e = fv.len() - 1;
    if e == 1 {
        return true;
    }
    if fv[0] == 0 {
        return false; // divisible by x
    }
    // x^(p^e) == x mod f, computed as e successive p-th powers
    let x = vec![0u64, 1];
    let mut t = x.clone();
    for _ in 0..e {
        t = poly_mod_pow(&t, p as u128, &fv, p);
    }
    if t != poly_rem(&x, &fv, p) {
        return false;
    }
    // gcd(x^(p^(e/l)) - x, f) == 1 for every prime l | e
    for (l, _) in factorize(e as u128) {
        let steps = e / l as usize;
        let mut t = x.clone();
        for _ in 0..steps {
            t = poly_mod_pow(&t, p as u128, &fv, p);
        }
        // t - x
        let len = t.len().max(2);
        let mut diff = vec![0u64; len];
        for (i, c) in diff.iter_mut().enumerate() {
            let lhs = t.get(i).copied().unwrap_or(0);
            let rhs = if i == 1 { 1 } else { 0 };
            *c = fp_sub(lhs, rhs, p);
        }
        poly_trim(&mut diff);
        let g = poly_gcd(&diff, &fv, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn poly_is_primitive_given(f: &[u64], p: u64, order: u128, factors: &[(u128, u32)]) -> bool {
    let x = x_residue(f, p);
    if poly_is_zero(&x) {
        return false;
    }
    for &(q, _) in factors {
        let t = poly_mod_pow(&x, order / q, f, p);
        if poly_is_one(&t) {
            return false;
        }
    }
    true
}

/// Whether the residue of `x` modulo the monic irreducible `f` generates
/// the multiplicative group of `F_p[x]/(f)`.
pub fn poly_is_primitive(f: &[u64], p: u64) -> Result<bool> {
    let mut fv: Vec<u64> = f.to_vec();
    poly_trim(&mut fv);
    if !poly_is_irreducible(&fv, p) {
        return Ok(false);
    }
    let e = (fv.len() - 1) as u32;
    let order = group_order(p, e)?;
    Ok(poly_is_primitive_given(&fv, p, order, &factorize(order)))
}

/// `p^e - 1` with an explicit overflow error.
pub(crate) fn group_order(p: u64, e: u32) -> Result<u128> {
    (p as u128)
        .checked_pow(e)
        .map(|n| n - 1)
        .ok_or_else(|| Error::InvalidParameter(format!("{p}^{e} - 1 exceeds 128 bits")))
}

/// Deterministic search for the smallest monic irreducible (optionally
/// primitive) polynomial of degree `e` over `F_p`.
///
/// Candidates are scanned by increasing counter value with the constant
/// term as the least significant base-`p` digit, so the result is
/// reproducible across runs. Returned as `e + 1` coefficients, constant
/// term first, leading coefficient 1.
pub fn find_irreducible(p: u64, e: u32, require_primitive: bool) -> Result<Vec<u64>> {
    if !is_prime(p as u128) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if e == 0 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    let count = (p as u128)
        .checked_pow(e)
        .ok_or_else(|| Error::InvalidParameter(format!("{p}^{e} exceeds 128 bits")))?;
    let order = count - 1;
    let factors = if require_primitive {
        factorize(order)
    } else {
        Vec::new()
    };
    for v in 0..count {
        let mut f = Vec::with_capacity(e as usize + 1);
        let mut rest = v;
        for _ in 0..e {
            f.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        f.push(1);
        if !poly_is_irreducible(&f, p) {
            continue;
        }
        if require_primitive && !poly_is_primitive_given(&f, p, order, &factors) {
            continue;
        }
        return Ok(f);
    }
    unreachable!("irreducible polynomials exist for every prime p and degree e");
}

/// Companion matrix of a monic polynomial, acting on row vectors
/// (`v * M` multiplies the represented field element by `x`).
pub fn companion_matrix(poly: &[u64], p: u64) -> Result<FqMatrix> {
    if poly.len() < 2 {
        return Err(Error::InvalidParameter(
            "companion matrix needs degree >= 1".into(),
        ));
    }
    if *poly.last().unwrap() != 1 {
        return Err(Error::InvalidParameter("polynomial must be monic".into()));
    }
    let e = poly.len() - 1;
    let mut m = FqMatrix::zeros(p, e, e)?;
    for r in 0..e.saturating_sub(1) {
        m.set(r, r + 1, 1);
    }
    for (j, &c) in poly[..e].iter().enumerate() {
        m.set(e - 1, j, fp_neg(c % p, p));
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// integers: primality, factorization
// ---------------------------------------------------------------------------

pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return ((a % m) * (b % m)) % m;
    }
    // shift-and-add for 128-bit moduli
    let mut a = a % m;
    let mut b = b % m;
    let mut acc: u128 = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc = if acc >= m - a { acc - (m - a) } else { acc + a };
        }
        a = if a >= m - a { a - (m - a) } else { a + a };
        b >>= 1;
    }
    acc
}

pub(crate) fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse, or `None` when `gcd(a, m) != 1`.
pub(crate) fn mod_inv(a: u128, m: u128) -> Option<u128> {
    let (mut old_r, mut r) = (a % m, m);
    let (mut old_s, mut s) = (1u128 % m, 0u128);
    while r != 0 {
        let q = old_r / r;
        let next_r = old_r - q * r;
        old_r = r;
        r = next_r;
        let qs = mul_mod(q % m, s, m);
        let next_s = if old_s >= qs {
            old_s - qs
        } else {
            m - (qs - old_s)
        };
        old_s = s;
        s = next_s;
    }
    if old_r == 1 {
        Some(old_s % m)
    } else {
        None
    }
}

pub(crate) fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = 1u128 << (n.ilog2() / 2 + 1);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Deterministic Miller-Rabin. The fixed witness set is exact for every
/// input below 3.3 * 10^24, which covers all orders handled here.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == sp {
            return true;
        }
        if n % sp == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &[2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    // n odd, composite, not a prime power of a small prime
    for c in 1u128.. {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u128;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            if diff == 0 {
                d = n; // cycle without factor, retry with next c
                break;
            }
            d = gcd(diff, n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact prime factorization with primes in ascending order.
///
/// Trial division up to 10^4, then Pollard rho splitting with the
/// deterministic primality test above.
pub fn factorize(n: u128) -> Vec<(u128, u32)> {
    let mut out: Vec<(u128, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    let push = |out: &mut Vec<(u128, u32)>, p: u128| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    let mut rest = n;
    let mut d = 2u128;
    while d <= 10_000 && d * d <= rest {
        while rest % d == 0 {
            push(&mut out, d);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let mut stack = vec![rest];
        while let Some(c) = stack.pop() {
            if is_prime(c) {
                push(&mut out, c);
            } else {
                let f = pollard_rho(c);
                stack.push(f);
                stack.push(c / f);
            }
        }
    }
    out.sort_by_key(|&(p, _)| p);
    out
}

/// Polynomial text form: comma-separated coefficients, constant term
/// first (`"1,1,1"` is `x^2 + x + 1`).
pub fn format_poly(poly: &[u64]) -> String {
    poly.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_poly(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad polynomial coefficient {t:?}")))
        })
        .collect()
}

/// Render a factorization as `p^e` terms joined by a middle dot.
pub fn format_factorization(factors: &[(u128, u32)]) -> String {
    if factors.is_empty() {
        return "1".to_string();
    }
    factors
        .iter()
        .map(|&(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("·")
}

// ---------------------------------------------------------------------------
// extension field contexts
// ---------------------------------------------------------------------------

/// An element of `F_{p^e}`: `e` residues mod `p`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The field `F_{p^e}` as `F_p[x]` modulo a monic irreducible polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    p: u64,
    e: u32,
    modulus: Vec<u64>,
    primitive: bool,
    group_order: u128,
    group_order_factors: Vec<(u128, u32)>,
}

impl FieldContext {
    /// Build a context from an explicit monic irreducible modulus.
    pub fn new(p: u64, e: u32, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p as u128) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidParameter("degree must be positive".into()));
        }
        if modulus.len() != e as usize + 1 {
            return Err(Error::InvalidParameter(format!(
                "modulus must have {} coefficients, got {}",
                e + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter(
                "modulus coefficients must lie in [0, p)".into(),
            ));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidParameter("modulus must be monic".into()));
        }
        if !poly_is_irreducible(&modulus, p) {
            return Err(Error::InvalidParameter(
                "modulus is reducible over F_p".into(),
            ));
        }
        let group_order = group_order(p, e)?;
        let group_order_factors = factorize(group_order);
        let primitive = poly_is_primitive_given(&modulus, p, group_order, &group_order_factors);
        Ok(FieldContext {
            p,
            e,
            modulus,
            primitive,
            group_order,
            group_order_factors,
        })
    }

    /// Build a context with the deterministically smallest modulus.
    pub fn generate(p: u64, e: u32, require_primitive: bool) -> Result<Self> {
        let modulus = find_irreducible(p, e, require_primitive)?;
        Self::new(p, e, modulus)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// True iff the residue of `x` generates the multiplicative group.
    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// `p^e - 1`.
    pub fn group_order(&self) -> u128 {
        self.group_order
    }

    pub fn group_order_factors(&self) -> &[(u128, u32)] {
        &self.group_order_factors
    }

    fn check(&self, a: &FieldElem) -> Result<()> {
        if a.coeffs.len() != self.e as usize || a.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElem> {
        let elem = FieldElem {
            coeffs: coeffs.to_vec(),
        };
        self.check(&elem)?;
        Ok(elem)
    }

    /// Element whose coefficient vector is the base-`p` expansion of `x`.
    pub fn element_from_index(&self, x: u128) -> Result<FieldElem> {
        if x > self.group_order {
            return Err(Error::InvalidParameter(format!(
                "index {x} outside [0, p^e)"
            )));
        }
        let mut coeffs = Vec::with_capacity(self.e as usize);
        let mut rest = x;
        for _ in 0..self.e {
            coeffs.push((rest % self.p as u128) as u64);
            rest /= self.p as u128;
        }
        Ok(FieldElem { coeffs })
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coeffs: vec![0; self.e as usize],
        }
    }

    /// Embedding of a base field residue.
    pub fn scalar(&self, c: u64) -> Result<FieldElem> {
        if c >= self.p {
            return Err(Error::InvalidParameter(format!(
                "scalar {c} outside [0, {})",
                self.p
            )));
        }
        let mut coeffs = vec![0; self.e as usize];
        coeffs[0] = c;
        Ok(FieldElem { coeffs })
    }

    /// Evaluate a polynomial over `F_p` at a field element (Horner).
    pub fn eval_poly(&self, poly: &[u64], at: &FieldElem) -> Result<FieldElem> {
        self.check(at)?;
        let mut acc = self.zero();
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, at)?;
            acc = self.add(&acc, &self.scalar(c % self.p)?)?;
        }
        Ok(acc)
    }

    pub fn one(&self) -> FieldElem {
        let mut coeffs = vec![0; self.e as usize];
        coeffs[0] = 1;
        FieldElem { coeffs }
    }

    /// Residue of `x` modulo the context modulus. Generates the
    /// multiplicative group exactly when the context is primitive.
    pub fn generator(&self) -> FieldElem {
        let r = x_residue(&self.modulus, self.p);
        self.poly_to_elem(r)
    }

    fn poly_to_elem(&self, mut v: Vec<u64>) -> FieldElem {
        v.resize(self.e as usize, 0);
        FieldElem { coeffs: v }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| fp_add(x, y, self.p))
            .collect();
        Ok(FieldElem { coeffs })
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| fp_sub(x, y, self.p))
            .collect();
        Ok(FieldElem { coeffs })
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.poly_to_elem(poly_mod_mul(&a.coeffs, &b.coeffs, &self.modulus, self.p)))
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let v = poly_mod_inv(&a.coeffs, &self.modulus, self.p)
            .expect("nonzero element of a field is invertible");
        Ok(self.poly_to_elem(v))
    }

    pub fn pow(&self, a: &FieldElem, exp: u128) -> Result<FieldElem> {
        self.check(a)?;
        Ok(self.poly_to_elem(poly_mod_pow(&a.coeffs, exp, &self.modulus, self.p)))
    }

    /// Multiplicative order of a nonzero element, computed from the
    /// factorization of `p^e - 1`.
    pub fn order_of(&self, a: &FieldElem) -> Result<u128> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut t = self.group_order;
        for &(q, f) in &self.group_order_factors {
            for _ in 0..f {
                if t % q == 0 && self.pow(a, t / q)? == self.one() {
                    t /= q;
                } else {
                    break;
                }
            }
        }
        Ok(t)
    }

    /// Discrete logarithm: the unique `i` in `[0, p^e - 1)` with
    /// `g^i = h`, for `g` a generator of the multiplicative group.
    ///
    /// Pohlig-Hellman over the prime-power parts of the group order,
    /// baby-step giant-step inside each prime-order subgroup, CRT
    /// recombination.
    pub fn discrete_log(&self, g: &FieldElem, h: &FieldElem) -> Result<u128> {
        self.check(g)?;
        self.check(h)?;
        if g.is_zero() || h.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = self.group_order;
        let mut residues: Vec<(u128, u128)> = Vec::new();
        for &(q, f) in &self.group_order_factors {
            let m = q.pow(f);
            let g_i = self.pow(g, n / m)?;
            let h_i = self.pow(h, n / m)?;
            let x = self.prime_power_log(&g_i, &h_i, q, f)?;
            residues.push((x, m));
        }
        crt(&residues)
    }

    /// Digit-by-digit log in the subgroup of order `q^f`.
    fn prime_power_log(&self, g: &FieldElem, h: &FieldElem, q: u128, f: u32) -> Result<u128> {
        let gamma = self.pow(g, q.pow(f - 1))?;
        let g_inv = self.inv(g)?;
        let mut x: u128 = 0;
        let mut qj: u128 = 1;
        for j in 0..f {
            let shifted = self.mul(h, &self.pow(&g_inv, x)?)?;
            let target = self.pow(&shifted, q.pow(f - 1 - j))?;
            let d = self.subgroup_log(&gamma, &target, q)?;
            x += d * qj;
            if j + 1 < f {
                qj *= q;
            }
        }
        Ok(x)
    }

    /// Baby-step giant-step in the subgroup of prime order `q`.
    fn subgroup_log(&self, gamma: &FieldElem, target: &FieldElem, q: u128) -> Result<u128> {
        let one = self.one();
        if *target == one {
            return Ok(0);
        }
        let m = isqrt(q) + 1;
        let mut table: HashMap<Vec<u64>, u128> = HashMap::with_capacity(m as usize);
        let mut cur = one;
        for j in 0..m {
            table.entry(cur.coeffs.clone()).or_insert(j);
            cur = self.mul(&cur, gamma)?;
        }
        let giant = self.inv(&self.pow(gamma, m)?)?;
        let mut cur = target.clone();
        for i in 0..=m {
            if let Some(&j) = table.get(&cur.coeffs) {
                return Ok((i * m + j) % q);
            }
            cur = self.mul(&cur, &giant)?;
        }
        Err(Error::LogNotFound)
    }
}

/// Chinese remainder recombination for pairwise coprime moduli.
fn crt(residues: &[(u128, u128)]) -> Result<u128> {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, mi) in residues {
        // solve x + m*t == r (mod mi)
        let inv = mod_inv(m % mi, mi).ok_or(Error::LogNotFound)?;
        let diff = if r % mi >= x % mi {
            r % mi - x % mi
        } else {
            mi - (x % mi - r % mi)
        };
        let t = mul_mod(diff, inv, mi);
        x += m * t;
        m *= mi;
    }
    Ok(x)
}
