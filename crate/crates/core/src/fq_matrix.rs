//! Dense matrices over a prime field `F_p`.
//!
//! Row-vector convention throughout: vectors multiply matrices from the
//! left (`v * M`), and subspaces act on the right (`U * A`). Entries are
//! stored row-major as residues in `[0, p)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::finite_field::{
    self, fp_add, fp_inv, fp_mul, fp_sub, is_prime, poly_is_irreducible, poly_is_primitive,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

/// Result of a reduced-row-echelon-form computation.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: FqMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Outcome of a similarity search between two cyclic matrices.
#[derive(Debug, Clone)]
pub enum Similarity {
    /// `T` with `Q = T^-1 * P * T`.
    Similar(FqMatrix),
    NotSimilar,
}

impl FqMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Result<Self> {
        if !is_prime(p as u128) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        Ok(FqMatrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        })
    }

    pub fn identity(p: u64, n: usize) -> Result<Self> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut m = Self::zeros(p, rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= p {
                    return Err(Error::InvalidParameter(format!(
                        "entry {v} outside [0, {p})"
                    )));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn check_same_field(&self, other: &FqMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::DimensionMismatch(format!(
                "different characteristics {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (o, &v) in out.entries.iter_mut().zip(&other.entries) {
            *o = fp_add(*o, v, self.p);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> FqMatrix {
        let c = c % self.p;
        let mut out = self.clone();
        for o in &mut out.entries {
            *o = fp_mul(*o, c, self.p);
        }
        out
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FqMatrix::zeros(self.p, self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = fp_add(out.get(i, j), fp_mul(a, other.get(k, j), self.p), self.p);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// `self^exp` by repeated squaring. `exp = 0` gives the identity.
    pub fn pow(&self, mut exp: u128) -> Result<FqMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("pow of non-square matrix".into()));
        }
        let mut acc = FqMatrix::identity(self.p, self.rows)?;
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// The unique reduced row echelon form, with rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(pr, j));
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = fp_inv(m.get(r, c), p);
            for j in 0..m.cols {
                m.set(r, j, fp_mul(m.get(r, j), inv, p));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = fp_sub(m.get(i, j), fp_mul(f, m.get(r, j), p), p);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Inverse of a square full-rank matrix via Gauss-Jordan on `[M | I]`.
    pub fn inv(&self) -> Result<FqMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut aug = FqMatrix::zeros(self.p, n, 2 * n)?;
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let red = aug.rref();
        // left half must reduce to the identity
        for i in 0..n {
            for j in 0..n {
                if red.matrix.get(i, j) != u64::from(i == j) {
                    return Err(Error::Singular);
                }
            }
        }
        let mut out = FqMatrix::zeros(self.p, n, n)?;
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, red.matrix.get(i, n + j));
            }
        }
        Ok(out)
    }

    /// Least `t > 0` with `M^t = I`, searching up to `cap` multiplications.
    ///
    /// When the characteristic polynomial is primitive of degree `n` the
    /// order is `p^n - 1` and is returned without iterating.
    pub fn order(&self, cap: u128) -> Result<u128> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "order of non-square matrix".into(),
            ));
        }
        if self.rank() != self.rows {
            return Err(Error::Singular);
        }
        if self.is_identity() {
            return Ok(1);
        }
        let cp = self.charpoly();
        if poly_is_irreducible(&cp, self.p) && poly_is_primitive(&cp, self.p)? {
            return finite_field::group_order(self.p, self.rows as u32);
        }
        let mut cur = self.clone();
        let mut t: u128 = 1;
        while !cur.is_identity() {
            cur = cur.mul(self)?;
            t += 1;
            if t > cap {
                return Err(Error::OrderCapExceeded { cap });
            }
        }
        Ok(t)
    }

    /// Characteristic polynomial `det(xI - M)`, monic, constant term first.
    ///
    /// The matrix is first brought to upper Hessenberg form by similarity
    /// transformations, then the polynomial follows from the standard
    /// leading-minor recurrence.
    pub fn charpoly(&self) -> Vec<u64> {
        assert!(self.is_square(), "charpoly of non-square matrix");
        let n = self.rows;
        let p = self.p;
        let mut h = self.clone();
        // Hessenberg reduction
        for c in 0..n.saturating_sub(2) {
            let Some(pr) = (c + 1..n).find(|&i| h.get(i, c) != 0) else {
                continue;
            };
            if pr != c + 1 {
                // swap rows and matching columns
                for j in 0..n {
                    let (a, b) = (h.get(c + 1, j), h.get(pr, j));
                    h.set(c + 1, j, b);
                    h.set(pr, j, a);
                }
                for i in 0..n {
                    let (a, b) = (h.get(i, c + 1), h.get(i, pr));
                    h.set(i, c + 1, b);
                    h.set(i, pr, a);
                }
            }
            let inv = fp_inv(h.get(c + 1, c), p);
            for i in c + 2..n {
                let f = fp_mul(h.get(i, c), inv, p);
                if f == 0 {
                    continue;
                }
                // row_i -= f * row_{c+1}; col_{c+1} += f * col_i
                for j in 0..n {
                    let v = fp_sub(h.get(i, j), fp_mul(f, h.get(c + 1, j), p), p);
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = fp_add(h.get(r, c + 1), fp_mul(f, h.get(r, i), p), p);
                    h.set(r, c + 1, v);
                }
            }
        }
        // p_i(x) = (x - h_ii) p_{i-1} - sum_{r<i} h_{r,i} (prod subdiag) p_{r-1}
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for i in 1..=n {
            let hii = h.get(i - 1, i - 1);
            let prev = &polys[i - 1];
            // (x - h_ii) * prev
            let mut cur = vec![0u64; prev.len() + 1];
            for (d, &c) in prev.iter().enumerate() {
                cur[d + 1] = fp_add(cur[d + 1], c, p);
                cur[d] = fp_sub(cur[d], fp_mul(hii, c, p), p);
            }
            let mut prod = 1u64;
            for r in (1..i).rev() {
                // r runs over rows above i; extend the subdiagonal product
                prod = fp_mul(prod, h.get(r, r - 1), p);
                if prod == 0 {
                    break;
                }
                let coeff = fp_mul(h.get(r - 1, i - 1), prod, p);
                if coeff == 0 {
                    continue;
                }
                for (d, &c) in polys[r - 1].iter().enumerate() {
                    cur[d] = fp_sub(cur[d], fp_mul(coeff, c, p), p);
                }
            }
            polys.push(cur);
        }
        polys.pop().unwrap()
    }

    /// Copy of the rectangle `[r0, r1) x [c0, c1)`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Result<FqMatrix> {
        if r1 > self.rows || c1 > self.cols || r0 >= r1 || c0 >= c1 {
            return Err(Error::DimensionMismatch(format!(
                "submatrix [{r0}, {r1}) x [{c0}, {c1}) of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut out = FqMatrix::zeros(self.p, r1 - r0, c1 - c0)?;
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j));
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation of equally tall blocks.
    pub fn hstack(blocks: &[&FqMatrix]) -> Result<FqMatrix> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidParameter("hstack of nothing".into()))?;
        let rows = first.rows;
        let p = first.p;
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = FqMatrix::zeros(p, rows, cols)?;
        let mut off = 0;
        for b in blocks {
            first.check_same_field(b)?;
            if b.rows != rows {
                return Err(Error::DimensionMismatch(
                    "hstack with unequal heights".into(),
                ));
            }
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j));
                }
            }
            off += b.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(top: &FqMatrix, bottom: &FqMatrix) -> Result<FqMatrix> {
        top.check_same_field(bottom)?;
        if top.cols != bottom.cols {
            return Err(Error::DimensionMismatch(
                "vstack with unequal widths".into(),
            ));
        }
        let mut out = FqMatrix::zeros(top.p, top.rows + bottom.rows, top.cols)?;
        for i in 0..top.rows {
            for j in 0..top.cols {
                out.set(i, j, top.get(i, j));
            }
        }
        for i in 0..bottom.rows {
            for j in 0..bottom.cols {
                out.set(top.rows + i, j, bottom.get(i, j));
            }
        }
        Ok(out)
    }

    /// Matrix text format: a `p rows cols` header line, then one line per
    /// row with base-10 entries separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.p, self.rows, self.cols);
        for r in 0..self.rows {
            let parts: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(s: &str) -> Result<FqMatrix> {
        let mut lines = s.lines();
        let m = Self::parse_block(&mut lines)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after matrix".into()));
        }
        Ok(m)
    }

    /// Consume one matrix block (header + rows) from a line iterator,
    /// skipping leading blank lines.
    pub fn parse_block<'a, I>(lines: &mut I) -> Result<FqMatrix>
    where
        I: Iterator<Item = &'a str>,
    {
        let header = lines
            .by_ref()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Parse("missing matrix header".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad matrix header: {header:?}")));
        }
        let p: u64 = parts[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad characteristic: {}", parts[0])))?;
        let rows: usize = parts[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad row count: {}", parts[1])))?;
        let cols: usize = parts[2]
            .parse()
            .map_err(|_| Error::Parse(format!("bad column count: {}", parts[2])))?;
        let mut data = Vec::with_capacity(rows);
        for _ in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("matrix block ended early".into()))?;
            let row: std::result::Result<Vec<u64>, _> =
                line.split_whitespace().map(|t| t.parse::<u64>()).collect();
            let row = row.map_err(|_| Error::Parse(format!("bad matrix row: {line:?}")))?;
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "expected {cols} entries per row, got {}",
                    row.len()
                )));
            }
            data.push(row);
        }
        Self::from_rows(p, &data)
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Multiply a row vector by a matrix (`v * M`).
pub fn row_mul(v: &[u64], m: &FqMatrix) -> Result<Vec<u64>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "row of length {} times {}x{}",
            v.len(),
            m.rows(),
            m.cols()
        )));
    }
    let p = m.characteristic();
    let mut out = vec![0u64; m.cols()];
    for (k, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o = fp_add(*o, fp_mul(a, m.get(k, j), p), p);
        }
    }
    Ok(out)
}

/// Row-Krylov basis `[v; vM; ...; vM^{n-1}]` for the first standard basis
/// vector that yields full rank.
fn krylov_basis(m: &FqMatrix) -> Result<FqMatrix> {
    let n = m.rows();
    for seed in 0..n {
        let mut v = vec![0u64; n];
        v[seed] = 1;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            rows.push(v.clone());
            v = row_mul(&v, m)?;
        }
        let k = FqMatrix::from_rows(m.characteristic(), &rows)?;
        if k.rank() == n {
            return Ok(k);
        }
    }
    Err(Error::NonCyclic)
}

/// Search for `T` with `Q = T^-1 * P * T`.
///
/// Both matrices must be cyclic (characteristic polynomial equal to the
/// minimal polynomial), which holds for the companion-type generators
/// used in this crate. Distinct characteristic polynomials give
/// `NotSimilar`; matching ones give a transform built from row Krylov
/// bases, verified by multiplication before returning.
pub fn similarity_to(p_mat: &FqMatrix, q_mat: &FqMatrix) -> Result<Similarity> {
    p_mat.check_same_field(q_mat)?;
    if !p_mat.is_square() || !q_mat.is_square() || p_mat.rows() != q_mat.rows() {
        return Err(Error::DimensionMismatch(
            "similarity needs square matrices of equal size".into(),
        ));
    }
    if p_mat.charpoly() != q_mat.charpoly() {
        return Ok(Similarity::NotSimilar);
    }
    let s = krylov_basis(p_mat)?;
    let r = krylov_basis(q_mat)?;
    let t = s.inv()?.mul(&r)?;
    let check = t.inv()?.mul(p_mat)?.mul(&t)?;
    if &check != q_mat {
        return Err(Error::VerificationFailed(
            "similarity transform does not conjugate P to Q".into(),
        ));
    }
    Ok(Similarity::Similar(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::companion_matrix;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn p_ex1() -> FqMatrix {
        companion_matrix(&[1, 1, 1], 2).unwrap()
    }

    fn gen_ex2() -> FqMatrix {
        companion_matrix(&[1, 1, 0, 0, 1], 2).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = gen_ex2();
        let i = FqMatrix::identity(2, 4).unwrap();
        assert_eq!(i.mul(&a).unwrap(), a);
        assert_eq!(a.mul(&i).unwrap(), a);
    }

    #[test]
    fn primitive_companion_cubes_to_identity() {
        let p = p_ex1();
        let cube = p.mul(&p).unwrap().mul(&p).unwrap();
        assert!(cube.is_identity());
        assert_eq!(p.pow(3).unwrap(), cube);
    }

    #[test]
    fn inverse_contract() {
        let a = FqMatrix::from_rows(
            2,
            &[
                vec![1, 0, 0, 0],
                vec![0, 1, 1, 0],
                vec![1, 1, 0, 0],
                vec![0, 1, 0, 1],
            ],
        )
        .unwrap();
        let inv = a.inv().unwrap();
        assert!(inv.mul(&a).unwrap().is_identity());
        assert!(a.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = FqMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(a.inv(), Err(Error::Singular)));
    }

    #[test]
    fn rref_examples() {
        let i = FqMatrix::identity(2, 3).unwrap();
        let r = i.rref();
        assert_eq!(r.matrix, i);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let m = FqMatrix::from_rows(2, &[vec![0, 1, 1, 0], vec![1, 0, 0, 0]]).unwrap();
        let r = m.rref();
        assert_eq!(
            r.matrix,
            FqMatrix::from_rows(2, &[vec![1, 0, 0, 0], vec![0, 1, 1, 0]]).unwrap()
        );
        assert_eq!(r.rank, 2);

        let m = FqMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let r = m.rref();
        assert_eq!(
            r.matrix,
            FqMatrix::from_rows(2, &[vec![1, 1], vec![0, 0]]).unwrap()
        );
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn order_examples() {
        let i = FqMatrix::identity(2, 3).unwrap();
        assert_eq!(i.order(10).unwrap(), 1);
        assert_eq!(p_ex1().order(10).unwrap(), 3);
        assert_eq!(gen_ex2().order(100).unwrap(), 15);
    }

    #[test]
    fn order_cap_is_enforced() {
        // x^2 + 1 over F_3 is irreducible but not primitive: order 4
        let m = companion_matrix(&[1, 0, 1], 3).unwrap();
        assert_eq!(m.order(10).unwrap(), 4);
        assert!(matches!(
            m.order(3),
            Err(Error::OrderCapExceeded { cap: 3 })
        ));
    }

    #[test]
    fn charpoly_of_companion_is_the_polynomial() {
        for f in [
            vec![1u64, 1, 1],
            vec![1, 1, 0, 0, 1],
            vec![1, 1],
            vec![1, 0, 1, 1],
        ] {
            let m = companion_matrix(&f, 2).unwrap();
            assert_eq!(m.charpoly(), f);
        }
        for f in [vec![1u64, 2, 1], vec![2, 0, 1, 1]] {
            let m = companion_matrix(&f, 3).unwrap();
            assert_eq!(m.charpoly(), f);
        }
    }

    #[test]
    fn charpoly_of_identity() {
        // (x + 1)^2 = x^2 + 1 over F_2
        let i = FqMatrix::identity(2, 2).unwrap();
        assert_eq!(i.charpoly(), vec![1, 0, 1]);
    }

    fn poly_from_counter(mut v: u128, p: u64, deg: u32) -> Vec<u64> {
        let mut f = Vec::with_capacity(deg as usize + 1);
        for _ in 0..deg {
            f.push((v % p as u128) as u64);
            v /= p as u128;
        }
        f.push(1);
        f
    }

    #[test]
    fn charpoly_companion_exhaustive_f2_to_degree_12() {
        for deg in 1..=12u32 {
            for v in 0..(1u128 << deg) {
                let f = poly_from_counter(v, 2, deg);
                assert_eq!(companion_matrix(&f, 2).unwrap().charpoly(), f);
            }
        }
    }

    #[test]
    fn charpoly_companion_f3_exhaustive_then_sampled() {
        for deg in 1..=5u32 {
            for v in 0..3u128.pow(deg) {
                let f = poly_from_counter(v, 3, deg);
                assert_eq!(companion_matrix(&f, 3).unwrap().charpoly(), f);
            }
        }
        let mut rng = StdRng::seed_from_u64(3);
        for deg in 6..=12u32 {
            for _ in 0..100 {
                let v = rng.random_range(0..3u128.pow(deg));
                let f = poly_from_counter(v, 3, deg);
                assert_eq!(companion_matrix(&f, 3).unwrap().charpoly(), f);
            }
        }
    }

    #[test]
    fn order_divides_group_order_for_irreducible_charpoly() {
        use crate::finite_field::poly_is_irreducible;
        let mut rng = StdRng::seed_from_u64(5);
        let mut tested = 0;
        while tested < 25 {
            let m = random_invertible(2, 4, &mut rng);
            if !poly_is_irreducible(&m.charpoly(), 2) {
                continue;
            }
            let order = m.order(100).unwrap();
            assert_eq!(15 % order, 0, "order {order} must divide 2^4 - 1");
            tested += 1;
        }
    }

    fn random_invertible(p: u64, n: usize, rng: &mut StdRng) -> FqMatrix {
        loop {
            let rows: Vec<Vec<u64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(0..p)).collect())
                .collect();
            let m = FqMatrix::from_rows(p, &rows).unwrap();
            if m.rank() == n {
                return m;
            }
        }
    }

    #[test]
    fn similarity_self_and_conjugate() {
        let p = gen_ex2();
        match similarity_to(&p, &p).unwrap() {
            Similarity::Similar(t) => {
                assert_eq!(t.inv().unwrap().mul(&p).unwrap().mul(&t).unwrap(), p)
            }
            Similarity::NotSimilar => panic!("matrix must be similar to itself"),
        }

        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let x = random_invertible(2, 4, &mut rng);
            let q = x.inv().unwrap().mul(&p).unwrap().mul(&x).unwrap();
            match similarity_to(&p, &q).unwrap() {
                Similarity::Similar(t) => {
                    assert_eq!(t.inv().unwrap().mul(&p).unwrap().mul(&t).unwrap(), q)
                }
                Similarity::NotSimilar => panic!("conjugates must be similar"),
            }
        }
    }

    #[test]
    fn similarity_rejects_distinct_charpolys() {
        let p = companion_matrix(&[1, 1, 0, 0, 1], 2).unwrap();
        let q = companion_matrix(&[1, 0, 0, 1, 1], 2).unwrap();
        assert!(matches!(
            similarity_to(&p, &q).unwrap(),
            Similarity::NotSimilar
        ));
    }

    #[test]
    fn text_format_round_trip() {
        let m = gen_ex2();
        let text = m.to_text();
        assert!(text.starts_with("2 4 4\n"));
        assert_eq!(FqMatrix::from_text(&text).unwrap(), m);
    }

    proptest! {
        #[test]
        fn rref_is_idempotent_and_preserves_row_space(
            seed in 0u64..1000,
            rows in 1usize..5,
            cols in 1usize..6,
            p in prop::sample::select(vec![2u64, 3, 5]),
        ) {
            let mut rng = StdRng::seed_from_u64(seed);
            let data: Vec<Vec<u64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(0..p)).collect())
                .collect();
            let m = FqMatrix::from_rows(p, &data).unwrap();
            let r = m.rref();
            let again = r.matrix.rref();
            prop_assert_eq!(&again.matrix, &r.matrix);
            prop_assert_eq!(again.rank, r.rank);
            // row space preserved: stacking changes nothing
            let stacked = FqMatrix::vstack(&m, &r.matrix).unwrap();
            prop_assert_eq!(stacked.rank(), r.rank);
        }
    }
}
