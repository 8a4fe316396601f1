//! Points of the Grassmannian `G_q(k, n)` and constant-dimension codes.
//!
//! A subspace is stored by its unique reduced-row-echelon basis, so two
//! values are equal exactly when they are the same subspace. Distances
//! use the subspace metric `d(U, V) = dim U + dim V - 2 dim(U ∩ V)`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::finite_field::{fp_add, fp_mul};
use crate::fq_matrix::FqMatrix;

/// Largest ambient vector space (`q^n`) that coverage checks will
/// enumerate.
const COVERAGE_LIMIT: u128 = 1 << 24;

/// A `k`-dimensional subspace of `F_p^n` in canonical basis form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: FqMatrix,
}

impl Subspace {
    /// Canonical representative of the row space. The rows must be
    /// linearly independent.
    pub fn canonicalize(rows: &FqMatrix) -> Result<Self> {
        let r = rows.rref();
        if r.rank < rows.rows() {
            return Err(Error::RankDeficient);
        }
        Ok(Subspace { basis: r.matrix })
    }

    /// Span of possibly dependent rows; zero rows are dropped.
    pub fn spanned_by(rows: &FqMatrix) -> Result<Self> {
        let r = rows.rref();
        if r.rank == 0 {
            return Err(Error::RankDeficient);
        }
        let kept: Vec<Vec<u64>> = (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect();
        let basis = FqMatrix::from_rows(rows.characteristic(), &kept)?;
        Ok(Subspace { basis })
    }

    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn characteristic(&self) -> u64 {
        self.basis.characteristic()
    }

    /// Image under an invertible ambient transform: `canonical(U * A)`.
    pub fn apply(&self, a: &FqMatrix) -> Result<Subspace> {
        Subspace::canonicalize(&self.basis.mul(a)?)
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient() != other.ambient() || self.characteristic() != other.characteristic() {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.characteristic(),
                self.ambient(),
                other.characteristic(),
                other.ambient()
            )));
        }
        Ok(())
    }

    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_compatible(other)?;
        let stacked = FqMatrix::vstack(&self.basis, &other.basis)?;
        Ok(self.dim() + other.dim() - stacked.rank())
    }

    /// Subspace distance `dim U + dim V - 2 dim(U ∩ V)`.
    pub fn distance(&self, other: &Subspace) -> Result<usize> {
        let inter = self.intersection_dim(other)?;
        Ok(self.dim() + other.dim() - 2 * inter)
    }

    pub fn contains_vector(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.ambient() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient()
            )));
        }
        let vm = FqMatrix::from_rows(self.characteristic(), &[v.to_vec()])?;
        let stacked = FqMatrix::vstack(&self.basis, &vm)?;
        Ok(stacked.rank() == self.dim())
    }

    /// All `q^k - 1` nonzero vectors, in ascending order of the base-`q`
    /// coefficient vector over the basis rows.
    pub fn nonzero_vectors(&self) -> Vec<Vec<u64>> {
        let q = self.characteristic();
        let k = self.dim();
        let n = self.ambient();
        let total = (q as u128).pow(k as u32);
        let mut out = Vec::with_capacity((total - 1) as usize);
        for idx in 1..total {
            let mut v = vec![0u64; n];
            let mut rest = idx;
            for r in 0..k {
                let c = (rest % q as u128) as u64;
                rest /= q as u128;
                if c == 0 {
                    continue;
                }
                for (j, entry) in v.iter_mut().enumerate() {
                    *entry = fp_add(*entry, fp_mul(c, self.basis.get(r, j), q), q);
                }
            }
            out.push(v);
        }
        out
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.basis.to_text())
    }
}

/// Why a code failed the spread axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpreadFailure {
    Cardinality {
        expected: u128,
        actual: u128,
    },
    Intersection {
        first: usize,
        second: usize,
        dim: usize,
    },
    Uncovered {
        vector: Vec<u64>,
    },
}

impl fmt::Display for SpreadFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpreadFailure::Cardinality { expected, actual } => {
                write!(f, "cardinality {actual}, a spread needs {expected}")
            }
            SpreadFailure::Intersection { first, second, dim } => write!(
                f,
                "codewords {first} and {second} intersect in dimension {dim}"
            ),
            SpreadFailure::Uncovered { vector } => {
                let parts: Vec<String> = vector.iter().map(|v| v.to_string()).collect();
                write!(f, "vector ({}) not covered", parts.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpreadVerdict {
    Spread,
    NotSpread(SpreadFailure),
}

impl SpreadVerdict {
    pub fn is_spread(&self) -> bool {
        matches!(self, SpreadVerdict::Spread)
    }
}

/// A constant-dimension subspace code: distinct codewords sharing
/// `(k, n, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceCode {
    dim: usize,
    ambient: usize,
    p: u64,
    words: Vec<Subspace>,
    label: Option<String>,
}

impl SubspaceCode {
    pub fn new(dim: usize, ambient: usize, p: u64) -> Self {
        SubspaceCode {
            dim,
            ambient,
            p,
            words: Vec::new(),
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn push(&mut self, word: Subspace) -> Result<()> {
        if word.dim() != self.dim
            || word.ambient() != self.ambient
            || word.characteristic() != self.p
        {
            return Err(Error::DimensionMismatch(format!(
                "codeword from G_{}({}, {}) in a G_{}({}, {}) code",
                word.characteristic(),
                word.dim(),
                word.ambient(),
                self.p,
                self.dim,
                self.ambient
            )));
        }
        if self.words.contains(&word) {
            return Err(Error::InvalidParameter("duplicate codeword".into()));
        }
        self.words.push(word);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Subspace] {
        &self.words
    }

    pub fn get(&self, i: usize) -> Option<&Subspace> {
        self.words.get(i)
    }

    pub fn position(&self, word: &Subspace) -> Option<usize> {
        self.words.iter().position(|w| w == word)
    }

    /// Exact minimum of all pairwise distances. Needs two codewords.
    pub fn min_distance(&self) -> Result<usize> {
        if self.words.len() < 2 {
            return Err(Error::InvalidParameter(
                "minimum distance needs at least two codewords".into(),
            ));
        }
        let mut best = usize::MAX;
        for i in 0..self.words.len() {
            for j in i + 1..self.words.len() {
                best = best.min(self.words[i].distance(&self.words[j])?);
            }
        }
        Ok(best)
    }

    /// Check the spread axioms: expected cardinality, pairwise trivial
    /// intersection, and coverage of every nonzero ambient vector.
    pub fn verify_spread(&self) -> Result<SpreadVerdict> {
        let q = self.p as u128;
        let ambient_count =
            q.checked_pow(self.ambient as u32)
                .ok_or(Error::EnumerationTooLarge {
                    count: u128::MAX,
                    limit: COVERAGE_LIMIT,
                })?;
        if ambient_count > COVERAGE_LIMIT {
            return Err(Error::EnumerationTooLarge {
                count: ambient_count,
                limit: COVERAGE_LIMIT,
            });
        }
        let expected = (ambient_count - 1) / (q.pow(self.dim as u32) - 1);
        if self.words.len() as u128 != expected {
            return Ok(SpreadVerdict::NotSpread(SpreadFailure::Cardinality {
                expected,
                actual: self.words.len() as u128,
            }));
        }
        for i in 0..self.words.len() {
            for j in i + 1..self.words.len() {
                let d = self.words[i].intersection_dim(&self.words[j])?;
                if d != 0 {
                    return Ok(SpreadVerdict::NotSpread(SpreadFailure::Intersection {
                        first: i,
                        second: j,
                        dim: d,
                    }));
                }
            }
        }
        // mark each covered vector by its base-q index
        let mut covered = vec![false; ambient_count as usize];
        for w in &self.words {
            for v in w.nonzero_vectors() {
                let mut idx: u128 = 0;
                for &c in v.iter().rev() {
                    idx = idx * q + c as u128;
                }
                covered[idx as usize] = true;
            }
        }
        if let Some(missing) = (1..ambient_count).find(|&i| !covered[i as usize]) {
            let mut v = Vec::with_capacity(self.ambient);
            let mut rest = missing;
            for _ in 0..self.ambient {
                v.push((rest % q) as u64);
                rest /= q;
            }
            return Ok(SpreadVerdict::NotSpread(SpreadFailure::Uncovered {
                vector: v,
            }));
        }
        Ok(SpreadVerdict::Spread)
    }

    /// Index of a codeword at minimum subspace distance from `received`,
    /// ties broken by the lowest index.
    pub fn nearest(&self, received: &Subspace) -> Result<usize> {
        if self.words.is_empty() {
            return Err(Error::InvalidParameter(
                "decoding over an empty code".into(),
            ));
        }
        let mut best = 0;
        let mut best_d = usize::MAX;
        for (i, w) in self.words.iter().enumerate() {
            let d = w.distance(received)?;
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        Ok(best)
    }

    /// Like [`nearest`](Self::nearest) but also reports the distance and
    /// how many codewords attain it.
    pub fn nearest_with_stats(&self, received: &Subspace) -> Result<(usize, usize, usize)> {
        if self.words.is_empty() {
            return Err(Error::InvalidParameter(
                "decoding over an empty code".into(),
            ));
        }
        let mut best = 0;
        let mut best_d = usize::MAX;
        let mut count = 0;
        for (i, w) in self.words.iter().enumerate() {
            let d = w.distance(received)?;
            if d < best_d {
                best_d = d;
                best = i;
                count = 1;
            } else if d == best_d {
                count += 1;
            }
        }
        Ok((best, best_d, count))
    }

    /// Code text format: a `k n p count` header, then one matrix block
    /// per codeword separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {} {}\n",
            self.dim,
            self.ambient,
            self.p,
            self.words.len()
        );
        for w in &self.words {
            s.push('\n');
            s.push_str(&w.basis().to_text());
        }
        s
    }

    pub fn parse_text<'a, I>(lines: &mut I) -> Result<SubspaceCode>
    where
        I: Iterator<Item = &'a str>,
    {
        let header = lines
            .by_ref()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Parse("missing code header".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("bad code header: {header:?}")));
        }
        let dim: usize = parts[0]
            .parse()
            .map_err(|_| Error::Parse("bad code dimension".into()))?;
        let ambient: usize = parts[1]
            .parse()
            .map_err(|_| Error::Parse("bad ambient dimension".into()))?;
        let p: u64 = parts[2]
            .parse()
            .map_err(|_| Error::Parse("bad characteristic".into()))?;
        let count: usize = parts[3]
            .parse()
            .map_err(|_| Error::Parse("bad codeword count".into()))?;
        let mut code = SubspaceCode::new(dim, ambient, p);
        for _ in 0..count {
            let m = FqMatrix::parse_block(lines)?;
            let w = Subspace::canonicalize(&m)?;
            code.push(w)?;
        }
        Ok(code)
    }

    pub fn from_text(s: &str) -> Result<SubspaceCode> {
        let mut lines = s.lines();
        let code = Self::parse_text(&mut lines)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after code".into()));
        }
        Ok(code)
    }
}

/// Every plane of a small Grassmannian, canonical and deduplicated.
/// Intended for exhaustive metric checks at desk scale.
pub fn enumerate_grassmannian(p: u64, dim: usize, ambient: usize) -> Result<Vec<Subspace>> {
    let total = (p as u128)
        .checked_pow(ambient as u32)
        .ok_or(Error::EnumerationTooLarge {
            count: u128::MAX,
            limit: COVERAGE_LIMIT,
        })?;
    if total > COVERAGE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            count: total,
            limit: COVERAGE_LIMIT,
        });
    }
    let index_to_vec = |mut idx: u128| {
        let mut v = vec![0u64; ambient];
        for entry in v.iter_mut() {
            *entry = (idx % p as u128) as u64;
            idx /= p as u128;
        }
        v
    };
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut stack: Vec<Vec<u128>> = (1..total).map(|i| vec![i]).collect();
    while let Some(choice) = stack.pop() {
        let rows: Vec<Vec<u64>> = choice.iter().map(|&i| index_to_vec(i)).collect();
        let m = FqMatrix::from_rows(p, &rows)?;
        if m.rank() != choice.len() {
            continue;
        }
        if choice.len() == dim {
            seen.insert(Subspace::canonicalize(&m)?);
            continue;
        }
        for next in choice.last().unwrap() + 1..total {
            let mut c = choice.clone();
            c.push(next);
            stack.push(c);
        }
    }
    let mut out: Vec<Subspace> = seen.into_iter().collect();
    out.sort_by(|a, b| a.basis().row_vecs().cmp(&b.basis().row_vecs()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(p: u64, rows: &[Vec<u64>]) -> Subspace {
        Subspace::canonicalize(&FqMatrix::from_rows(p, rows).unwrap()).unwrap()
    }

    #[test]
    fn canonicalize_sorts_rows_into_rref() {
        let s = sub(2, &[vec![0, 1, 1, 0], vec![1, 0, 0, 0]]);
        assert_eq!(
            s.basis().row_vecs(),
            vec![vec![1, 0, 0, 0], vec![0, 1, 1, 0]]
        );
    }

    #[test]
    fn canonicalize_is_invariant_under_row_operations() {
        let a = sub(2, &[vec![1, 1, 0, 0], vec![0, 1, 1, 0]]);
        let b = sub(2, &[vec![1, 0, 1, 0], vec![0, 1, 1, 0]]);
        assert_eq!(a, b);
    }

    #[test]
    fn canonicalize_rejects_dependent_rows() {
        let m = FqMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(
            Subspace::canonicalize(&m),
            Err(Error::RankDeficient)
        ));
        assert_eq!(Subspace::spanned_by(&m).unwrap().dim(), 1);
    }

    #[test]
    fn distance_examples() {
        let u = sub(2, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let v = sub(2, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        assert_eq!(u.distance(&u).unwrap(), 0);
        assert_eq!(u.distance(&v).unwrap(), 4);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let u = sub(2, &[vec![1, 0]]);
        let v = sub(2, &[vec![1, 0, 0]]);
        assert!(u.distance(&v).is_err());
    }

    #[test]
    fn planes_sharing_a_line_have_distance_two() {
        let u = sub(2, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let v = sub(2, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]);
        assert_eq!(u.distance(&v).unwrap(), 2);
        let mut code = SubspaceCode::new(2, 4, 2);
        code.push(u).unwrap();
        code.push(v).unwrap();
        assert_eq!(code.min_distance().unwrap(), 2);
    }

    #[test]
    fn nonzero_vector_enumeration_counts() {
        let u = sub(2, &[vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        let vs = u.nonzero_vectors();
        assert_eq!(vs.len(), 3);
        for v in &vs {
            assert!(u.contains_vector(v).unwrap());
        }
    }

    #[test]
    fn duplicate_codewords_are_rejected() {
        let u = sub(2, &[vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        let mut code = SubspaceCode::new(2, 4, 2);
        code.push(u.clone()).unwrap();
        assert!(code.push(u).is_err());
    }

    #[test]
    fn grassmannian_2_4_has_35_planes() {
        let planes = enumerate_grassmannian(2, 2, 4).unwrap();
        assert_eq!(planes.len(), 35);
    }

    #[test]
    fn decoder_prefers_lowest_index_on_ties() {
        let mut code = SubspaceCode::new(2, 4, 2);
        code.push(sub(2, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]))
            .unwrap();
        code.push(sub(2, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]))
            .unwrap();
        // equidistant line
        let r = sub(2, &[vec![1, 0, 1, 0]]);
        let (idx, d, ties) = code.nearest_with_stats(&r).unwrap();
        assert_eq!(idx, 0);
        assert_eq!(d, 3);
        assert_eq!(ties, 2);
        assert_eq!(code.nearest(&r).unwrap(), 0);
    }

    #[test]
    fn code_text_round_trip() {
        let mut code = SubspaceCode::new(2, 4, 2);
        code.push(sub(2, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]))
            .unwrap();
        code.push(sub(2, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]))
            .unwrap();
        let text = code.to_text();
        let back = SubspaceCode::from_text(&text).unwrap();
        assert_eq!(back, code);
        assert_eq!(back.to_text(), text);
    }
}
