//! Python bindings for the subspace-codes library.
//!
//! Field elements cross the boundary as coefficient lists (constant term
//! first), matrices as lists of rows. The module is importable as
//! `subspace_codes` once the built `cdylib` is renamed or linked to
//! `subspace_codes.so`; see `python/smoke_test.py` at the repository
//! root.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use subspace_codes::finite_field as ff;
use subspace_codes::fq_matrix::FqMatrix;
use subspace_codes::hybrid;
use subspace_codes::orbit_codes::OrbitContext;
use subspace_codes::spread_codes::{ProjPoint, SpreadContext};
use subspace_codes::subspace::{SpreadVerdict, Subspace, SubspaceCode};
use subspace_codes::{Error, FieldContext};

fn to_py_err(err: Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// The field `F_{p^e}` with a fixed irreducible modulus.
#[pyclass(name = "Field")]
struct PyField {
    inner: FieldContext,
}

#[pymethods]
impl PyField {
    /// Build a field; the modulus defaults to the deterministically
    /// smallest primitive polynomial of degree `e`.
    #[new]
    #[pyo3(signature = (p, e, modulus=None, primitive=true))]
    fn new(p: u64, e: u32, modulus: Option<Vec<u64>>, primitive: bool) -> PyResult<Self> {
        let inner = match modulus {
            Some(m) => FieldContext::new(p, e, m),
            None => FieldContext::generate(p, e, primitive),
        }
        .map_err(to_py_err)?;
        Ok(PyField { inner })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    #[getter]
    fn modulus(&self) -> Vec<u64> {
        self.inner.modulus().to_vec()
    }

    #[getter]
    fn primitive(&self) -> bool {
        self.inner.is_primitive()
    }

    #[getter]
    fn group_order(&self) -> u128 {
        self.inner.group_order()
    }

    #[getter]
    fn group_order_factors(&self) -> Vec<(u128, u32)> {
        self.inner.group_order_factors().to_vec()
    }

    fn zero(&self) -> Vec<u64> {
        self.inner.zero().coeffs().to_vec()
    }

    fn one(&self) -> Vec<u64> {
        self.inner.one().coeffs().to_vec()
    }

    /// Residue of `x`; generates the multiplicative group when the
    /// modulus is primitive.
    fn generator(&self) -> Vec<u64> {
        self.inner.generator().coeffs().to_vec()
    }

    fn add(&self, a: Vec<u64>, b: Vec<u64>) -> PyResult<Vec<u64>> {
        let (a, b) = self.pair(a, b)?;
        Ok(self.inner.add(&a, &b).map_err(to_py_err)?.coeffs().to_vec())
    }

    fn mul(&self, a: Vec<u64>, b: Vec<u64>) -> PyResult<Vec<u64>> {
        let (a, b) = self.pair(a, b)?;
        Ok(self.inner.mul(&a, &b).map_err(to_py_err)?.coeffs().to_vec())
    }

    fn inv(&self, a: Vec<u64>) -> PyResult<Vec<u64>> {
        let a = self.elem(a)?;
        Ok(self.inner.inv(&a).map_err(to_py_err)?.coeffs().to_vec())
    }

    fn pow(&self, a: Vec<u64>, exp: u128) -> PyResult<Vec<u64>> {
        let a = self.elem(a)?;
        Ok(self
            .inner
            .pow(&a, exp)
            .map_err(to_py_err)?
            .coeffs()
            .to_vec())
    }

    fn order_of(&self, a: Vec<u64>) -> PyResult<u128> {
        let a = self.elem(a)?;
        self.inner.order_of(&a).map_err(to_py_err)
    }

    /// Pohlig-Hellman discrete logarithm: the `i` with `g^i = h`.
    fn discrete_log(&self, g: Vec<u64>, h: Vec<u64>) -> PyResult<u128> {
        let (g, h) = self.pair(g, h)?;
        self.inner.discrete_log(&g, &h).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Field(p={}, degree={}, modulus={:?})",
            self.inner.characteristic(),
            self.inner.degree(),
            self.inner.modulus()
        )
    }
}

impl PyField {
    fn elem(&self, coeffs: Vec<u64>) -> PyResult<ff::FieldElem> {
        self.inner.element(&coeffs).map_err(to_py_err)
    }

    fn pair(&self, a: Vec<u64>, b: Vec<u64>) -> PyResult<(ff::FieldElem, ff::FieldElem)> {
        Ok((self.elem(a)?, self.elem(b)?))
    }
}

/// Dense matrix over `F_p`.
#[pyclass(name = "Matrix")]
struct PyMatrix {
    inner: FqMatrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(p: u64, rows: Vec<Vec<u64>>) -> PyResult<Self> {
        Ok(PyMatrix {
            inner: FqMatrix::from_rows(p, &rows).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn identity(p: u64, n: usize) -> PyResult<Self> {
        Ok(PyMatrix {
            inner: FqMatrix::identity(p, n).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.characteristic()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.rows(), self.inner.cols())
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<u64>> {
        self.inner.row_vecs()
    }

    fn mul(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix {
            inner: self.inner.mul(&other.inner).map_err(to_py_err)?,
        })
    }

    fn add(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix {
            inner: self.inner.add(&other.inner).map_err(to_py_err)?,
        })
    }

    fn pow(&self, exp: u128) -> PyResult<PyMatrix> {
        Ok(PyMatrix {
            inner: self.inner.pow(exp).map_err(to_py_err)?,
        })
    }

    fn inv(&self) -> PyResult<PyMatrix> {
        Ok(PyMatrix {
            inner: self.inner.inv().map_err(to_py_err)?,
        })
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    /// Reduced row echelon form: `(matrix, rank, pivot_columns)`.
    fn rref(&self) -> (PyMatrix, usize, Vec<usize>) {
        let r = self.inner.rref();
        (PyMatrix { inner: r.matrix }, r.rank, r.pivots)
    }

    /// Characteristic polynomial, constant term first.
    fn charpoly(&self) -> Vec<u64> {
        self.inner.charpoly()
    }

    /// Multiplicative order, searched up to `cap` multiplications.
    #[pyo3(signature = (cap=1 << 20))]
    fn order(&self, cap: u128) -> PyResult<u128> {
        self.inner.order(cap).map_err(to_py_err)
    }

    fn __eq__(&self, other: &PyMatrix) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Matrix(p={}, rows={:?})",
            self.inner.characteristic(),
            self.inner.row_vecs()
        )
    }
}

/// A point of the Grassmannian in canonical (reduced row echelon) form.
#[pyclass(name = "Subspace")]
struct PySubspace {
    inner: Subspace,
}

#[pymethods]
impl PySubspace {
    /// Canonical subspace spanned by independent rows.
    #[new]
    fn new(p: u64, rows: Vec<Vec<u64>>) -> PyResult<Self> {
        let m = FqMatrix::from_rows(p, &rows).map_err(to_py_err)?;
        Ok(PySubspace {
            inner: Subspace::canonicalize(&m).map_err(to_py_err)?,
        })
    }

    /// Span of possibly dependent rows.
    #[staticmethod]
    fn span(p: u64, rows: Vec<Vec<u64>>) -> PyResult<Self> {
        let m = FqMatrix::from_rows(p, &rows).map_err(to_py_err)?;
        Ok(PySubspace {
            inner: Subspace::spanned_by(&m).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn basis(&self) -> Vec<Vec<u64>> {
        self.inner.basis().row_vecs()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ambient(&self) -> usize {
        self.inner.ambient()
    }

    /// Subspace distance `dim U + dim V - 2 dim(U n V)`.
    fn distance(&self, other: &PySubspace) -> PyResult<usize> {
        self.inner.distance(&other.inner).map_err(to_py_err)
    }

    fn contains(&self, vector: Vec<u64>) -> PyResult<bool> {
        self.inner.contains_vector(&vector).map_err(to_py_err)
    }

    /// Image under a right multiplication, canonicalized.
    fn apply(&self, a: &PyMatrix) -> PyResult<PySubspace> {
        Ok(PySubspace {
            inner: self.inner.apply(&a.inner).map_err(to_py_err)?,
        })
    }

    fn __eq__(&self, other: &PySubspace) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!("Subspace(basis={:?})", self.inner.basis().row_vecs())
    }
}

fn spread_report(code: &SubspaceCode) -> PyResult<(bool, Option<String>)> {
    match code.verify_spread().map_err(to_py_err)? {
        SpreadVerdict::Spread => Ok((true, None)),
        SpreadVerdict::NotSpread(failure) => Ok((false, Some(failure.to_string()))),
    }
}

/// Desarguesian spread code with point and integer message codecs.
#[pyclass(name = "SpreadCode")]
struct PySpreadCode {
    ctx: SpreadContext,
}

#[pymethods]
impl PySpreadCode {
    #[new]
    #[pyo3(signature = (q, k, m, modulus=None))]
    fn new(q: u64, k: u32, m: u32, modulus: Option<Vec<u64>>) -> PyResult<Self> {
        Ok(PySpreadCode {
            ctx: SpreadContext::new(q, k, m, modulus).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.ctx.q()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.ctx.k()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.ctx.m()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.ctx.n()
    }

    #[getter]
    fn modulus(&self) -> Vec<u64> {
        self.ctx.modulus().to_vec()
    }

    /// Size of the message set `{1, ..., (q^n-1)/(q^k-1)}`.
    #[getter]
    fn message_count(&self) -> u128 {
        self.ctx.message_count()
    }

    fn encode(&self, message: u128) -> PyResult<PySubspace> {
        Ok(PySubspace {
            inner: self.ctx.encode(message).map_err(to_py_err)?,
        })
    }

    fn decode(&self, word: &PySubspace) -> PyResult<u128> {
        self.ctx.decode(&word.inner).map_err(to_py_err)
    }

    /// Encode a projective point given as a list of coefficient lists.
    fn encode_point(&self, coords: Vec<Vec<u64>>) -> PyResult<PySubspace> {
        let elems = coords
            .iter()
            .map(|c| self.ctx.subfield().element(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py_err)?;
        let point = ProjPoint::new(elems, self.ctx.subfield()).map_err(to_py_err)?;
        Ok(PySubspace {
            inner: self.ctx.encode_point(&point).map_err(to_py_err)?,
        })
    }

    /// Decode to the normalized projective point of a codeword.
    fn decode_point(&self, word: &PySubspace) -> PyResult<Vec<Vec<u64>>> {
        let point = self.ctx.decode_point(&word.inner).map_err(to_py_err)?;
        Ok(point.coords().iter().map(|c| c.coeffs().to_vec()).collect())
    }

    fn codewords(&self) -> PyResult<Vec<PySubspace>> {
        Ok(self
            .ctx
            .codewords()
            .map_err(to_py_err)?
            .words()
            .iter()
            .map(|w| PySubspace { inner: w.clone() })
            .collect())
    }

    fn min_distance(&self) -> PyResult<usize> {
        self.ctx
            .codewords()
            .map_err(to_py_err)?
            .min_distance()
            .map_err(to_py_err)
    }

    /// `(is_spread, failure_reason)`.
    fn is_spread(&self) -> PyResult<(bool, Option<String>)> {
        spread_report(&self.ctx.codewords().map_err(to_py_err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "SpreadCode(q={}, k={}, n={})",
            self.ctx.q(),
            self.ctx.k(),
            self.ctx.n()
        )
    }
}

/// Cyclic orbit code with exponent encoding and discrete-log decoding.
#[pyclass(name = "OrbitCode")]
struct PyOrbitCode {
    ctx: OrbitContext,
}

#[pymethods]
impl PyOrbitCode {
    #[new]
    fn new(seed: &PySubspace, generator: &PyMatrix) -> PyResult<Self> {
        Ok(PyOrbitCode {
            ctx: OrbitContext::new(seed.inner.clone(), generator.inner.clone())
                .map_err(to_py_err)?,
        })
    }

    /// Subfield-seeded primitive cyclic orbit spread in `F_{q^n}`.
    #[staticmethod]
    #[pyo3(signature = (q, n, k, modulus=None))]
    fn subfield(q: u64, n: u32, k: u32, modulus: Option<Vec<u64>>) -> PyResult<Self> {
        let field = match modulus {
            Some(m) => FieldContext::new(q, n, m),
            None => FieldContext::generate(q, n, true),
        }
        .map_err(to_py_err)?;
        Ok(PyOrbitCode {
            ctx: OrbitContext::subfield(&field, k).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn seed(&self) -> PySubspace {
        PySubspace {
            inner: self.ctx.seed().clone(),
        }
    }

    #[getter]
    fn generator(&self) -> PyMatrix {
        PyMatrix {
            inner: self.ctx.generator().clone(),
        }
    }

    #[getter]
    fn orbit_len(&self) -> u128 {
        self.ctx.orbit_len()
    }

    #[getter]
    fn group_order(&self) -> u128 {
        self.ctx.group_order()
    }

    /// Whether the generator supports discrete-log decoding.
    #[getter]
    fn has_field_view(&self) -> bool {
        self.ctx.field_view().is_some()
    }

    fn encode(&self, exponent: u128) -> PyResult<PySubspace> {
        Ok(PySubspace {
            inner: self.ctx.encode(exponent).map_err(to_py_err)?,
        })
    }

    fn decode(&self, word: &PySubspace) -> PyResult<u128> {
        self.ctx.decode(&word.inner).map_err(to_py_err)
    }

    /// Stepwise decoder, independent of the discrete-log path.
    fn decode_walk(&self, word: &PySubspace) -> PyResult<u128> {
        self.ctx.decode_walk(&word.inner).map_err(to_py_err)
    }

    fn codewords(&self) -> PyResult<Vec<PySubspace>> {
        Ok(self
            .ctx
            .codewords()
            .map_err(to_py_err)?
            .words()
            .iter()
            .map(|w| PySubspace { inner: w.clone() })
            .collect())
    }

    fn is_spread(&self) -> PyResult<(bool, Option<String>)> {
        spread_report(&self.ctx.codewords().map_err(to_py_err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "OrbitCode(dim={}, ambient={}, orbit_len={})",
            self.ctx.seed().dim(),
            self.ctx.seed().ambient(),
            self.ctx.orbit_len()
        )
    }
}

/// Hybrid codec: spread message indexing, orbit channel codewords,
/// bridged by a verified linear isometry.
#[pyclass(name = "HybridCodec")]
struct PyHybridCodec {
    codec: hybrid::HybridCodec,
    channel: SubspaceCode,
}

#[pymethods]
impl PyHybridCodec {
    #[new]
    #[pyo3(signature = (q, k, m, modulus=None, modulus_n=None))]
    fn new(
        q: u64,
        k: u32,
        m: u32,
        modulus: Option<Vec<u64>>,
        modulus_n: Option<Vec<u64>>,
    ) -> PyResult<Self> {
        let codec = hybrid::HybridCodec::new(q, k, m, modulus, modulus_n).map_err(to_py_err)?;
        let channel = codec.channel_code().map_err(to_py_err)?;
        Ok(PyHybridCodec { codec, channel })
    }

    #[getter]
    fn message_count(&self) -> u128 {
        self.codec.message_count()
    }

    #[getter]
    fn isometry(&self) -> PyMatrix {
        PyMatrix {
            inner: self.codec.isometry().clone(),
        }
    }

    #[getter]
    fn isometry_inv(&self) -> PyMatrix {
        PyMatrix {
            inner: self.codec.isometry_inv().clone(),
        }
    }

    fn encode(&self, message: u128) -> PyResult<PySubspace> {
        Ok(PySubspace {
            inner: self.codec.encode(message).map_err(to_py_err)?,
        })
    }

    /// Decode an exact channel codeword.
    fn decode(&self, word: &PySubspace) -> PyResult<u128> {
        self.codec.decode(&word.inner).map_err(to_py_err)
    }

    /// Full pipeline for a possibly corrupted word: nearest codeword
    /// over the channel code, then message decoding.
    fn decode_received(&self, received: &PySubspace) -> PyResult<u128> {
        let idx = self.channel.nearest(&received.inner).map_err(to_py_err)?;
        self.codec
            .decode(
                self.channel
                    .get(idx)
                    .expect("nearest returns a valid index"),
            )
            .map_err(to_py_err)
    }

    fn channel_code(&self) -> Vec<PySubspace> {
        self.channel
            .words()
            .iter()
            .map(|w| PySubspace { inner: w.clone() })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "HybridCodec(q={}, k={}, n={}, messages={})",
            self.codec.spread().q(),
            self.codec.spread().k(),
            self.codec.spread().n(),
            self.codec.message_count()
        )
    }
}

/// Smallest monic irreducible (optionally primitive) polynomial of
/// degree `e` over `F_p`, as coefficients with the constant term first.
#[pyfunction]
#[pyo3(signature = (p, e, primitive=true))]
fn find_irreducible(p: u64, e: u32, primitive: bool) -> PyResult<Vec<u64>> {
    ff::find_irreducible(p, e, primitive).map_err(to_py_err)
}

#[pyfunction]
fn is_prime(n: u128) -> bool {
    ff::is_prime(n)
}

/// Prime factorization as `(prime, exponent)` pairs, primes ascending.
#[pyfunction]
fn factorize(n: u128) -> Vec<(u128, u32)> {
    ff::factorize(n)
}

/// Companion matrix of a monic polynomial.
#[pyfunction]
fn companion_matrix(poly: Vec<u64>, p: u64) -> PyResult<PyMatrix> {
    Ok(PyMatrix {
        inner: ff::companion_matrix(&poly, p).map_err(to_py_err)?,
    })
}

/// Smoothness rows for `2^n - 1`:
/// `(n, factors, max_prime, max_exponent, bound, smooth, note)`.
#[pyfunction]
fn smooth_table(
    ns: Vec<u32>,
) -> PyResult<Vec<(u32, Vec<(u128, u32)>, u128, u32, u128, bool, Option<String>)>> {
    let rows = subspace_codes::cli::smooth_rows(&ns).map_err(to_py_err)?;
    Ok(rows
        .into_iter()
        .map(|r| {
            (
                r.n,
                r.factors,
                r.max_prime,
                r.max_exponent,
                r.bound,
                r.smooth,
                r.reference_mismatch,
            )
        })
        .collect())
}

#[pymodule]
#[pyo3(name = "subspace_codes")]
fn module_entry(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PySubspace>()?;
    m.add_class::<PySpreadCode>()?;
    m.add_class::<PyOrbitCode>()?;
    m.add_class::<PyHybridCodec>()?;
    m.add_function(wrap_pyfunction!(find_irreducible, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(companion_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_table, m)?)?;
    Ok(())
}
