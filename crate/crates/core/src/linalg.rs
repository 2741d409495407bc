//! Dense kernels shared by every other module.
//!
//! Matrices always store complex entries; the [`Field`] tag records whether the
//! imaginary parts are meaningful. Real matrices keep `im == 0` through every
//! operation because all kernels here are closed over the reals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

const SVD_MAX_ITER: usize = 100_000;
/// Convergence threshold for the bidiagonal QR sweeps. A bare machine epsilon
/// stalls on clustered spectra and returns inaccurate factors.
const SVD_EPS: f64 = 5.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

impl Field {
    /// Smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Numerical thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Projector comparisons and isotropy residuals.
    pub proj: f64,
    /// Orthonormality of frames.
    pub ortho: f64,
    /// Relative singular value cutoff for rank decisions.
    pub rank_cutoff: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            proj: 1e-8,
            ortho: 1e-10,
            rank_cutoff: 1e-10,
        }
    }
}

impl Tolerances {
    /// Defaults with `proj` taken from `LAGCAT_TOL` when it parses as a positive float.
    pub fn from_env() -> Self {
        let mut tol = Tolerances::default();
        if let Ok(s) = std::env::var("LAGCAT_TOL") {
            if let Ok(v) = s.trim().parse::<f64>() {
                if v.is_finite() && v > 0.0 {
                    tol.proj = v;
                }
            }
        }
        tol
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    field: Field,
    data: DMatrix<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Matrix {
            field,
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        Matrix {
            field,
            data: DMatrix::identity(n, n),
        }
    }

    /// Wraps a complex matrix. Real-tagged input has its imaginary parts dropped.
    pub fn from_dmatrix(data: DMatrix<C64>, field: Field) -> Self {
        let mut m = Matrix { field, data };
        m.enforce_field();
        m
    }

    /// Real matrix from row-major entries.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Matrix {
            field: Field::Real,
            data: DMatrix::from_fn(rows, cols, |i, j| C64::new(entries[i * cols + j], 0.0)),
        }
    }

    /// Matrix from row-major complex entries.
    pub fn from_rows(rows: usize, cols: usize, field: Field, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Matrix::from_dmatrix(DMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j]), field)
    }

    pub fn from_fn(rows: usize, cols: usize, field: Field, f: impl FnMut(usize, usize) -> C64) -> Self {
        Matrix::from_dmatrix(DMatrix::from_fn(rows, cols, f), field)
    }

    /// Diagonal matrix with real entries.
    pub fn diag_real(d: &[f64], field: Field) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, field, |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn diag(d: &[C64], field: Field) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, field, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) })
    }

    fn enforce_field(&mut self) {
        if self.field == Field::Real {
            for z in self.data.iter_mut() {
                z.im = 0.0;
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn data(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<C64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[(i, j)] = if self.field == Field::Real { C64::new(z.re, 0.0) } else { z };
    }

    /// Row-major copy of the entries.
    pub fn entries_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    pub fn with_field(&self, field: Field) -> Self {
        Matrix::from_dmatrix(self.data.clone(), field)
    }

    /// Promotes a real matrix to the complex field; complex input is unchanged.
    pub fn promote(&self, field: Field) -> Self {
        Matrix {
            field: self.field.join(field),
            data: self.data.clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn adjoint(&self) -> Self {
        Matrix {
            field: self.field,
            data: self.data.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix {
            field: self.field,
            data: self.data.transpose(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Matrix {
            field: self.field,
            data: &self.data * C64::new(s, 0.0),
        }
    }

    pub fn scale_c(&self, s: C64) -> Self {
        let field = if s.im != 0.0 { Field::Complex } else { self.field };
        Matrix {
            field: self.field.join(field),
            data: &self.data * s,
        }
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    /// Copy of the `nr x nc` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Matrix {
            field: self.field,
            data: self.data.view((r0, c0), (nr, nc)).into_owned(),
        }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        self.field = self.field.join(b.field);
        self.data.view_mut((r0, c0), (b.rows(), b.cols())).copy_from(&b.data);
    }

    pub fn columns(&self, c0: usize, nc: usize) -> Self {
        self.block(0, c0, self.rows(), nc)
    }

    pub fn row_range(&self, r0: usize, nr: usize) -> Self {
        self.block(r0, 0, nr, self.cols())
    }

    /// Selects rows by index, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let cols = self.cols();
        Matrix {
            field: self.field,
            data: DMatrix::from_fn(idx.len(), cols, |i, j| self.data[(idx[i], j)]),
        }
    }

    /// Applies the same index permutation to rows and columns.
    pub fn permute_sym(&self, idx: &[usize]) -> Self {
        Matrix {
            field: self.field,
            data: DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.data[(idx[i], idx[j])]),
        }
    }

    pub fn hstack(parts: &[&Matrix]) -> Self {
        let rows = parts.first().map_or(0, |m| m.rows());
        let cols: usize = parts.iter().map(|m| m.cols()).sum();
        let field = parts.iter().fold(Field::Real, |f, m| f.join(m.field));
        let mut out = Matrix::zeros(rows, cols, field);
        let mut c = 0;
        for m in parts {
            assert_eq!(m.rows(), rows, "hstack row mismatch");
            out.set_block(0, c, m);
            c += m.cols();
        }
        out
    }

    pub fn vstack(parts: &[&Matrix]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols());
        let rows: usize = parts.iter().map(|m| m.rows()).sum();
        let field = parts.iter().fold(Field::Real, |f, m| f.join(m.field));
        let mut out = Matrix::zeros(rows, cols, field);
        let mut r = 0;
        for m in parts {
            assert_eq!(m.cols(), cols, "vstack column mismatch");
            out.set_block(r, 0, m);
            r += m.rows();
        }
        out
    }

    pub fn block_diag(parts: &[&Matrix]) -> Self {
        let rows: usize = parts.iter().map(|m| m.rows()).sum();
        let cols: usize = parts.iter().map(|m| m.cols()).sum();
        let field = parts.iter().fold(Field::Real, |f, m| f.join(m.field));
        let mut out = Matrix::zeros(rows, cols, field);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.set_block(r, c, m);
            r += m.rows();
            c += m.cols();
        }
        out
    }

    /// 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Self {
        let top = Matrix::hstack(&[a, b]);
        let bot = Matrix::hstack(&[c, d]);
        Matrix::vstack(&[&top, &bot])
    }

    pub fn hs_norm(&self) -> f64 {
        hs_norm(self)
    }

    /// `‖self − other‖_F`.
    pub fn dist(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "dist shape mismatch");
        (&self.data - &other.data).norm()
    }

    /// Inverse via LU with a singular-value guard at the rank cutoff.
    pub fn inverse(&self, cutoff: f64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows(),
                self.cols()
            )));
        }
        if self.rows() == 0 {
            return Ok(self.clone());
        }
        let s = svd(self)?;
        let smax = s.s[0];
        let smin = *s.s.last().unwrap();
        if smax == 0.0 || smin <= cutoff * smax {
            return Err(Error::Singular { sigma_min: smin });
        }
        let inv = self
            .data
            .clone()
            .try_inverse()
            .ok_or(Error::Singular { sigma_min: smin })?;
        Ok(Matrix::from_dmatrix(inv, self.field))
    }

    /// 2-norm condition number; infinite for singular or empty-rank input.
    pub fn cond(&self) -> Result<f64> {
        if self.rows() == 0 || self.cols() == 0 {
            return Ok(1.0);
        }
        let s = svd(self)?;
        let smin = *s.s.last().unwrap();
        Ok(if smin == 0.0 { f64::INFINITY } else { s.s[0] / smin })
    }

    /// Largest singular value (0 for empty matrices).
    pub fn op_norm(&self) -> Result<f64> {
        Ok(svd(self)?.s.first().copied().unwrap_or(0.0))
    }

    /// Smallest singular value of a square matrix (0 columns give +∞).
    pub fn min_singular_value(&self) -> Result<f64> {
        Ok(svd(self)?.s.last().copied().unwrap_or(f64::INFINITY))
    }
}

fn join_op(a: &Matrix, b: &Matrix, data: DMatrix<C64>) -> Matrix {
    Matrix {
        field: a.field.join(b.field),
        data,
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.cols(), rhs.rows(), "matrix product shape mismatch");
        join_op(self, rhs, product(&self.data, self.field, &rhs.data, rhs.field))
    }
}

/// Products go through real `f64` kernels; the complex case is assembled from
/// four real products.
fn product(a: &DMatrix<C64>, fa: Field, b: &DMatrix<C64>, fb: Field) -> DMatrix<C64> {
    let (ar, br) = (a.map(|z| z.re), b.map(|z| z.re));
    match (fa, fb) {
        (Field::Real, Field::Real) => (&ar * &br).map(|x| C64::new(x, 0.0)),
        (Field::Real, Field::Complex) => {
            let bi = b.map(|z| z.im);
            (&ar * &br).zip_map(&(&ar * &bi), C64::new)
        }
        (Field::Complex, Field::Real) => {
            let ai = a.map(|z| z.im);
            (&ar * &br).zip_map(&(&ai * &br), C64::new)
        }
        (Field::Complex, Field::Complex) => {
            let (ai, bi) = (a.map(|z| z.im), b.map(|z| z.im));
            let re = &ar * &br - &ai * &bi;
            let im = &ar * &bi + &ai * &br;
            re.zip_map(&im, C64::new)
        }
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        join_op(self, rhs, &self.data + &rhs.data)
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        join_op(self, rhs, &self.data - &rhs.data)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            field: self.field,
            data: -&self.data,
        }
    }
}

/// Thin singular value decomposition `A = U·diag(S)·Vᴴ`, `S` nonincreasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    /// Number of singular values above `cutoff·σmax`.
    pub fn rank(&self, cutoff: f64) -> usize {
        let smax = self.s.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        self.s.iter().filter(|&&x| x > cutoff * smax).count()
    }
}

pub fn svd(a: &Matrix) -> Result<Svd> {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Ok(Svd {
            u: Matrix::zeros(m, 0, a.field),
            s: Vec::new(),
            v: Matrix::zeros(n, 0, a.field),
        });
    }
    if !a.is_finite() {
        return Err(Error::NonConvergence { rows: m, cols: n });
    }
    let fail = Error::NonConvergence { rows: m, cols: n };
    if a.field == Field::Real {
        let re = a.data.map(|z| z.re);
        let dec = nalgebra::SVD::try_new(re, true, true, SVD_EPS, SVD_MAX_ITER).ok_or(fail)?;
        let (u, vt) = match (dec.u, dec.v_t) {
            (Some(u), Some(vt)) => (u, vt),
            _ => return Err(Error::NonConvergence { rows: m, cols: n }),
        };
        return Ok(Svd {
            u: Matrix::from_dmatrix(u.map(|x| C64::new(x, 0.0)), Field::Real),
            s: dec.singular_values.iter().copied().collect(),
            v: Matrix::from_dmatrix(vt.transpose().map(|x| C64::new(x, 0.0)), Field::Real),
        });
    }
    let dec = nalgebra::SVD::try_new(a.data.clone(), true, true, SVD_EPS, SVD_MAX_ITER).ok_or(fail)?;
    let (u, vt) = match (dec.u, dec.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::NonConvergence { rows: m, cols: n }),
    };
    Ok(Svd {
        u: Matrix::from_dmatrix(u, a.field),
        s: dec.singular_values.iter().copied().collect(),
        v: Matrix::from_dmatrix(vt.adjoint(), a.field),
    })
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues nondecreasing.
pub fn eigh(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows();
    if !a.is_square() || !a.is_finite() {
        return Err(Error::NonConvergence { rows: n, cols: a.cols() });
    }
    if n == 0 {
        return Ok((Vec::new(), Matrix::zeros(0, 0, a.field)));
    }
    let h = &(a + &a.adjoint()).scale(0.5);
    let (vals, vecs): (Vec<f64>, DMatrix<C64>) = if a.field == Field::Real {
        let e = nalgebra::SymmetricEigen::new(h.data.map(|z| z.re));
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let e = nalgebra::SymmetricEigen::new(h.data.clone());
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let v = DMatrix::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    Ok((sorted, Matrix::from_dmatrix(v, a.field)))
}

/// Singular values only, nonincreasing.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.s)
}

/// Generalized inverse: inverts `A` on `ker(A)^⊥ → ran(A)` and vanishes on `ran(A)^⊥`.
/// Singular values `≤ cutoff·σmax` count as zero.
pub fn generalized_inverse(a: &Matrix, cutoff: f64) -> Result<Matrix> {
    let (m, n) = a.shape();
    let dec = svd(a)?;
    let r = dec.rank(cutoff);
    let mut x = Matrix::zeros(n, m, a.field);
    if r == 0 {
        return Ok(x);
    }
    let vr = dec.v.columns(0, r);
    let ur = dec.u.columns(0, r);
    let inv: Vec<f64> = dec.s[..r].iter().map(|s| 1.0 / s).collect();
    let scaled = &vr * &Matrix::diag_real(&inv, a.field);
    x = &scaled * &ur.adjoint();
    Ok(x)
}

/// Orthonormal basis of a closed subspace of `C^ambient_dim` (or `R^ambient_dim`).
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    basis: Matrix,
}

impl Frame {
    /// Validates orthonormality against `tol.ortho`.
    pub fn new(basis: Matrix, tol: &Tolerances) -> Result<Self> {
        let k = basis.cols();
        if k > basis.rows() {
            return Err(Error::DimensionMismatch(format!(
                "frame with {k} columns in dimension {}",
                basis.rows()
            )));
        }
        let gram = &basis.adjoint() * &basis;
        let res = gram.dist(&Matrix::identity(k, basis.field()));
        if res > tol.ortho {
            return Err(Error::Malformed(format!(
                "frame columns are not orthonormal (residual {res:.3e})"
            )));
        }
        Ok(Frame { basis })
    }

    /// Trusted constructor for bases that are orthonormal by construction.
    pub(crate) fn from_orthonormal(basis: Matrix) -> Self {
        Frame { basis }
    }

    pub fn empty(ambient_dim: usize, field: Field) -> Self {
        Frame {
            basis: Matrix::zeros(ambient_dim, 0, field),
        }
    }

    pub fn full(ambient_dim: usize, field: Field) -> Self {
        Frame {
            basis: Matrix::identity(ambient_dim, field),
        }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn projector(&self) -> Matrix {
        projection_onto(self)
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Result<Frame> {
        // Singular values of an orthonormal basis are exactly 0 or 1.
        null_space_abs(&self.basis.adjoint(), 0.5)
    }

    /// Frame for `M·span(self)`.
    pub fn map(&self, m: &Matrix, cutoff: f64) -> Result<Frame> {
        orthonormalize(&(m * &self.basis), cutoff)
    }

    /// Projector distance `‖P_self − P_other‖_F`.
    pub fn distance(&self, other: &Frame) -> f64 {
        self.projector().dist(&other.projector())
    }
}

pub fn projection_onto(f: &Frame) -> Matrix {
    &f.basis * &f.basis.adjoint()
}

/// Orthonormal frame for the column space of `a`, rank decided by the SVD cutoff.
pub fn orthonormalize(a: &Matrix, cutoff: f64) -> Result<Frame> {
    let m = a.rows();
    if a.cols() == 0 || m == 0 {
        return Ok(Frame::empty(m, a.field()));
    }
    let dec = svd(a)?;
    let r = dec.rank(cutoff);
    Ok(Frame::from_orthonormal(dec.u.columns(0, r)))
}

/// Orthonormal frame for `ker(a)`, with the same cutoff convention.
pub fn null_space(a: &Matrix, cutoff: f64) -> Result<Frame> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok(Frame::empty(0, a.field()));
    }
    if m == 0 {
        return Ok(Frame::full(n, a.field()));
    }
    // Pad to at least n rows so the thin V is square.
    let padded = if m < n {
        Matrix::vstack(&[a, &Matrix::zeros(n - m, n, a.field())])
    } else {
        a.clone()
    };
    let dec = svd(&padded)?;
    let r = dec.rank(cutoff);
    Ok(Frame::from_orthonormal(dec.v.columns(r, n - r)))
}

/// Absolute-threshold variant of [`null_space`]: singular values `≤ abs_tol` count as zero.
pub fn null_space_abs(a: &Matrix, abs_tol: f64) -> Result<Frame> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok(Frame::empty(0, a.field()));
    }
    if m == 0 {
        return Ok(Frame::full(n, a.field()));
    }
    let padded = if m < n {
        Matrix::vstack(&[a, &Matrix::zeros(n - m, n, a.field())])
    } else {
        a.clone()
    };
    let dec = svd(&padded)?;
    let r = dec.s.iter().filter(|&&s| s > abs_tol).count();
    Ok(Frame::from_orthonormal(dec.v.columns(r, n - r)))
}

/// Frobenius norm.
pub fn hs_norm(a: &Matrix) -> f64 {
    a.data.norm()
}

/// Cosines of the principal angles between two subspaces, nonincreasing.
pub fn principal_cosines(a: &Frame, b: &Frame) -> Result<Vec<f64>> {
    singular_values(&(&a.basis().adjoint() * b.basis()))
}
