//! C ABI over the `lagcat` core.
//!
//! Objects cross the boundary as opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns a
//! [`LagcatStatus`]; on failure the message is available from
//! [`lagcat_last_error_message`] on the same thread until the next failing call.
//!
//! Matrices are passed row-major. Complex data is split into a real and an
//! imaginary array.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lagcat::composition::{self, Correspondence};
use lagcat::lagrangian;
use lagcat::{Error, Field, Matrix, SuperSpace, Tolerances, C64};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LagcatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    FieldMismatch = 4,
    NotLagrangian = 5,
    Singular = 6,
    NotUnitary = 7,
    NonConvergence = 8,
    SpaceMismatch = 9,
    Unsupported = 10,
    Panic = 98,
    Other = 99,
}

/// Composition algorithm for [`lagcat_compose`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LagcatMethod {
    /// Closed form, falling back to brute force when the spectral gap is ambiguous.
    Formula = 0,
    BruteForce = 1,
}

/// Numerical tolerances. Pass `NULL` wherever a tolerance pointer is accepted
/// to use [`lagcat_tolerances_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LagcatTolerances {
    pub proj: f64,
    pub ortho: f64,
    pub rank_cutoff: f64,
}

/// Dense real or complex matrix.
pub struct LagcatMatrix(Matrix);

/// Super Hilbert space `V⁺ ⊕ V⁻` without Clifford action.
pub struct LagcatSpace(SuperSpace);

/// Lagrangian correspondence `V0 → V1`, stored as its graph isometry `u`.
pub struct LagcatCorrespondence(Correspondence);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LagcatStatus {
    match e {
        Error::DimensionMismatch(_) => LagcatStatus::DimensionMismatch,
        Error::FieldMismatch { .. } => LagcatStatus::FieldMismatch,
        Error::NotIsotropic { .. } | Error::NotPartialIsometry { .. } | Error::NotLagrangian(_) => {
            LagcatStatus::NotLagrangian
        }
        Error::Singular { .. } | Error::SingularBlock { .. } => LagcatStatus::Singular,
        Error::NotUnitaryResult { .. } => LagcatStatus::NotUnitary,
        Error::NonConvergence { .. } => LagcatStatus::NonConvergence,
        Error::SpaceMismatch(_) => LagcatStatus::SpaceMismatch,
        Error::UnsupportedDegree { .. } | Error::UnsupportedSymbols(_) | Error::UnsupportedBordism(_) => {
            LagcatStatus::Unsupported
        }
        Error::Malformed(_) => LagcatStatus::InvalidArgument,
        _ => LagcatStatus::Other,
    }
}

struct Fail(LagcatStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(LagcatStatus::NullPointer, format!("{what} is NULL"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LagcatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LagcatStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {msg}"));
            LagcatStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn tolerances(p: *const LagcatTolerances) -> Tolerances {
    match p.as_ref() {
        Some(t) => Tolerances {
            proj: t.proj,
            ortho: t.ortho,
            rank_cutoff: t.rank_cutoff,
        },
        None => Tolerances::default(),
    }
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn field_of(is_complex: bool) -> Field {
    if is_complex {
        Field::Complex
    } else {
        Field::Real
    }
}

/// Message of the last failed call on this thread, or `NULL`. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lagcat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lagcat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn lagcat_tolerances_default() -> LagcatTolerances {
    let t = Tolerances::default();
    LagcatTolerances {
        proj: t.proj,
        ortho: t.ortho,
        rank_cutoff: t.rank_cutoff,
    }
}

/// Real matrix from `rows * cols` row-major entries.
///
/// # Safety
/// `data` must point to `rows * cols` doubles (it may be `NULL` when that
/// product is zero); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_matrix_new_real(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut LagcatMatrix,
) -> LagcatStatus {
    guard(|| {
        let n = rows.checked_mul(cols).ok_or_else(|| Fail(LagcatStatus::InvalidArgument, "size overflow".into()))?;
        let entries = if n == 0 { &[][..] } else { std::slice::from_raw_parts(deref(data, "data")?, n) };
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Fail(LagcatStatus::InvalidArgument, "non-finite entry".into()));
        }
        emit(out, LagcatMatrix(Matrix::from_real_rows(rows, cols, entries)))
    })
}

/// Complex matrix from row-major real and imaginary parts.
///
/// # Safety
/// `re` and `im` must each point to `rows * cols` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_matrix_new_complex(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut LagcatMatrix,
) -> LagcatStatus {
    guard(|| {
        let n = rows.checked_mul(cols).ok_or_else(|| Fail(LagcatStatus::InvalidArgument, "size overflow".into()))?;
        let entries: Vec<C64> = if n == 0 {
            Vec::new()
        } else {
            let re = std::slice::from_raw_parts(deref(re, "re")?, n);
            let im = std::slice::from_raw_parts(deref(im, "im")?, n);
            re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect()
        };
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Fail(LagcatStatus::InvalidArgument, "non-finite entry".into()));
        }
        emit(out, LagcatMatrix(Matrix::from_rows(rows, cols, Field::Complex, &entries)))
    })
}

/// # Safety
/// `m` must be `NULL` or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn lagcat_matrix_free(m: *mut LagcatMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_matrix_shape(
    m: *const LagcatMatrix,
    rows: *mut usize,
    cols: *mut usize,
) -> LagcatStatus {
    guard(|| {
        let m = &deref(m, "m")?.0;
        if rows.is_null() || cols.is_null() {
            return Err(null("rows/cols"));
        }
        *rows = m.rows();
        *cols = m.cols();
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lagcat_matrix_is_complex(m: *const LagcatMatrix) -> bool {
    m.as_ref().is_some_and(|m| m.0.field() == Field::Complex)
}

/// Entry `(i, j)`. `im` may be `NULL`.
///
/// # Safety
/// `m` must be a live handle; `re` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_matrix_get(
    m: *const LagcatMatrix,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> LagcatStatus {
    guard(|| {
        let m = &deref(m, "m")?.0;
        if i >= m.rows() || j >= m.cols() {
            return Err(Fail(
                LagcatStatus::InvalidArgument,
                format!("index ({i}, {j}) out of range for {}x{}", m.rows(), m.cols()),
            ));
        }
        if re.is_null() {
            return Err(null("re"));
        }
        let z = m.get(i, j);
        *re = z.re;
        if !im.is_null() {
            *im = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_space_new(
    dim_plus: usize,
    dim_minus: usize,
    is_complex: bool,
    out: *mut *mut LagcatSpace,
) -> LagcatStatus {
    guard(|| emit(out, LagcatSpace(SuperSpace::new(dim_plus, dim_minus, field_of(is_complex)))))
}

/// `ΠV`: the same space with the grading reversed.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_space_opposite(s: *const LagcatSpace, out: *mut *mut LagcatSpace) -> LagcatStatus {
    guard(|| {
        let s = &deref(s, "s")?.0;
        emit(out, LagcatSpace(s.opposite()))
    })
}

/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lagcat_space_dims(
    s: *const LagcatSpace,
    dim_plus: *mut usize,
    dim_minus: *mut usize,
) -> LagcatStatus {
    guard(|| {
        let s = &deref(s, "s")?.0;
        if dim_plus.is_null() || dim_minus.is_null() {
            return Err(null("dim_plus/dim_minus"));
        }
        *dim_plus = s.dim_plus();
        *dim_minus = s.dim_minus();
        Ok(())
    })
}

/// # Safety
/// `s` must be `NULL` or a handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn lagcat_space_free(s: *mut LagcatSpace) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Correspondence from its graph isometry `u : V0⁻ ⊕ V1⁺ → V0⁺ ⊕ V1⁻`.
///
/// # Safety
/// Handles must be live; `tol` may be `NULL`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_correspondence_from_u(
    v0: *const LagcatSpace,
    v1: *const LagcatSpace,
    u: *const LagcatMatrix,
    tol: *const LagcatTolerances,
    out: *mut *mut LagcatCorrespondence,
) -> LagcatStatus {
    guard(|| {
        let (v0, v1, u) = (&deref(v0, "v0")?.0, &deref(v1, "v1")?.0, &deref(u, "u")?.0);
        let c = Correspondence::from_u(v0, v1, u.clone(), &tolerances(tol))?;
        emit(out, LagcatCorrespondence(c))
    })
}

/// Correspondence `graph(T)` for an invertible `T : V0 → V1`.
///
/// # Safety
/// Handles must be live; `tol` may be `NULL`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_correspondence_from_t(
    v0: *const LagcatSpace,
    v1: *const LagcatSpace,
    t: *const LagcatMatrix,
    tol: *const LagcatTolerances,
    out: *mut *mut LagcatCorrespondence,
) -> LagcatStatus {
    guard(|| {
        let (v0, v1, t) = (&deref(v0, "v0")?.0, &deref(v1, "v1")?.0, &deref(t, "t")?.0);
        let c = Correspondence::from_t(v0, v1, t, &tolerances(tol))?;
        emit(out, LagcatCorrespondence(c))
    })
}

/// The diagonal of `V × V`.
///
/// # Safety
/// `v` must be live; `tol` may be `NULL`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_correspondence_identity(
    v: *const LagcatSpace,
    tol: *const LagcatTolerances,
    out: *mut *mut LagcatCorrespondence,
) -> LagcatStatus {
    guard(|| {
        let v = &deref(v, "v")?.0;
        emit(out, LagcatCorrespondence(Correspondence::identity(v, &tolerances(tol))?))
    })
}

/// # Safety
/// `c` must be `NULL` or a handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn lagcat_correspondence_free(c: *mut LagcatCorrespondence) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Copy of the graph isometry `u`.
///
/// # Safety
/// `c` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_correspondence_u(
    c: *const LagcatCorrespondence,
    out: *mut *mut LagcatMatrix,
) -> LagcatStatus {
    guard(|| {
        let c = &deref(c, "c")?.0;
        emit(out, LagcatMatrix(c.u().clone()))
    })
}

/// The operator `T` with `L = graph(T)`. Fails with `LAGCAT_STATUS_SINGULAR`
/// when `u01` is not invertible.
///
/// # Safety
/// `c` must be live; `tol` may be `NULL`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_correspondence_to_t(
    c: *const LagcatCorrespondence,
    tol: *const LagcatTolerances,
    out: *mut *mut LagcatMatrix,
) -> LagcatStatus {
    guard(|| {
        let c = &deref(c, "c")?.0;
        emit(out, LagcatMatrix(c.to_t(&tolerances(tol))?))
    })
}

/// Projector distance `‖P_L − P_L'‖_F` between correspondences on the same spaces.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_correspondence_distance(
    a: *const LagcatCorrespondence,
    b: *const LagcatCorrespondence,
    out: *mut f64,
) -> LagcatStatus {
    guard(|| {
        let (a, b) = (&deref(a, "a")?.0, &deref(b, "b")?.0);
        if a.v0().dim() != b.v0().dim() || a.v1().dim() != b.v1().dim() || a.field() != b.field() {
            return Err(Fail(LagcatStatus::SpaceMismatch, "correspondences live on different spaces".into()));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = a.distance(b);
        Ok(())
    })
}

/// `L12 ∘ L01`.
///
/// # Safety
/// Handles must be live; `tol` may be `NULL`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_compose(
    l01: *const LagcatCorrespondence,
    l12: *const LagcatCorrespondence,
    method: LagcatMethod,
    tol: *const LagcatTolerances,
    out: *mut *mut LagcatCorrespondence,
) -> LagcatStatus {
    guard(|| {
        let (a, b) = (&deref(l01, "l01")?.0, &deref(l12, "l12")?.0);
        let tol = tolerances(tol);
        let c = match method {
            LagcatMethod::Formula => composition::compose_formula(a, b, tol.rank_cutoff, &tol)?,
            LagcatMethod::BruteForce => composition::compose_bruteforce_corr(a, b, &tol)?,
        };
        emit(out, LagcatCorrespondence(c))
    })
}

/// Whether `graph(T)` is a Lagrangian in `ΠV0 ⊕ V1`.
///
/// # Safety
/// Handles must be live; `tol` may be `NULL`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lagcat_is_lagrangian_graph(
    t: *const LagcatMatrix,
    v0: *const LagcatSpace,
    v1: *const LagcatSpace,
    tol: *const LagcatTolerances,
    out: *mut bool,
) -> LagcatStatus {
    guard(|| {
        let (t, v0, v1) = (&deref(t, "t")?.0, &deref(v0, "v0")?.0, &deref(v1, "v1")?.0);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lagrangian::is_lagrangian_graph(t, v0, v1, &tolerances(tol))?;
        Ok(())
    })
}
