//! Reproducible random instances.
//!
//! Every case of a sweep gets its own generator derived from `(seed, case)`, so
//! results do not depend on scheduling or on how many cases run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Field, Matrix, C64};
use crate::lagrangian::{PairLayout, UBlocks};

pub type CaseRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for case `case` of a run seeded with `seed`.
pub fn case_rng(seed: u64, case: u64) -> CaseRng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(case.wrapping_add(1))))
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, field: Field) -> Matrix {
    Matrix::from_fn(rows, cols, field, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if field == Field::Complex { rng.sample(StandardNormal) } else { 0.0 };
        C64::new(re, im)
    })
}

/// Haar-distributed orthogonal/unitary matrix: QR of a Gaussian matrix with the
/// phases of `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng>(rng: &mut R, n: usize, field: Field) -> Matrix {
    if n == 0 {
        return Matrix::zeros(0, 0, field);
    }
    let g = gaussian_matrix(rng, n, n, field);
    let qr = g.data().clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let a = d.norm();
        let phase = if a == 0.0 { C64::new(1.0, 0.0) } else { d / a };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    Matrix::from_dmatrix(q, field)
}

/// Partial isometry `rows × cols` of the given rank.
pub fn partial_isometry<R: Rng>(rng: &mut R, rows: usize, cols: usize, rank: usize, field: Field) -> Matrix {
    let rank = rank.min(rows).min(cols);
    let a = haar_unitary(rng, rows, field).columns(0, rank);
    let b = haar_unitary(rng, cols, field).columns(0, rank);
    &a * &b.adjoint()
}

/// Random unitary `u` for a balanced layout.
pub fn lagrangian_u<R: Rng>(rng: &mut R, layout: &PairLayout, field: Field) -> Matrix {
    assert!(layout.balanced(), "layout admits no Lagrangian");
    haar_unitary(rng, layout.q0 + layout.p1, field)
}

/// Rejection-samples a unitary whose `u01` block has smallest singular value
/// above `min_sv`. Requires `p0 == p1` and `q0 == q1`.
pub fn general_position_u<R: Rng>(rng: &mut R, layout: &PairLayout, field: Field, min_sv: f64) -> Matrix {
    assert!(layout.p0 == layout.p1 && layout.q0 == layout.q1, "general position needs matching dims");
    loop {
        let u = lagrangian_u(rng, layout, field);
        let b = UBlocks::split(&u, layout).expect("layout shape");
        let s = crate::linalg::singular_values(&b.u01).expect("svd");
        if s.last().copied().unwrap_or(f64::INFINITY) > min_sv {
            return u;
        }
    }
}

/// Balanced layout for `V0 → V1` with every dimension at most `max_dim`.
pub fn balanced_layout<R: Rng>(rng: &mut R, max_dim: usize) -> PairLayout {
    loop {
        let p0 = rng.random_range(0..=max_dim);
        let q0 = rng.random_range(0..=max_dim);
        let p1 = rng.random_range(0..=max_dim);
        // q1 = q0 + p1 - p0 keeps the sum balanced.
        let q1 = (q0 + p1) as isize - p0 as isize;
        if q1 >= 0 && q1 as usize <= max_dim && p0 + q0 + p1 + q1 as usize > 0 {
            return PairLayout { p0, q0, p1, q1: q1 as usize };
        }
    }
}

/// Layout with `V0 ≅ V1` as graded dimensions, both at least 1 in total.
pub fn square_layout<R: Rng>(rng: &mut R, max_dim: usize) -> PairLayout {
    loop {
        let p = rng.random_range(0..=max_dim);
        let q = rng.random_range(0..=max_dim);
        if p + q > 0 {
            return PairLayout { p0: p, q0: q, p1: p, q1: q };
        }
    }
}
