//! Composition of Lagrangian correspondences.

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lagrangian::{
    self, correspondence_space, graph_t_frame, graph_u_frame, GraphIsometry, PairLayout, UBlocks,
};
use crate::linalg::{self, Field, Frame, Matrix, Tolerances};
use crate::super_space::{direct_sum, SuperSpace};

/// A Lagrangian `L ⊂ ΠV0 ⊕ V1`, stored both as a frame (sum coordinates) and
/// as the unitary `u : V0⁻ ⊕ V1⁺ → V0⁺ ⊕ V1⁻`.
#[derive(Clone, Debug)]
pub struct Correspondence {
    v0: SuperSpace,
    v1: SuperSpace,
    layout: PairLayout,
    frame: Frame,
    u: Matrix,
}

fn unitarity_residual(u: &Matrix) -> f64 {
    let n = u.cols();
    (&u.adjoint() * u).dist(&Matrix::identity(n, u.field()))
}

impl Correspondence {
    pub fn from_u(v0: &SuperSpace, v1: &SuperSpace, u: Matrix, tol: &Tolerances) -> Result<Self> {
        let layout = PairLayout::new(v0, v1);
        if !layout.balanced() {
            return Err(Error::NotLagrangian(format!(
                "ΠV0 ⊕ V1 has unequal even and odd parts ({} vs {})",
                layout.q0 + layout.p1,
                layout.p0 + layout.q1
            )));
        }
        UBlocks::split(&u, &layout)?;
        if !u.is_square() || unitarity_residual(&u) > tol.proj {
            return Err(Error::NotLagrangian(format!(
                "u is not unitary (residual {:.3e})",
                unitarity_residual(&u)
            )));
        }
        let field = v0.field().join(v1.field());
        let u = u.promote(field);
        let frame = graph_u_frame(&u, v0, v1, tol)?;
        Ok(Correspondence {
            v0: v0.clone(),
            v1: v1.clone(),
            layout,
            frame,
            u,
        })
    }

    /// From a frame in sum coordinates of `ΠV0 ⊕ V1`.
    pub fn from_frame(v0: &SuperSpace, v1: &SuperSpace, frame: &Frame, tol: &Tolerances) -> Result<Self> {
        let space = correspondence_space(v0, v1)?;
        let g = lagrangian::to_graph_isometry(&space, frame, tol)?;
        if !g.is_unitary(tol) {
            return Err(Error::NotLagrangian(format!(
                "subspace of dimension {} in a space of dimension {}",
                frame.dim(),
                space.dim()
            )));
        }
        Ok(Correspondence {
            v0: v0.clone(),
            v1: v1.clone(),
            layout: PairLayout::new(v0, v1),
            frame: frame.clone(),
            u: g.u().clone(),
        })
    }

    /// `graph(T)` for `T : V0 → V1`.
    pub fn from_t(v0: &SuperSpace, v1: &SuperSpace, t: &Matrix, tol: &Tolerances) -> Result<Self> {
        let u = lagrangian::t_to_u(t, v0, v1, tol)?;
        let mut c = Correspondence::from_u(v0, v1, u, tol)?;
        // The frame of graph(T) itself is better conditioned than the one rebuilt from u.
        c.frame = graph_t_frame(t, &c.layout, tol)?;
        Ok(c)
    }

    /// `graph(id_V)`.
    pub fn identity(v: &SuperSpace, tol: &Tolerances) -> Result<Self> {
        let t = Matrix::identity(v.dim(), v.field());
        Correspondence::from_t(v, v, &t, tol)
    }

    pub fn v0(&self) -> &SuperSpace {
        &self.v0
    }

    pub fn v1(&self) -> &SuperSpace {
        &self.v1
    }

    pub fn layout(&self) -> &PairLayout {
        &self.layout
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn field(&self) -> Field {
        self.u.field().join(self.v0.field())
    }

    pub fn blocks(&self) -> UBlocks {
        UBlocks::split(&self.u, &self.layout).expect("validated at construction")
    }

    /// `T` with `L = graph(T)`; fails with `SingularBlock` outside general position.
    pub fn to_t(&self, tol: &Tolerances) -> Result<Matrix> {
        lagrangian::u_to_t(&self.u, &self.layout, tol)
    }

    pub fn space(&self) -> SuperSpace {
        correspondence_space(&self.v0, &self.v1).expect("validated at construction")
    }

    pub fn graph_isometry(&self, tol: &Tolerances) -> Result<GraphIsometry> {
        GraphIsometry::new(self.space(), self.u.clone(), tol)
    }

    /// Frame in pair coordinates `[V0⁺, V0⁻, V1⁺, V1⁻]`.
    pub fn pair_basis(&self) -> Matrix {
        &self.layout.pair_to_sum(self.frame.field()).adjoint() * self.frame.basis()
    }

    /// Projector distance to another correspondence between the same spaces.
    pub fn distance(&self, other: &Correspondence) -> f64 {
        self.frame.distance(&other.frame)
    }
}

/// `L ⊕ L′ ⊂ Π(V0 ⊕ V0′) ⊕ (V1 ⊕ V1′)`, blockwise in `u`.
pub fn direct_sum_correspondence(a: &Correspondence, b: &Correspondence, tol: &Tolerances) -> Result<Correspondence> {
    let v0 = direct_sum(&a.v0, &b.v0)?.space;
    let v1 = direct_sum(&a.v1, &b.v1)?.space;
    let (x, y) = (a.blocks(), b.blocks());
    let u = UBlocks {
        u00: Matrix::block_diag(&[&x.u00, &y.u00]),
        u01: Matrix::block_diag(&[&x.u01, &y.u01]),
        u10: Matrix::block_diag(&[&x.u10, &y.u10]),
        u11: Matrix::block_diag(&[&x.u11, &y.u11]),
    }
    .assemble();
    Correspondence::from_u(&v0, &v1, u, tol)
}

fn check_middle(l01: &Correspondence, l12: &Correspondence) -> Result<()> {
    if !l01.v1.same_shape(&l12.v0) {
        return Err(Error::SpaceMismatch(format!(
            "left target ({}, {}) vs right source ({}, {})",
            l01.v1.dim_plus(),
            l01.v1.dim_minus(),
            l12.v0.dim_plus(),
            l12.v0.dim_minus()
        )));
    }
    Ok(())
}

/// `{(x0, x2) : ∃ x1, (x0, x1) ∈ L01, (x1, x2) ∈ L12}` as a frame in sum
/// coordinates of `ΠV0 ⊕ V2`.
pub fn compose_bruteforce(l01: &Correspondence, l12: &Correspondence, tol: &Tolerances) -> Result<Frame> {
    check_middle(l01, l12)?;
    let a = l01.pair_basis();
    let b = l12.pair_basis();
    let (d0, d1, d2) = (l01.layout.dim0(), l01.layout.dim1(), l12.layout.dim1());
    let (ka, kb) = (a.cols(), b.cols());
    let a_mid = a.row_range(d0, d1);
    let b_mid = b.row_range(0, d1);
    let constraint = Matrix::hstack(&[&a_mid, &(-&b_mid)]);
    let kernel = linalg::null_space(&constraint, tol.rank_cutoff)?;
    let ker_a = kernel.basis().row_range(0, ka);
    let ker_b = kernel.basis().row_range(ka, kb);
    let x0 = &a.row_range(0, d0) * &ker_a;
    let x2 = &b.row_range(d1, d2) * &ker_b;
    let layout02 = PairLayout::new(&l01.v0, &l12.v1);
    let field = l01.field().join(l12.field());
    let pair = Matrix::vstack(&[&x0, &x2]);
    let sum = &layout02.pair_to_sum(field) * &pair;
    linalg::orthonormalize(&sum, tol.rank_cutoff)
}

/// Brute-force composition wrapped as a correspondence.
pub fn compose_bruteforce_corr(
    l01: &Correspondence,
    l12: &Correspondence,
    tol: &Tolerances,
) -> Result<Correspondence> {
    let f = compose_bruteforce(l01, l12, tol)?;
    Correspondence::from_frame(&l01.v0, &l12.v1, &f, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionMethod {
    Formula,
    BruteForceFallback,
}

#[derive(Clone, Debug)]
pub struct FormulaComposition {
    pub result: Correspondence,
    pub method: CompositionMethod,
    /// Smallest singular value of `I − v11 u11` above the rank cutoff (∞ if none).
    pub gap: f64,
    /// `‖wᴴw − I‖_F` of the assembled `w` (0 for the fallback).
    pub unitarity_residual: f64,
}

/// Smallest singular value above `cutoff·σmax`, and whether any singular value
/// sits in the ambiguous band `(cutoff·σmax, 10·cutoff·σmax]`.
fn spectral_gap(m: &Matrix, cutoff: f64) -> Result<(f64, bool)> {
    let s = linalg::singular_values(m)?;
    let smax = s.first().copied().unwrap_or(0.0);
    let lo = cutoff * smax;
    let nonzero: Vec<f64> = s.into_iter().filter(|&x| x > lo).collect();
    let gap = nonzero.last().copied().unwrap_or(f64::INFINITY);
    Ok((gap, gap <= 10.0 * lo))
}

/// The pieces `X = (I − v11u11)⁺` and `Y = (I − u11v11)⁺` with their gap data.
struct Inverses {
    x: Matrix,
    y: Matrix,
    gap: f64,
    ambiguous: bool,
}

fn inverses(u: &UBlocks, v: &UBlocks, cutoff: f64) -> Result<Inverses> {
    let field = u.u11.field().join(v.u00.field());
    let a = &Matrix::identity(v.u00.rows(), field) - &(&v.u00 * &u.u11);
    let b = &Matrix::identity(u.u11.rows(), field) - &(&u.u11 * &v.u00);
    let (ga, amb_a) = spectral_gap(&a, cutoff)?;
    let (gb, amb_b) = spectral_gap(&b, cutoff)?;
    Ok(Inverses {
        x: linalg::generalized_inverse(&a, cutoff)?,
        y: linalg::generalized_inverse(&b, cutoff)?,
        gap: ga.min(gb),
        ambiguous: amb_a || amb_b,
    })
}

/// `w = [[u00 + u01 X v11 u10, u01 X v12], [v21 Y u10, v22 + v21 Y u11 v12]]`.
pub fn formula_w(u: &UBlocks, v: &UBlocks, cutoff: f64) -> Result<Matrix> {
    let inv = inverses(u, v, cutoff)?;
    Ok(assemble_w(u, v, &inv.x, &inv.y))
}

fn assemble_w(u: &UBlocks, v: &UBlocks, x: &Matrix, y: &Matrix) -> Matrix {
    // In the right factor: v11 = v.u00, v12 = v.u01, v21 = v.u10, v22 = v.u11.
    let (v11, v12, v21, v22) = (&v.u00, &v.u01, &v.u10, &v.u11);
    let u01x = &u.u01 * x;
    let v21y = v21 * y;
    let w00 = &u.u00 + &(&(&u01x * v11) * &u.u10);
    let w01 = &u01x * v12;
    let w10 = &v21y * &u.u10;
    let w11 = v22 + &(&(&v21y * &u.u11) * v12);
    Matrix::from_blocks(&w00, &w01, &w10, &w11)
}

/// Closed-form composition. Falls back to brute force (with a warning) when the
/// spectral-gap check fails.
pub fn compose_formula_detailed(
    l01: &Correspondence,
    l12: &Correspondence,
    cutoff: f64,
    tol: &Tolerances,
) -> Result<FormulaComposition> {
    check_middle(l01, l12)?;
    let (u, v) = (l01.blocks(), l12.blocks());
    let inv = inverses(&u, &v, cutoff)?;
    if inv.ambiguous {
        warn!(
            "spectral gap {:.3e} is within 10x of the cutoff; composing by brute force",
            inv.gap
        );
        let result = compose_bruteforce_corr(l01, l12, tol)?;
        return Ok(FormulaComposition {
            result,
            method: CompositionMethod::BruteForceFallback,
            gap: inv.gap,
            unitarity_residual: 0.0,
        });
    }
    let w = assemble_w(&u, &v, &inv.x, &inv.y);
    let residual = unitarity_residual(&w);
    if residual > tol.proj {
        return Err(Error::NotUnitaryResult { residual });
    }
    let result = Correspondence::from_u(&l01.v0, &l12.v1, w, &Tolerances { proj: residual.max(tol.proj), ..*tol })?;
    Ok(FormulaComposition {
        result,
        method: CompositionMethod::Formula,
        gap: inv.gap,
        unitarity_residual: residual,
    })
}

pub fn compose_formula(
    l01: &Correspondence,
    l12: &Correspondence,
    cutoff: f64,
    tol: &Tolerances,
) -> Result<Correspondence> {
    Ok(compose_formula_detailed(l01, l12, cutoff, tol)?.result)
}

/// Numerical check of the kernel inclusions and orthogonality relations for
/// `1 − v11u11` and `1 − u11v11`.
#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub dim_ker_a: usize,
    pub dim_ker_b: usize,
    /// `dim(ker u01 ∩ ker v21u11)`.
    pub dim_bound_a: usize,
    /// `dim(ker u01v11 ∩ ker v21)`.
    pub dim_bound_b: usize,
    pub max_violation: f64,
}

impl KernelReport {
    pub fn is_proper(&self) -> bool {
        self.dim_ker_a < self.dim_bound_a || self.dim_ker_b < self.dim_bound_b
    }
}

fn image_norm(m: &Matrix, f: &Frame) -> f64 {
    (m * f.basis()).hs_norm()
}

pub fn check_kernel_inclusions(u: &UBlocks, v: &UBlocks, tol: &Tolerances) -> Result<KernelReport> {
    let (v11, v12, v21) = (&v.u00, &v.u01, &v.u10);
    let field = u.u11.field().join(v11.field());
    let a = &Matrix::identity(v11.rows(), field) - &(v11 * &u.u11);
    let b = &Matrix::identity(u.u11.rows(), field) - &(&u.u11 * v11);
    let ka = linalg::null_space_abs(&a, tol.rank_cutoff)?;
    let kb = linalg::null_space_abs(&b, tol.rank_cutoff)?;
    let v21u11 = v21 * &u.u11;
    let u01v11 = &u.u01 * v11;
    let v11u10 = v11 * &u.u10;
    let u11v12 = &u.u11 * v12;
    let violations = [
        image_norm(&u.u01, &ka),
        image_norm(&v21u11, &ka),
        image_norm(&v12.adjoint(), &ka),
        image_norm(&v11u10.adjoint(), &ka),
        image_norm(&u01v11, &kb),
        image_norm(v21, &kb),
        image_norm(&u.u10.adjoint(), &kb),
        image_norm(&u11v12.adjoint(), &kb),
    ];
    let bound_a = linalg::null_space_abs(&Matrix::vstack(&[&u.u01, &v21u11]), tol.rank_cutoff)?;
    let bound_b = linalg::null_space_abs(&Matrix::vstack(&[&u01v11, v21]), tol.rank_cutoff)?;
    Ok(KernelReport {
        dim_ker_a: ka.dim(),
        dim_ker_b: kb.dim(),
        dim_bound_a: bound_a.dim(),
        dim_bound_b: bound_b.dim(),
        max_violation: violations.into_iter().fold(0.0, f64::max),
    })
}

/// Explicit pair with a proper inclusion: `V0 = V2 = 0`, `V1 = (1, 1)`,
/// `u11 = 1`, `v11 = −1`. Here `ker(1 − v11u11) = 0` but the bound is all of `V1⁺`.
pub fn proper_inclusion_example(field: Field, tol: &Tolerances) -> Result<(Correspondence, Correspondence)> {
    let zero = SuperSpace::new(0, 0, field);
    let v1 = SuperSpace::new(1, 1, field);
    let one = Matrix::identity(1, field);
    let l01 = Correspondence::from_u(&zero, &v1, one.clone(), tol)?;
    let l12 = Correspondence::from_u(&v1, &zero, -&one, tol)?;
    Ok((l01, l12))
}
