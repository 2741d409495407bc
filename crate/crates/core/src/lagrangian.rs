//! Isotropic subspaces, the partial-isometry encoding `graph′(u)` and the
//! `u ↔ T` conversions for correspondences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Field, Frame, Matrix, Tolerances};
use crate::super_space::{direct_sum, SuperSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LagKind {
    Isotropic,
    SubLagrangian,
    Lagrangian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: LagKind,
    /// `codim(L ⊕ ΓL)`.
    pub defect_dim: usize,
}

/// `‖basisᴴ Γ basis‖_F`.
pub fn isotropy_residual(space: &SuperSpace, f: &Frame) -> f64 {
    space.b_matrix(f.basis(), f.basis()).hs_norm()
}

pub fn is_isotropic(space: &SuperSpace, f: &Frame, tol: &Tolerances) -> bool {
    f.ambient_dim() == space.dim() && isotropy_residual(space, f) <= tol.proj
}

fn require_isotropic(space: &SuperSpace, f: &Frame, tol: &Tolerances) -> Result<()> {
    if f.ambient_dim() != space.dim() {
        return Err(Error::DimensionMismatch(format!(
            "frame in dimension {}, space has dimension {}",
            f.ambient_dim(),
            space.dim()
        )));
    }
    let residual = isotropy_residual(space, f);
    if residual > tol.proj {
        return Err(Error::NotIsotropic { residual });
    }
    Ok(())
}

/// Frame for `(L ⊕ ΓL)^⊥`.
pub fn defect_frame(space: &SuperSpace, f: &Frame, tol: &Tolerances) -> Result<Frame> {
    let gf = &space.gamma() * f.basis();
    let span = Matrix::hstack(&[f.basis(), &gf]);
    let both = linalg::orthonormalize(&span, tol.rank_cutoff)?;
    both.complement()
}

/// Lagrangian iff `L + ΓL` is everything; otherwise a sub-Lagrangian with the
/// given defect dimension.
pub fn classify(space: &SuperSpace, f: &Frame, tol: &Tolerances) -> Result<Classification> {
    require_isotropic(space, f, tol)?;
    let defect_dim = defect_frame(space, f, tol)?.dim();
    let kind = if defect_dim == 0 {
        LagKind::Lagrangian
    } else {
        LagKind::SubLagrangian
    };
    Ok(Classification { kind, defect_dim })
}

/// A closed isotropic subspace written as `graph′(u)` for a partial isometry
/// `u : V⁺ → V⁻`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphIsometry {
    space: SuperSpace,
    u: Matrix,
}

/// `‖u uᴴ u − u‖_F`.
pub fn partial_isometry_residual(u: &Matrix) -> f64 {
    (&(u * &u.adjoint()) * u).dist(u)
}

impl GraphIsometry {
    pub fn new(space: SuperSpace, u: Matrix, tol: &Tolerances) -> Result<Self> {
        if u.shape() != (space.dim_minus(), space.dim_plus()) {
            return Err(Error::DimensionMismatch(format!(
                "u has shape {:?}, expected {}x{}",
                u.shape(),
                space.dim_minus(),
                space.dim_plus()
            )));
        }
        let residual = partial_isometry_residual(&u);
        if residual > tol.proj {
            return Err(Error::NotPartialIsometry { residual });
        }
        let u = u.promote(space.field());
        Ok(GraphIsometry { space, u })
    }

    pub fn space(&self) -> &SuperSpace {
        &self.space
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn is_unitary(&self, tol: &Tolerances) -> bool {
        let (q, p) = self.u.shape();
        p == q && (&self.u.adjoint() * &self.u).dist(&Matrix::identity(p, self.u.field())) <= tol.proj
    }

    /// `ker(u)` in `V⁺` coordinates.
    pub fn kernel(&self, tol: &Tolerances) -> Result<Frame> {
        linalg::null_space(&self.u, tol.rank_cutoff)
    }

    /// `ker(uᴴ)` in `V⁻` coordinates.
    pub fn cokernel(&self, tol: &Tolerances) -> Result<Frame> {
        linalg::null_space(&self.u.adjoint(), tol.rank_cutoff)
    }
}

/// Recovers the unique `u` with `graph′(u) = span(F)`.
pub fn to_graph_isometry(space: &SuperSpace, f: &Frame, tol: &Tolerances) -> Result<GraphIsometry> {
    require_isotropic(space, f, tol)?;
    let p = space.dim_plus();
    let bp = f.basis().row_range(0, p);
    let bm = f.basis().row_range(p, space.dim_minus());
    // x⁺ ↦ x⁻ on the projection of L to V⁺, zero on its complement.
    let u = &bm * &linalg::generalized_inverse(&bp, tol.rank_cutoff)?;
    GraphIsometry::new(space.clone(), u.promote(space.field()), tol)
}

/// Orthonormal frame `[W; uW]/√2` where `W` spans `ker(u)^⊥`.
pub fn from_graph_isometry(g: &GraphIsometry, tol: &Tolerances) -> Result<Frame> {
    let w = linalg::orthonormalize(&g.u.adjoint(), tol.rank_cutoff)?;
    let uw = &g.u * w.basis();
    let basis = Matrix::vstack(&[w.basis(), &uw]).scale(std::f64::consts::FRAC_1_SQRT_2);
    Frame::new(basis, &Tolerances { ortho: tol.proj, ..*tol })
}

/// `ΓL = graph′(−u)`.
pub fn gamma_image(g: &GraphIsometry) -> GraphIsometry {
    GraphIsometry {
        space: g.space.clone(),
        u: -&g.u,
    }
}

/// `P_L = ½ [[uᴴu, uᴴ], [u, uuᴴ]]`.
pub fn projection_formula(g: &GraphIsometry) -> Matrix {
    let u = &g.u;
    let uh = u.adjoint();
    Matrix::from_blocks(&(&uh * u), &uh, u, &(u * &uh)).scale(0.5)
}

/// Dimensions of a correspondence `V0 → V1`.
///
/// Two coordinate systems are used on `ΠV0 ⊕ V1`:
/// * sum coordinates `[V0⁻, V1⁺ | V0⁺, V1⁻]` (its standard super-space layout),
/// * pair coordinates `[V0⁺, V0⁻, V1⁺, V1⁻]` in which graphs of `T: V0 → V1` live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairLayout {
    pub p0: usize,
    pub q0: usize,
    pub p1: usize,
    pub q1: usize,
}

impl PairLayout {
    pub fn new(v0: &SuperSpace, v1: &SuperSpace) -> Self {
        PairLayout {
            p0: v0.dim_plus(),
            q0: v0.dim_minus(),
            p1: v1.dim_plus(),
            q1: v1.dim_minus(),
        }
    }

    pub fn dim(&self) -> usize {
        self.p0 + self.q0 + self.p1 + self.q1
    }

    pub fn dim0(&self) -> usize {
        self.p0 + self.q0
    }

    pub fn dim1(&self) -> usize {
        self.p1 + self.q1
    }

    /// Whether a Lagrangian exists: `dim (ΠV0⊕V1)⁺ = dim (ΠV0⊕V1)⁻`.
    pub fn balanced(&self) -> bool {
        self.q0 + self.p1 == self.p0 + self.q1
    }

    /// `perm[i]` is the pair index of sum coordinate `i`.
    pub fn sum_to_pair_index(&self) -> Vec<usize> {
        let PairLayout { p0, q0, p1, q1 } = *self;
        (p0..p0 + q0)
            .chain(p0 + q0..p0 + q0 + p1)
            .chain(0..p0)
            .chain(p0 + q0 + p1..p0 + q0 + p1 + q1)
            .collect()
    }

    /// `S` with `x_sum = S x_pair`.
    pub fn pair_to_sum(&self, field: Field) -> Matrix {
        Matrix::identity(self.dim(), field).select_rows(&self.sum_to_pair_index())
    }

    /// Sum-coordinate indices of the `V0` block, then of the `V1` block.
    pub fn block_indices(&self) -> (Vec<usize>, Vec<usize>) {
        let PairLayout { p0, q0, p1, q1 } = *self;
        let b0 = (0..q0).chain(q0 + p1..q0 + p1 + p0).collect();
        let b1 = (q0..q0 + p1).chain(q0 + p1 + p0..q0 + p1 + p0 + q1).collect();
        (b0, b1)
    }
}

/// `ΠV0 ⊕ V1`.
pub fn correspondence_space(v0: &SuperSpace, v1: &SuperSpace) -> Result<SuperSpace> {
    Ok(direct_sum(&v0.opposite(), v1)?.space)
}

/// Blocks of `u : V0⁻ ⊕ V1⁺ → V0⁺ ⊕ V1⁻`.
#[derive(Clone, Debug, PartialEq)]
pub struct UBlocks {
    /// `V0⁻ → V0⁺`
    pub u00: Matrix,
    /// `V1⁺ → V0⁺`
    pub u01: Matrix,
    /// `V0⁻ → V1⁻`
    pub u10: Matrix,
    /// `V1⁺ → V1⁻`
    pub u11: Matrix,
}

impl UBlocks {
    pub fn split(u: &Matrix, layout: &PairLayout) -> Result<Self> {
        let PairLayout { p0, q0, p1, q1 } = *layout;
        if u.shape() != (p0 + q1, q0 + p1) {
            return Err(Error::DimensionMismatch(format!(
                "u has shape {:?}, layout needs {}x{}",
                u.shape(),
                p0 + q1,
                q0 + p1
            )));
        }
        Ok(UBlocks {
            u00: u.block(0, 0, p0, q0),
            u01: u.block(0, q0, p0, p1),
            u10: u.block(p0, 0, q1, q0),
            u11: u.block(p0, q0, q1, p1),
        })
    }

    pub fn assemble(&self) -> Matrix {
        Matrix::from_blocks(&self.u00, &self.u01, &self.u10, &self.u11)
    }
}

/// Blocks of `T : V0 → V1` (rows `V1⁺, V1⁻`, columns `V0⁺, V0⁻`).
#[derive(Clone, Debug, PartialEq)]
pub struct TBlocks {
    pub tpp: Matrix,
    pub tpm: Matrix,
    pub tmp: Matrix,
    pub tmm: Matrix,
}

impl TBlocks {
    pub fn split(t: &Matrix, layout: &PairLayout) -> Result<Self> {
        let PairLayout { p0, q0, p1, q1 } = *layout;
        if t.shape() != (p1 + q1, p0 + q0) {
            return Err(Error::DimensionMismatch(format!(
                "T has shape {:?}, layout needs {}x{}",
                t.shape(),
                p1 + q1,
                p0 + q0
            )));
        }
        Ok(TBlocks {
            tpp: t.block(0, 0, p1, p0),
            tpm: t.block(0, p0, p1, q0),
            tmp: t.block(p1, 0, q1, p0),
            tmm: t.block(p1, p0, q1, q0),
        })
    }

    pub fn assemble(&self) -> Matrix {
        Matrix::from_blocks(&self.tpp, &self.tpm, &self.tmp, &self.tmm)
    }
}

fn inverse_block(m: &Matrix, block: &'static str, tol: &Tolerances) -> Result<Matrix> {
    m.inverse(tol.rank_cutoff).map_err(|e| match e {
        Error::Singular { sigma_min } => Error::SingularBlock { block, sigma_min },
        Error::DimensionMismatch(_) => Error::SingularBlock { block, sigma_min: 0.0 },
        other => other,
    })
}

/// `T = [[u01⁻¹, −u01⁻¹u00], [u11u01⁻¹, u10 − u11u01⁻¹u00]]`.
pub fn u_to_t(u: &Matrix, layout: &PairLayout, tol: &Tolerances) -> Result<Matrix> {
    let b = UBlocks::split(u, layout)?;
    let inv = inverse_block(&b.u01, "u01", tol)?;
    let inv_u00 = &inv * &b.u00;
    let u11_inv = &b.u11 * &inv;
    Ok(TBlocks {
        tpp: inv.clone(),
        tpm: -&inv_u00,
        tmp: u11_inv.clone(),
        tmm: &b.u10 - &(&u11_inv * &b.u00),
    }
    .assemble())
}

/// `u = [[−T++⁻¹T+−, T++⁻¹], [T−− − T−+T++⁻¹T+−, T−+T++⁻¹]]`, after checking
/// that `graph(T)` is a Lagrangian.
pub fn t_to_u(
    t: &Matrix,
    v0: &SuperSpace,
    v1: &SuperSpace,
    tol: &Tolerances,
) -> Result<Matrix> {
    let layout = PairLayout::new(v0, v1);
    let b = TBlocks::split(t, &layout)?;
    if !is_lagrangian_graph(t, v0, v1, tol)? {
        return Err(Error::NotLagrangian("graph(T) fails T⁻¹ = Γ0 Tᴴ Γ1".into()));
    }
    t_to_u_unchecked(&b, tol)
}

pub(crate) fn t_to_u_unchecked(b: &TBlocks, tol: &Tolerances) -> Result<Matrix> {
    let inv = inverse_block(&b.tpp, "T++", tol)?;
    let inv_tpm = &inv * &b.tpm;
    let tmp_inv = &b.tmp * &inv;
    Ok(UBlocks {
        u00: -&inv_tpm,
        u01: inv,
        u10: &b.tmm - &(&tmp_inv * &b.tpm),
        u11: tmp_inv,
    }
    .assemble())
}

/// Residual `‖T⁻¹ − Γ0 Tᴴ Γ1‖_F` and the condition-scaled threshold it is compared against.
pub fn lagrangian_graph_residual(
    t: &Matrix,
    v0: &SuperSpace,
    v1: &SuperSpace,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    if t.shape() != (v1.dim(), v0.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "T has shape {:?}, expected {}x{}",
            t.shape(),
            v1.dim(),
            v0.dim()
        )));
    }
    lagrangian_graph_residual_gamma(t, &v0.gamma(), &v1.gamma(), tol)
}

/// As [`lagrangian_graph_residual`], with the gradings given as arbitrary
/// self-adjoint involutions in the coordinates of `T`.
pub fn lagrangian_graph_residual_gamma(
    t: &Matrix,
    gamma0: &Matrix,
    gamma1: &Matrix,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    if t.shape() != (gamma1.rows(), gamma0.rows()) {
        return Err(Error::DimensionMismatch(format!("T has shape {:?}", t.shape())));
    }
    if !t.is_square() {
        return Err(Error::Singular { sigma_min: 0.0 });
    }
    if t.rows() == 0 {
        return Ok((0.0, tol.proj));
    }
    let s = linalg::singular_values(t)?;
    let smin = *s.last().unwrap();
    if smin == 0.0 {
        return Err(Error::Singular { sigma_min: smin });
    }
    let inv = t
        .data()
        .clone()
        .try_inverse()
        .filter(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
        .ok_or(Error::Singular { sigma_min: smin })?;
    let inv = Matrix::from_dmatrix(inv, t.field());
    let target = &(gamma0 * &t.adjoint()) * gamma1;
    let cond = s[0] / smin;
    Ok((inv.dist(&target), tol.proj * cond.max(1.0)))
}

/// `T⁻¹ = Γ0 Tᴴ Γ1` within `εproj·max(1, cond T)`.
pub fn is_lagrangian_graph(t: &Matrix, v0: &SuperSpace, v1: &SuperSpace, tol: &Tolerances) -> Result<bool> {
    let (res, thr) = lagrangian_graph_residual(t, v0, v1, tol)?;
    Ok(res <= thr)
}

/// Frame of `graph(T)` in sum coordinates.
pub fn graph_t_frame(t: &Matrix, layout: &PairLayout, tol: &Tolerances) -> Result<Frame> {
    if t.shape() != (layout.dim1(), layout.dim0()) {
        return Err(Error::DimensionMismatch(format!("T has shape {:?}", t.shape())));
    }
    let pair = Matrix::vstack(&[&Matrix::identity(layout.dim0(), t.field()), t]);
    let sum = &layout.pair_to_sum(t.field()) * &pair;
    linalg::orthonormalize(&sum, tol.rank_cutoff)
}

/// Frame of `graph′(u)` in sum coordinates of `ΠV0 ⊕ V1`.
pub fn graph_u_frame(u: &Matrix, v0: &SuperSpace, v1: &SuperSpace, tol: &Tolerances) -> Result<Frame> {
    let space = correspondence_space(v0, v1)?;
    from_graph_isometry(&GraphIsometry::new(space, u.clone(), tol)?, tol)
}

/// No unit vector of `span(F)` lies in `V0 ⊕ 0` or `0 ⊕ V1` (sum coordinates).
pub fn general_position(v0: &SuperSpace, v1: &SuperSpace, f: &Frame, tol: &Tolerances) -> Result<bool> {
    let layout = PairLayout::new(v0, v1);
    if f.ambient_dim() != layout.dim() {
        return Err(Error::DimensionMismatch(format!(
            "frame in dimension {}, expected {}",
            f.ambient_dim(),
            layout.dim()
        )));
    }
    let (b0, b1) = layout.block_indices();
    for idx in [b0, b1] {
        if idx.is_empty() || f.dim() == 0 {
            continue;
        }
        let rows = f.basis().select_rows(&idx);
        let top = linalg::singular_values(&rows)?.first().copied().unwrap_or(0.0);
        if top >= 1.0 - tol.proj {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn real(rows: usize, cols: usize, e: &[f64]) -> Matrix {
        Matrix::from_real_rows(rows, cols, e)
    }

    fn rot(a: f64) -> Matrix {
        real(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()])
    }

    #[test]
    fn isotropy_examples() {
        let v = SuperSpace::new(1, 1, Field::Real);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let diag = Frame::new(real(2, 1, &[s, s]), &tol()).unwrap();
        assert!(is_isotropic(&v, &diag, &tol()));
        let plus = Frame::new(real(2, 1, &[1.0, 0.0]), &tol()).unwrap();
        assert!(!is_isotropic(&v, &plus, &tol()));
        assert_eq!(classify(&v, &diag, &tol()).unwrap().kind, LagKind::Lagrangian);
        let zero = classify(&v, &Frame::empty(2, Field::Real), &tol()).unwrap();
        assert_eq!((zero.kind, zero.defect_dim), (LagKind::SubLagrangian, 2));
        assert!(matches!(classify(&v, &plus, &tol()), Err(Error::NotIsotropic { .. })));
    }

    #[test]
    fn partial_isometry_defect() {
        let v = SuperSpace::new(2, 2, Field::Real);
        let g = GraphIsometry::new(v.clone(), Matrix::diag_real(&[1.0, 0.0], Field::Real), &tol()).unwrap();
        let f = from_graph_isometry(&g, &tol()).unwrap();
        assert_eq!(f.dim(), 1);
        let c = classify(&v, &f, &tol()).unwrap();
        assert_eq!((c.kind, c.defect_dim), (LagKind::SubLagrangian, 2));
    }

    #[test]
    fn graph_isometry_roundtrips_small() {
        let v = SuperSpace::new(1, 1, Field::Real);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let diag = Frame::new(real(2, 1, &[s, s]), &tol()).unwrap();
        let g = to_graph_isometry(&v, &diag, &tol()).unwrap();
        assert!((g.u().get(0, 0).re - 1.0).abs() < 1e-14);
        let z = to_graph_isometry(&v, &Frame::empty(2, Field::Real), &tol()).unwrap();
        assert_eq!(z.u().hs_norm(), 0.0);
        assert_eq!(from_graph_isometry(&z, &tol()).unwrap().dim(), 0);
    }

    #[test]
    fn gamma_image_of_diagonal() {
        let v = SuperSpace::new(1, 1, Field::Real);
        let g = GraphIsometry::new(v.clone(), Matrix::identity(1, Field::Real), &tol()).unwrap();
        let f = from_graph_isometry(&gamma_image(&g), &tol()).unwrap();
        let p = f.projector();
        assert!(p.dist(&real(2, 2, &[0.5, -0.5, -0.5, 0.5])) < 1e-15);
        let gp = &(&v.gamma() * &from_graph_isometry(&g, &tol()).unwrap().projector()) * &v.gamma();
        assert!(p.dist(&gp) < 1e-15);
    }

    #[test]
    fn projection_formula_small() {
        let v = SuperSpace::new(1, 1, Field::Real);
        let g = GraphIsometry::new(v.clone(), Matrix::identity(1, Field::Real), &tol()).unwrap();
        assert!(projection_formula(&g).dist(&real(2, 2, &[0.5, 0.5, 0.5, 0.5])) < 1e-15);
        let z = GraphIsometry::new(v, Matrix::zeros(1, 1, Field::Real), &tol()).unwrap();
        assert_eq!(projection_formula(&z).hs_norm(), 0.0);
    }

    #[test]
    fn rejects_non_partial_isometry() {
        let v = SuperSpace::new(1, 1, Field::Real);
        let e = GraphIsometry::new(v, real(1, 1, &[2.0]), &tol());
        assert!(matches!(e, Err(Error::NotPartialIsometry { .. })));
    }

    #[test]
    fn rotation_via_formula() {
        let v = SuperSpace::new(1, 1, Field::Real);
        let layout = PairLayout::new(&v, &v);
        for a in [std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_3] {
            let t = u_to_t(&rot(a), &layout, &tol()).unwrap();
            let (csc, cot) = (1.0 / a.sin(), a.cos() / a.sin());
            assert!(t.dist(&real(2, 2, &[-csc, cot, -cot, csc])) < 1e-12);
            assert!(is_lagrangian_graph(&t, &v, &v, &tol()).unwrap());
            let back = t_to_u(&t, &v, &v, &tol()).unwrap();
            assert!(back.dist(&rot(a)) < 1e-10);
            let gu = graph_u_frame(&rot(a), &v, &v, &tol()).unwrap();
            let gt = graph_t_frame(&t, &layout, &tol()).unwrap();
            assert!(gu.distance(&gt) < 1e-12);
            assert!(general_position(&v, &v, &gu, &tol()).unwrap());
        }
    }

    #[test]
    fn printed_rotation_matrix_is_not_a_lagrangian_graph() {
        let v = SuperSpace::new(1, 1, Field::Real);
        let a = std::f64::consts::FRAC_PI_4;
        let (csc, cot) = (1.0 / a.sin(), a.cos() / a.sin());
        let t = real(2, 2, &[cot, -csc, csc, cot]);
        assert!(!is_lagrangian_graph(&t, &v, &v, &tol()).unwrap());
    }

    #[test]
    fn identity_and_off_diagonal() {
        let v = SuperSpace::new(1, 1, Field::Real);
        let u = t_to_u(&Matrix::identity(2, Field::Real), &v, &v, &tol()).unwrap();
        assert!(u.dist(&real(2, 2, &[0.0, 1.0, 1.0, 0.0])) < 1e-15);
        let off = real(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let t = u_to_t(&off, &PairLayout::new(&v, &v), &tol()).unwrap();
        assert!(t.dist(&real(2, 2, &[-1.0, 0.0, 0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn lagrangian_graph_checks() {
        let v = SuperSpace::new(1, 1, Field::Real);
        assert!(!is_lagrangian_graph(&Matrix::identity(2, Field::Real).scale(2.0), &v, &v, &tol()).unwrap());
        let w = SuperSpace::new(1, 1, Field::Complex);
        let i = C64::new(0.0, 1.0);
        let t = Matrix::diag(&[i, C64::new(1.0, 0.0)], Field::Complex);
        assert!(is_lagrangian_graph(&t, &w, &w, &tol()).unwrap());
        assert!(matches!(
            is_lagrangian_graph(&Matrix::zeros(2, 2, Field::Real), &v, &v, &tol()),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn singular_u01() {
        let v = SuperSpace::new(1, 1, Field::Real);
        let u = Matrix::identity(2, Field::Real);
        assert!(matches!(
            u_to_t(&u, &PairLayout::new(&v, &v), &tol()),
            Err(Error::SingularBlock { block: "u01", .. })
        ));
        let f = graph_u_frame(&u, &v, &v, &tol()).unwrap();
        assert!(!general_position(&v, &v, &f, &tol()).unwrap());
    }
}
