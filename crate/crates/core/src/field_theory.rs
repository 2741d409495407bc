//! Truncated spectral model of the free fermion on circles and cylinders.
//!
//! Each positive eigenvalue `λ` of the boundary Dirac operator has real
//! multiplicity `2m`. With `p_{λ,k} = (φ_{λ,k} + Γφ_{λ,k})/√2` spanning `V⁺` and
//! `q_{λ,k} = (φ_{λ,k} − Γφ_{λ,k})/√2` spanning `V⁻`, the operator is
//! `D p = λ q`, `D q = λ p`. Zero modes (periodic spin structure) form `m|m`.
//!
//! Convention: the cylinder of length `ℓ` maps the incoming trace `φ_λ` to
//! `e^{ℓλ} φ_λ`, which makes it close to the positive-spectrum APS polarization
//! on both ends.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{self, IndexClass};
use crate::composition::{compose_formula_detailed, CompositionMethod, Correspondence};
use crate::error::{Error, Result};
use crate::lagrangian::{self, GraphIsometry};
use crate::linalg::{self, Field, Frame, Matrix, Tolerances, C64};
use crate::polarization::{self, PolarizedSpace};
use crate::sequence::{self, diagonal_pair_u, Lattice, PairEntry, StructuredOp, TailSymbol};
use crate::super_space::SuperSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spin {
    /// `λ_n = n + ½`
    Antiperiodic,
    /// `λ_n = n`
    Periodic,
}

impl Spin {
    pub fn lattice(self) -> Lattice {
        match self {
            Spin::Antiperiodic => Lattice::HalfInteger,
            Spin::Periodic => Lattice::Integer,
        }
    }

    /// Positive eigenvalues up to truncation `n`.
    pub fn positive_spectrum(self, n: usize) -> Vec<f64> {
        match self {
            Spin::Antiperiodic => (0..=n).map(|k| k as f64 + 0.5).collect(),
            Spin::Periodic => (1..=n).map(|k| k as f64).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub spin: Spin,
    pub modes: usize,
    pub multiplicity: usize,
}

/// A closed 1-manifold given by its boundary Dirac spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralObject {
    components: Vec<Circle>,
    /// Degree `d − 1 = 1` tag: carry the `Cl_1` action.
    clifford: bool,
    reversed: bool,
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    /// `0` for zero modes.
    lambda: f64,
    /// Partner slot under the `Cl_1` generator (`None` for zero modes, which pair `V⁺` with `V⁻`).
    cl_partner: Option<(usize, f64)>,
}

impl SpectralObject {
    pub fn circle(spin: Spin, modes: usize, multiplicity: usize, clifford: bool) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::Malformed("multiplicity must be at least 1".into()));
        }
        Ok(SpectralObject {
            components: vec![Circle { spin, modes, multiplicity }],
            clifford,
            reversed: false,
        })
    }

    pub fn components(&self) -> &[Circle] {
        &self.components
    }

    pub fn has_clifford(&self) -> bool {
        self.clifford
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn degree(&self) -> usize {
        usize::from(self.clifford)
    }

    pub fn has_zero_modes(&self) -> bool {
        self.components.iter().any(|c| c.spin == Spin::Periodic)
    }

    /// Disjoint union; component spaces are stacked in order.
    pub fn union(&self, other: &SpectralObject) -> Result<SpectralObject> {
        if self.clifford != other.clifford {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        if self.reversed != other.reversed {
            return Err(Error::SpaceMismatch("cannot join objects of opposite orientation".into()));
        }
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        Ok(SpectralObject { components, ..self.clone() })
    }

    /// Orientation reversal.
    pub fn opposite(&self) -> SpectralObject {
        SpectralObject {
            reversed: !self.reversed,
            ..self.clone()
        }
    }

    pub fn with_truncation(&self, modes: usize) -> SpectralObject {
        let mut out = self.clone();
        for c in &mut out.components {
            c.modes = modes;
        }
        out
    }

    fn slots(&self) -> Vec<Slot> {
        let mut slots = Vec::new();
        for c in &self.components {
            if c.spin == Spin::Periodic {
                for _ in 0..c.multiplicity {
                    slots.push(Slot { lambda: 0.0, cl_partner: None });
                }
            }
            for lambda in c.spin.positive_spectrum(c.modes) {
                let base = slots.len();
                for j in 0..c.multiplicity {
                    let (a, b) = (base + 2 * j, base + 2 * j + 1);
                    slots.push(Slot { lambda, cl_partner: Some((b, 1.0)) });
                    slots.push(Slot { lambda, cl_partner: Some((a, -1.0)) });
                }
            }
        }
        slots
    }

    /// `V_X` with the orientation ignored.
    fn forward_space(&self, tol: &Tolerances) -> Result<SuperSpace> {
        let slots = self.slots();
        let p = slots.len();
        if !self.clifford {
            return Ok(SuperSpace::new(p, p, Field::Real));
        }
        let mut e = Matrix::zeros(2 * p, 2 * p, Field::Real);
        let r = |x: f64| C64::new(x, 0.0);
        for (i, s) in slots.iter().enumerate() {
            match s.cl_partner {
                None => {
                    e.set(p + i, i, r(1.0));
                    e.set(i, p + i, r(-1.0));
                }
                // e p_i = σ q_j and e q_i = σ p_j
                Some((j, sigma)) => {
                    e.set(p + j, i, r(sigma));
                    e.set(j, p + i, r(sigma));
                }
            }
        }
        SuperSpace::with_clifford(p, p, Field::Real, vec![e], tol)
    }

    /// `V_X`; the reversed object lives on `ΠV_X`.
    pub fn space(&self, tol: &Tolerances) -> Result<SuperSpace> {
        let v = self.forward_space(tol)?;
        Ok(if self.reversed { v.opposite() } else { v })
    }

    /// Boundary Dirac operator as an odd self-adjoint matrix on [`space`](Self::space).
    pub fn dirac(&self) -> Matrix {
        let slots = self.slots();
        let lam: Vec<f64> = slots.iter().map(|s| s.lambda).collect();
        let l = Matrix::diag_real(&lam, Field::Real);
        let z = Matrix::zeros(slots.len(), slots.len(), Field::Real);
        let d = Matrix::from_blocks(&z, &l, &l, &z);
        if self.reversed {
            let p = SuperSpace::new(slots.len(), slots.len(), Field::Real).to_opposite_map();
            -&(&(&p * &d) * &p.adjoint())
        } else {
            d
        }
    }

    /// Empty space of the same degree.
    pub fn empty_space(&self, tol: &Tolerances) -> Result<SuperSpace> {
        empty_space(self.degree(), tol)
    }
}

fn empty_space(degree: usize, tol: &Tolerances) -> Result<SuperSpace> {
    SuperSpace::with_clifford(0, 0, Field::Real, vec![Matrix::zeros(0, 0, Field::Real); degree], tol)
}

/// The APS sub-Lagrangian `⊕_{λ>0} Eig(D, λ)` as a graph isometry.
pub fn aps_sublagrangian(obj: &SpectralObject, tol: &Tolerances) -> Result<GraphIsometry> {
    Ok(aps_polarized(obj, tol)?.reference().clone())
}

/// `V_X` polarized by its APS sub-Lagrangian: `w = I` on positive slots, `0` on zero modes.
pub fn aps_polarized(obj: &SpectralObject, tol: &Tolerances) -> Result<PolarizedSpace> {
    let forward = SpectralObject {
        reversed: false,
        ..obj.clone()
    };
    let space = forward.forward_space(tol)?;
    let diag: Vec<f64> = forward
        .slots()
        .iter()
        .map(|s| if s.lambda > 0.0 { 1.0 } else { 0.0 })
        .collect();
    let p = PolarizedSpace::new(space, Matrix::diag_real(&diag, Field::Real), tol)?;
    if obj.reversed {
        polarization::opposite_polarized(&p, tol)
    } else {
        Ok(p)
    }
}

/// Positive spectral subspace computed directly from the Dirac matrix.
pub fn aps_from_dirac(obj: &SpectralObject, tol: &Tolerances) -> Result<GraphIsometry> {
    let space = obj.space(tol)?;
    let (vals, vecs) = linalg::eigh(&obj.dirac())?;
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.25).collect();
    let basis = Matrix::from_fn(space.dim(), keep.len(), Field::Real, |i, j| vecs.get(i, keep[j]));
    let frame = Frame::new(basis, &Tolerances { ortho: tol.proj, ..*tol })?;
    lagrangian::to_graph_isometry(&space, &frame, tol)
}

/// Index of the APS sub-Lagrangian: the class of the zero-mode module.
pub fn aps_index(obj: &SpectralObject, tol: &Tolerances) -> Result<IndexClass> {
    clifford::sublagrangian_index(&aps_sublagrangian(obj, tol)?, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BordismKind {
    Cylinder { length: f64 },
    HalfDisc { side: Side },
    Identity,
    /// A closed surface: the empty correspondence.
    Closed,
}

impl BordismKind {
    fn validate(&self) -> Result<()> {
        match *self {
            BordismKind::Cylinder { length } if !(length >= 0.0 && length.is_finite()) => {
                Err(Error::UnsupportedBordism(format!("cylinder length {length}")))
            }
            _ => Ok(()),
        }
    }

    fn stretch(&self) -> Option<f64> {
        match *self {
            BordismKind::Cylinder { length } => Some(length),
            BordismKind::Identity => Some(0.0),
            _ => None,
        }
    }
}

/// Symbol of the cylinder solution operator on one circle.
pub fn structured_cylinder(spin: Spin, length: f64) -> StructuredOp {
    let tail = match spin {
        Spin::Antiperiodic => TailSymbol::ApsExp { c: 1.0, l: -length },
        Spin::Periodic => TailSymbol::Exp { c: 1.0, alpha: length },
    };
    StructuredOp::multiplication(spin.lattice(), 0, tail)
}

/// Boundary-value Lagrangian of a bordism over `obj`.
pub fn bordism_lagrangian(kind: &BordismKind, obj: &SpectralObject, tol: &Tolerances) -> Result<Correspondence> {
    kind.validate()?;
    if obj.reversed {
        return Err(Error::UnsupportedBordism("bordisms are built over positively oriented objects".into()));
    }
    let v = obj.space(tol)?;
    let empty = obj.empty_space(tol)?;
    let p = v.dim_plus();
    if let Some(length) = kind.stretch() {
        let pairs: Vec<PairEntry> = obj
            .slots()
            .iter()
            .enumerate()
            .map(|(i, s)| PairEntry::from_log(i, i, length * s.lambda, 1.0))
            .collect();
        return Correspondence::from_u(&v, &v, diagonal_pair_u(p, p, &pairs, &[]), tol);
    }
    match *kind {
        BordismKind::HalfDisc { side } => {
            if obj.has_zero_modes() {
                return Err(Error::UnsupportedBordism(
                    "half-discs need a spectrum without zero modes".into(),
                ));
            }
            match side {
                Side::Out => Correspondence::from_u(&empty, &v, Matrix::identity(p, Field::Real), tol),
                Side::In => Correspondence::from_u(&v, &empty, -&Matrix::identity(p, Field::Real), tol),
            }
        }
        BordismKind::Closed => Correspondence::from_u(&empty, &empty, Matrix::zeros(0, 0, Field::Real), tol),
        _ => unreachable!(),
    }
}

/// The bordism obtained by gluing `first` and then `then` along their common boundary.
pub fn glue(first: &BordismKind, then: &BordismKind) -> Result<BordismKind> {
    use BordismKind::*;
    first.validate()?;
    then.validate()?;
    Ok(match (*first, *then) {
        (Identity, k) | (k, Identity) if !matches!(k, Closed) => k,
        (Cylinder { length: a }, Cylinder { length: b }) => Cylinder { length: a + b },
        (HalfDisc { side: Side::Out }, Cylinder { .. }) => HalfDisc { side: Side::Out },
        (Cylinder { .. }, HalfDisc { side: Side::In }) => HalfDisc { side: Side::In },
        (HalfDisc { side: Side::Out }, HalfDisc { side: Side::In }) => Closed,
        (a, b) => return Err(Error::NotComposableKinds(format!("{a:?} then {b:?}"))),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueReport {
    pub first: BordismKind,
    pub then: BordismKind,
    pub glued: BordismKind,
    pub modes: usize,
    /// Symbol of the composite equals the symbol of the glued cylinder, per spin.
    pub structured_exact: Option<bool>,
    /// Projector distance between the composite and the glued Lagrangian.
    pub dense_distance: f64,
    pub method: CompositionMethod,
    pub passed: bool,
}

/// Checks `L_{glued} = L_{then} ∘ L_{first}` structurally and in the truncation.
pub fn glue_check(
    first: &BordismKind,
    then: &BordismKind,
    obj: &SpectralObject,
    cutoff: f64,
    threshold: f64,
    tol: &Tolerances,
) -> Result<GlueReport> {
    let glued = glue(first, then)?;
    let structured_exact = match (first.stretch(), then.stretch(), glued.stretch()) {
        (Some(a), Some(b), Some(c)) => {
            let mut ok = true;
            for circle in &obj.components {
                let r = sequence::compose_structured(
                    &structured_cylinder(circle.spin, a),
                    &structured_cylinder(circle.spin, b),
                )?;
                ok &= r.is_closed() && *r.operator() == structured_cylinder(circle.spin, c);
            }
            Some(ok)
        }
        _ => None,
    };
    let l1 = bordism_lagrangian(first, obj, tol)?;
    let l2 = bordism_lagrangian(then, obj, tol)?;
    let composed = compose_formula_detailed(&l1, &l2, cutoff, tol)?;
    let expected = bordism_lagrangian(&glued, obj, tol)?;
    let dense_distance = composed.result.distance(&expected);
    Ok(GlueReport {
        first: *first,
        then: *then,
        glued,
        modes: obj.components.iter().map(|c| c.modes).max().unwrap_or(0),
        structured_exact,
        dense_distance,
        method: composed.method,
        passed: structured_exact.unwrap_or(true) && dense_distance <= threshold,
    })
}

/// Cylinder gluing over a grid of lengths and truncations, in parallel.
pub fn cylinder_grid(
    lengths: &[f64],
    truncations: &[usize],
    obj: &SpectralObject,
    threshold: f64,
    tol: &Tolerances,
) -> Result<Vec<GlueReport>> {
    let mut cells = Vec::new();
    for &n in truncations {
        for &a in lengths {
            for &b in lengths {
                cells.push((n, a, b));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(n, a, b)| {
            glue_check(
                &BordismKind::Cylinder { length: a },
                &BordismKind::Cylinder { length: b },
                &obj.with_truncation(n),
                tol.rank_cutoff,
                threshold,
                tol,
            )
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosenessReport {
    /// Exact verdict from the tail of the deviation symbol.
    pub structured: bool,
    /// `(N, ‖u − diag(−w0ᴴ, w1)‖_HS)` over the truncation ladder.
    pub ladder: Vec<(usize, f64)>,
    /// The `N → ∞` limit of the ladder, from the closed-form series.
    pub limit: f64,
    pub dense_bounded: bool,
    pub close: bool,
}

/// Squared Type2 deviation of one cylinder slot pair with `x = ℓλ`.
fn slot_deviation_sq(x: f64) -> f64 {
    2.0 * (1.0 - x.tanh()).powi(2) + 2.0 / x.cosh().powi(2)
}

fn limit_norm(length: f64, obj: &SpectralObject) -> f64 {
    let mut total = 0.0;
    for c in &obj.components {
        if c.spin == Spin::Periodic {
            total += 2.0 * c.multiplicity as f64;
        }
        if length <= 0.0 {
            return f64::INFINITY;
        }
        let mut k = 0usize;
        loop {
            let lambda = match c.spin {
                Spin::Antiperiodic => k as f64 + 0.5,
                Spin::Periodic => k as f64 + 1.0,
            };
            let term = 2.0 * c.multiplicity as f64 * slot_deviation_sq(length * lambda);
            total += term;
            if term < 1e-300 || term < 1e-18 * total {
                break;
            }
            k += 1;
        }
    }
    total.sqrt()
}

/// Whether the bordism Lagrangian is close to the APS polarizations of its ends.
pub fn closeness_to_aps(kind: &BordismKind, obj: &SpectralObject, tol: &Tolerances) -> Result<ClosenessReport> {
    kind.validate()?;
    let (structured, limit) = match kind.stretch() {
        Some(length) => {
            let mut ok = true;
            for c in &obj.components {
                // Deviation from the reference decays like the reciprocal symbol on λ > 0.
                let recip = structured_cylinder(c.spin, length).tail().reciprocal();
                ok &= recip.is_some_and(|s| s.is_square_summable(Lattice::Natural));
            }
            (ok, limit_norm(length, obj))
        }
        None => (true, 0.0),
    };
    let mut ladder = Vec::new();
    for n in [8usize, 16, 32] {
        let o = obj.with_truncation(n);
        let c = bordism_lagrangian(kind, &o, tol)?;
        let aps = aps_polarized(&o, tol)?;
        let empty = PolarizedSpace::new(o.empty_space(tol)?, Matrix::zeros(0, 0, Field::Real), tol)?;
        let (p0, p1) = match kind {
            BordismKind::HalfDisc { side: Side::Out } => (&empty, &aps),
            BordismKind::HalfDisc { side: Side::In } => (&aps, &empty),
            BordismKind::Closed => (&empty, &empty),
            _ => (&aps, &aps),
        };
        ladder.push((n, polarization::morphism_residuals(p0, p1, &c)?.type2));
    }
    let dense_bounded = limit.is_finite() && ladder.iter().all(|&(_, r)| r <= limit * (1.0 + 1e-9) + 1e-12);
    Ok(ClosenessReport {
        structured,
        ladder,
        limit,
        dense_bounded,
        close: structured && dense_bounded,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CylinderDemo {
    pub l1: f64,
    pub l2: f64,
    pub modes: usize,
    pub glue: Vec<GlueReport>,
    pub lagrangian_residual: f64,
    pub isotropy_residual: f64,
    pub type2: Vec<ClosenessReport>,
    pub passed: bool,
}

/// `Cylinder(l1)` then `Cylinder(l2)` over both spin structures.
pub fn demo_cylinder(l1: f64, l2: f64, modes: usize, multiplicity: usize, tol: &Tolerances) -> Result<CylinderDemo> {
    let mut glue_reports = Vec::new();
    let mut type2 = Vec::new();
    let mut lagrangian_residual: f64 = 0.0;
    let mut isotropy_residual: f64 = 0.0;
    let (a, b) = (BordismKind::Cylinder { length: l1 }, BordismKind::Cylinder { length: l2 });
    for spin in [Spin::Antiperiodic, Spin::Periodic] {
        let obj = SpectralObject::circle(spin, modes, multiplicity, true)?;
        glue_reports.push(glue_check(&a, &b, &obj, tol.rank_cutoff, 1e-9, tol)?);
        for k in [a, b] {
            let c = bordism_lagrangian(&k, &obj, tol)?;
            isotropy_residual = isotropy_residual.max(lagrangian::isotropy_residual(&c.space(), c.frame()));
            let tr = structured_cylinder(spin, k.stretch().unwrap()).truncate(modes)?;
            lagrangian_residual = lagrangian_residual.max(tr.relative_residual(tol)?);
            type2.push(closeness_to_aps(&k, &obj, tol)?);
        }
    }
    let passed = glue_reports.iter().all(|g| g.passed)
        && type2.iter().all(|c| c.close)
        && isotropy_residual <= 1e-9
        && lagrangian_residual <= 1e-9;
    Ok(CylinderDemo {
        l1,
        l2,
        modes,
        glue: glue_reports,
        lagrangian_residual,
        isotropy_residual,
        type2,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::direct_sum_correspondence;
    use crate::polarization::{classify_morphism, compose_in_category, MorphismType};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn anti(n: usize) -> SpectralObject {
        SpectralObject::circle(Spin::Antiperiodic, n, 1, true).unwrap()
    }

    fn peri(n: usize, m: usize) -> SpectralObject {
        SpectralObject::circle(Spin::Periodic, n, m, true).unwrap()
    }

    fn defect(obj: &SpectralObject) -> usize {
        let g = aps_sublagrangian(obj, &tol()).unwrap();
        let f = lagrangian::from_graph_isometry(&g, &tol()).unwrap();
        lagrangian::classify(g.space(), &f, &tol()).unwrap().defect_dim
    }

    #[test]
    fn aps_defects() {
        assert_eq!(defect(&anti(5)), 0);
        assert_eq!(defect(&peri(5, 1)), 2);
        assert_eq!(defect(&peri(5, 3)), 6);
    }

    #[test]
    fn aps_matches_dirac_spectrum() {
        for obj in [anti(4), peri(4, 2), anti(3).opposite(), peri(3, 1).opposite()] {
            let a = aps_sublagrangian(&obj, &tol()).unwrap();
            let b = aps_from_dirac(&obj, &tol()).unwrap();
            assert!(polarization::projector_distance(&a, &b) < 1e-12, "{obj:?}");
        }
    }

    #[test]
    fn gamma_of_aps_is_negative_spectrum() {
        let obj = peri(3, 1);
        let g = lagrangian::gamma_image(&aps_sublagrangian(&obj, &tol()).unwrap());
        let p = lagrangian::projection_formula(&g);
        let d = obj.dirac();
        // D restricted to ΓL is −(positive), and ΓL ⊥ L.
        let dp = &(&p * &d) * &p;
        let (vals, _) = linalg::eigh(&dp).unwrap();
        assert!(vals.iter().all(|&v| v <= 1e-12));
        let l = lagrangian::projection_formula(&aps_sublagrangian(&obj, &tol()).unwrap());
        assert!((&l * &p).hs_norm() < 1e-12);
    }

    #[test]
    fn opposite_object_is_opposite_polarized() {
        let obj = peri(3, 1);
        let p = polarization::opposite_polarized(&aps_polarized(&obj, &tol()).unwrap(), &tol()).unwrap();
        let q = aps_from_dirac(&obj.opposite(), &tol()).unwrap();
        assert!(polarization::projector_distance(p.reference(), &q) < 1e-12);
        assert_eq!(p.space(), &obj.opposite().space(&tol()).unwrap());
    }

    #[test]
    fn index_of_aps() {
        let z = aps_index(&anti(4), &tol()).unwrap();
        assert!(z.is_zero());
        assert_eq!(aps_index(&peri(4, 1), &tol()).unwrap().value, 1);
        assert_eq!(aps_index(&peri(4, 2), &tol()).unwrap().value, 0);
        assert_eq!(aps_index(&peri(4, 3), &tol()).unwrap().value, 1);
        let untagged = SpectralObject::circle(Spin::Periodic, 4, 3, false).unwrap();
        assert_eq!(aps_index(&untagged, &tol()).unwrap().value, 0);
    }

    #[test]
    fn bordisms_are_isotropic_lagrangians() {
        let kinds = [
            BordismKind::Cylinder { length: 0.7 },
            BordismKind::Identity,
            BordismKind::HalfDisc { side: Side::In },
            BordismKind::HalfDisc { side: Side::Out },
            BordismKind::Closed,
        ];
        for k in kinds {
            let c = bordism_lagrangian(&k, &anti(6), &tol()).unwrap();
            let s = c.space();
            assert!(lagrangian::isotropy_residual(&s, c.frame()) < 1e-12);
            assert_eq!(2 * c.frame().dim(), s.dim());
            assert!(s.clifford_invariant(c.frame(), &tol()), "{k:?}");
        }
    }

    #[test]
    fn truncated_cylinder_graph_is_lagrangian() {
        for spin in [Spin::Antiperiodic, Spin::Periodic] {
            for l in [0.1, 0.5, 1.0] {
                let tr = structured_cylinder(spin, l).truncate(32).unwrap();
                assert!(tr.is_lagrangian_graph(&tol()).unwrap());
                assert!(tr.relative_residual(&tol()).unwrap() <= 1e-9);
            }
        }
    }

    #[test]
    fn glue_table() {
        use BordismKind::*;
        let c = |l| Cylinder { length: l };
        match glue(&c(0.5), &c(0.7)).unwrap() {
            Cylinder { length } => assert!((length - 1.2).abs() < 1e-15),
            k => panic!("{k:?}"),
        }
        assert_eq!(glue(&Identity, &c(0.3)).unwrap(), c(0.3));
        assert_eq!(glue(&c(0.3), &HalfDisc { side: Side::In }).unwrap(), HalfDisc { side: Side::In });
        assert_eq!(glue(&HalfDisc { side: Side::Out }, &HalfDisc { side: Side::In }).unwrap(), Closed);
        assert!(matches!(
            glue(&c(0.3), &HalfDisc { side: Side::Out }),
            Err(Error::NotComposableKinds(_))
        ));
        assert!(glue(&c(-1.0), &c(1.0)).is_err());
    }

    #[test]
    fn cylinder_glue_example() {
        let r = glue_check(
            &BordismKind::Cylinder { length: 0.5 },
            &BordismKind::Cylinder { length: 0.7 },
            &anti(16),
            1e-10,
            1e-9,
            &tol(),
        )
        .unwrap();
        assert_eq!(r.structured_exact, Some(true));
        assert!(r.dense_distance <= 1e-9, "{}", r.dense_distance);
        assert!(r.passed);
    }

    #[test]
    fn half_disc_absorbs_cylinders() {
        for (a, b) in [
            (BordismKind::HalfDisc { side: Side::Out }, BordismKind::Cylinder { length: 0.4 }),
            (BordismKind::Cylinder { length: 0.4 }, BordismKind::HalfDisc { side: Side::In }),
            (BordismKind::HalfDisc { side: Side::Out }, BordismKind::HalfDisc { side: Side::In }),
            (BordismKind::Identity, BordismKind::Cylinder { length: 0.4 }),
        ] {
            let r = glue_check(&a, &b, &anti(8), 1e-10, 1e-9, &tol()).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn periodic_half_disc_unsupported() {
        let k = BordismKind::HalfDisc { side: Side::In };
        assert!(matches!(bordism_lagrangian(&k, &peri(3, 1), &tol()), Err(Error::UnsupportedBordism(_))));
    }

    #[test]
    fn closeness() {
        let r = closeness_to_aps(&BordismKind::Cylinder { length: 0.5 }, &anti(8), &tol()).unwrap();
        assert!(r.close && r.structured && r.dense_bounded);
        let r = closeness_to_aps(&BordismKind::Cylinder { length: 0.0 }, &anti(8), &tol()).unwrap();
        assert!(!r.close && !r.structured && !r.dense_bounded);
        // 4 per positive slot pair: HS norm √(4(N+1)).
        for &(n, norm) in &r.ladder {
            assert!((norm - (4.0 * (n as f64 + 1.0) * 2.0).sqrt()).abs() < 1e-9, "{n} {norm}");
        }
        let r = closeness_to_aps(&BordismKind::HalfDisc { side: Side::Out }, &anti(8), &tol()).unwrap();
        assert!(r.close);
        assert!(r.ladder.iter().all(|&(_, x)| x < 1e-12));
    }

    #[test]
    fn limit_matches_dense_sum() {
        let l = 0.3;
        let obj = peri(60, 1);
        let c = bordism_lagrangian(&BordismKind::Cylinder { length: l }, &obj, &tol()).unwrap();
        let aps = aps_polarized(&obj, &tol()).unwrap();
        let r = polarization::morphism_residuals(&aps, &aps, &c).unwrap().type2;
        assert!((r - limit_norm(l, &obj)).abs() < 1e-9);
    }

    #[test]
    fn cylinders_are_type2_and_compose_in_category() {
        let obj = anti(8);
        let p = aps_polarized(&obj, &tol()).unwrap();
        let c1 = bordism_lagrangian(&BordismKind::Cylinder { length: 0.5 }, &obj, &tol()).unwrap();
        let c2 = bordism_lagrangian(&BordismKind::Cylinder { length: 0.7 }, &obj, &tol()).unwrap();
        let thr = limit_norm(0.5, &obj) + 1e-9;
        assert_eq!(classify_morphism(&p, &p, &c1, thr, &tol()).unwrap(), MorphismType::Type2);
        let r = compose_in_category(&p, &p, &p, &c1, &c2, thr, 1e-10, &tol()).unwrap();
        assert!(r.output.is_type2());
        let glued = bordism_lagrangian(&BordismKind::Cylinder { length: 1.2 }, &obj, &tol()).unwrap();
        assert!(r.result.distance(&glued) < 1e-9);
        let id = bordism_lagrangian(&BordismKind::Identity, &obj, &tol()).unwrap();
        assert!(classify_morphism(&p, &p, &id, 1.0, &tol()).unwrap().is_type1());
    }

    #[test]
    fn monoidal_on_disjoint_union() {
        let (x, y) = (anti(3), peri(2, 2));
        let xy = x.union(&y).unwrap();
        let sum = crate::super_space::direct_sum(&x.space(&tol()).unwrap(), &y.space(&tol()).unwrap()).unwrap();
        assert_eq!(xy.space(&tol()).unwrap(), sum.space);
        let k = BordismKind::Cylinder { length: 0.6 };
        let blockwise = direct_sum_correspondence(
            &bordism_lagrangian(&k, &x, &tol()).unwrap(),
            &bordism_lagrangian(&k, &y, &tol()).unwrap(),
            &tol(),
        )
        .unwrap();
        let whole = bordism_lagrangian(&k, &xy, &tol()).unwrap();
        assert!(whole.u().dist(blockwise.u()) < 1e-15);
        assert!(whole.distance(&blockwise) < 1e-12);
    }

    #[test]
    fn grid_passes() {
        let reports = cylinder_grid(&[0.1, 0.5, 1.0], &[8, 16, 32], &anti(8), 1e-9, &tol()).unwrap();
        assert_eq!(reports.len(), 27);
        for r in &reports {
            assert!(r.passed, "{r:?}");
        }
    }
}
