//! Polarized spaces and the two morphism types.
//!
//! In finite dimensions every operator is Hilbert–Schmidt, so HS membership is
//! replaced by an explicit threshold on HS norms. With the default threshold
//! `f64::INFINITY` every pair of sub-Lagrangians is close.

use std::fmt;

use serde::Serialize;

use crate::composition::{compose_formula_detailed, CompositionMethod, Correspondence};
use crate::error::{Error, Result};
use crate::lagrangian::{self, GraphIsometry};
use crate::linalg::{Matrix, Tolerances};
use crate::super_space::{direct_sum, SuperSpace};

#[derive(Clone, Debug)]
pub struct PolarizedSpace {
    space: SuperSpace,
    reference: GraphIsometry,
}

impl PolarizedSpace {
    /// `w` must be a partial isometry `V⁺ → V⁻` whose `graph′` is Cl_d-invariant.
    pub fn new(space: SuperSpace, w: Matrix, tol: &Tolerances) -> Result<Self> {
        let reference = GraphIsometry::new(space.clone(), w, tol)?;
        if space.degree() > 0 {
            let f = lagrangian::from_graph_isometry(&reference, tol)?;
            let residual = space.invariance_residual(&f);
            if residual > tol.proj {
                return Err(Error::NotInvariant { residual });
            }
        }
        Ok(PolarizedSpace { space, reference })
    }

    pub fn space(&self) -> &SuperSpace {
        &self.space
    }

    pub fn reference(&self) -> &GraphIsometry {
        &self.reference
    }

    pub fn w(&self) -> &Matrix {
        self.reference.u()
    }
}

/// `ΠV` polarized by `ΓL`. In the coordinates of `ΠV` the representative is `−wᴴ`.
pub fn opposite_polarized(p: &PolarizedSpace, tol: &Tolerances) -> Result<PolarizedSpace> {
    PolarizedSpace::new(p.space.opposite(), -&p.w().adjoint(), tol)
}

/// `V0 ⊕ V1` polarized by `L0 ⊕ L1`.
pub fn direct_sum_polarized(p0: &PolarizedSpace, p1: &PolarizedSpace, tol: &Tolerances) -> Result<PolarizedSpace> {
    let s = direct_sum(&p0.space, &p1.space)?;
    PolarizedSpace::new(s.space, Matrix::block_diag(&[p0.w(), p1.w()]), tol)
}

/// `‖u1 − u2‖_HS ≤ threshold`.
pub fn close(l1: &GraphIsometry, l2: &GraphIsometry, hs_threshold: f64) -> Result<bool> {
    Ok(closeness_distance(l1, l2)? <= hs_threshold)
}

pub fn closeness_distance(l1: &GraphIsometry, l2: &GraphIsometry) -> Result<f64> {
    if !l1.space().same_shape(l2.space()) {
        return Err(Error::DimensionMismatch("sub-Lagrangians of different spaces".into()));
    }
    Ok(l1.u().dist(l2.u()))
}

/// `‖P_{L1} − P_{L2}‖_HS`, the projector form of the closeness criterion.
pub fn projector_distance(l1: &GraphIsometry, l2: &GraphIsometry) -> f64 {
    lagrangian::projection_formula(l1).dist(&lagrangian::projection_formula(l2))
}

#[derive(Clone, Debug, PartialEq)]
pub enum MorphismType {
    /// Graph of a grading-preserving unitary `T` respecting the polarizations.
    Type1(Matrix),
    /// Close to `L0^⊥ ⊕ L1`.
    Type2,
    Both(Matrix),
    Neither,
}

impl MorphismType {
    pub fn name(&self) -> &'static str {
        match self {
            MorphismType::Type1(_) => "type1",
            MorphismType::Type2 => "type2",
            MorphismType::Both(_) => "both",
            MorphismType::Neither => "neither",
        }
    }

    pub fn is_type1(&self) -> bool {
        matches!(self, MorphismType::Type1(_) | MorphismType::Both(_))
    }

    pub fn is_type2(&self) -> bool {
        matches!(self, MorphismType::Type2 | MorphismType::Both(_))
    }

    pub fn t(&self) -> Option<&Matrix> {
        match self {
            MorphismType::Type1(t) | MorphismType::Both(t) => Some(t),
            _ => None,
        }
    }

    /// Type used to pick a composition case; `Both` counts as type (2).
    pub fn dispatch(&self) -> Option<Dispatch> {
        match self {
            MorphismType::Type1(_) => Some(Dispatch::One),
            MorphismType::Type2 | MorphismType::Both(_) => Some(Dispatch::Two),
            MorphismType::Neither => None,
        }
    }
}

impl fmt::Display for MorphismType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Dispatch {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

/// Residuals behind a classification.
#[derive(Clone, Debug, Serialize)]
pub struct MorphismResiduals {
    /// `max(‖u00‖, ‖u11‖)`.
    pub diagonal: f64,
    /// `‖u01 w1ᴴ u10 − w0ᴴ‖_HS`.
    pub type1: f64,
    /// `‖u − diag(−w0ᴴ, w1)‖_HS`.
    pub type2: f64,
}

fn check_spaces(p0: &PolarizedSpace, p1: &PolarizedSpace, c: &Correspondence) -> Result<()> {
    if !p0.space.same_shape(c.v0()) || !p1.space.same_shape(c.v1()) {
        return Err(Error::SpaceMismatch("correspondence does not connect the polarized spaces".into()));
    }
    Ok(())
}

pub fn morphism_residuals(p0: &PolarizedSpace, p1: &PolarizedSpace, c: &Correspondence) -> Result<MorphismResiduals> {
    check_spaces(p0, p1, c)?;
    let b = c.blocks();
    let w0h = p0.w().adjoint();
    let w1 = p1.w();
    let diagonal = b.u00.hs_norm().max(b.u11.hs_norm());
    let type1 = (&(&(&b.u01 * &w1.adjoint()) * &b.u10) - &w0h).hs_norm();
    let reference = Matrix::block_diag(&[&(-&w0h), w1]);
    // block_diag places −w0ᴴ at (V0⁺, V0⁻) and w1 at (V1⁻, V1⁺), matching u.
    let type2 = c.u().dist(&reference);
    Ok(MorphismResiduals { diagonal, type1, type2 })
}

pub fn classify_morphism(
    p0: &PolarizedSpace,
    p1: &PolarizedSpace,
    c: &Correspondence,
    hs_threshold: f64,
    tol: &Tolerances,
) -> Result<MorphismType> {
    let r = morphism_residuals(p0, p1, c)?;
    let t1 = if r.diagonal <= tol.proj && r.type1 <= hs_threshold {
        c.to_t(tol).ok()
    } else {
        None
    };
    let t2 = r.type2 <= hs_threshold;
    Ok(match (t1, t2) {
        (Some(t), true) => MorphismType::Both(t),
        (Some(t), false) => MorphismType::Type1(t),
        (None, true) => MorphismType::Type2,
        (None, false) => MorphismType::Neither,
    })
}

#[derive(Clone, Debug)]
pub struct CategoryComposition {
    pub result: Correspondence,
    pub output: MorphismType,
    pub case: (Dispatch, Dispatch),
    pub method: CompositionMethod,
    pub gap: f64,
}

/// Composition in the category: classifies inputs, composes with the formula and
/// checks that the output has the type predicted by the case table.
#[allow(clippy::too_many_arguments)]
pub fn compose_in_category(
    p0: &PolarizedSpace,
    p1: &PolarizedSpace,
    p2: &PolarizedSpace,
    c01: &Correspondence,
    c12: &Correspondence,
    hs_threshold: f64,
    cutoff: f64,
    tol: &Tolerances,
) -> Result<CategoryComposition> {
    let m01 = classify_morphism(p0, p1, c01, hs_threshold, tol)?;
    let m12 = classify_morphism(p1, p2, c12, hs_threshold, tol)?;
    let (d01, d12) = match (m01.dispatch(), m12.dispatch()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NotAMorphism),
    };
    let composed = compose_formula_detailed(c01, c12, cutoff, tol)?;
    let output = classify_morphism(p0, p2, &composed.result, hs_threshold, tol)?;
    let expect_type1 = d01 == Dispatch::One && d12 == Dispatch::One;
    let ok = if expect_type1 { output.is_type1() } else { output.is_type2() };
    if !ok {
        return Err(Error::CategoryViolation {
            expected: if expect_type1 { "type1" } else { "type2" }.into(),
            found: output.name().into(),
        });
    }
    Ok(CategoryComposition {
        result: composed.result,
        output,
        case: (d01, d12),
        method: composed.method,
        gap: composed.gap,
    })
}
