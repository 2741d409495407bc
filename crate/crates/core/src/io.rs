//! JSON encodings of matrices, spaces, Lagrangians, polarized spaces and
//! structured operators.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::composition::Correspondence;
use crate::error::{Error, Result};
use crate::lagrangian::{self, correspondence_space, GraphIsometry, PairLayout};
use crate::linalg::{self, Field, Frame, Matrix, Tolerances, C64};
use crate::polarization::PolarizedSpace;
use crate::sequence::{Lattice, StructuredOp, TailSymbol};
use crate::super_space::SuperSpace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    /// Row-major `[re, im]` pairs.
    pub entries: Vec<[f64; 2]>,
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            field: m.field(),
            entries: m.entries_row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Malformed(format!(
                "{} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        if self.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Malformed("non-finite matrix entry".into()));
        }
        if self.field == Field::Real && self.entries.iter().any(|e| e[1] != 0.0) {
            return Err(Error::Malformed("imaginary part in a real matrix".into()));
        }
        let entries: Vec<C64> = self.entries.iter().map(|e| C64::new(e[0], e[1])).collect();
        Ok(Matrix::from_rows(self.rows, self.cols, self.field, &entries))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub field: Field,
    #[serde(default)]
    pub degree: usize,
    #[serde(default)]
    pub generators: Vec<MatrixJson>,
}

impl From<&SuperSpace> for SpaceJson {
    fn from(s: &SuperSpace) -> Self {
        SpaceJson {
            dim_plus: s.dim_plus(),
            dim_minus: s.dim_minus(),
            field: s.field(),
            degree: s.degree(),
            generators: s.generators().iter().map(MatrixJson::from).collect(),
        }
    }
}

impl SpaceJson {
    pub fn to_space(&self, tol: &Tolerances) -> Result<SuperSpace> {
        if self.degree != self.generators.len() {
            return Err(Error::Malformed(format!(
                "degree {} with {} generators",
                self.degree,
                self.generators.len()
            )));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| g.to_matrix().map(|m| m.promote(self.field)))
            .collect::<Result<Vec<_>>>()?;
        if self.field == Field::Real && gens.iter().any(|g| g.field() == Field::Complex) {
            return Err(Error::Malformed("complex generator on a real space".into()));
        }
        SuperSpace::with_clifford(self.dim_plus, self.dim_minus, self.field, gens, tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Repr {
    #[serde(rename = "frame")]
    Frame,
    #[serde(rename = "graph_u")]
    GraphU,
    #[serde(rename = "graph_T")]
    GraphT,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LagrangianJson {
    pub repr: Repr,
    pub matrix: MatrixJson,
    pub space0: SpaceJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space1: Option<SpaceJson>,
}

/// A decoded Lagrangian description, not yet validated.
#[derive(Clone, Debug)]
pub struct LagrangianInput {
    pub repr: Repr,
    pub matrix: Matrix,
    pub space0: SuperSpace,
    pub space1: Option<SuperSpace>,
}

impl LagrangianJson {
    pub fn decode(&self, tol: &Tolerances) -> Result<LagrangianInput> {
        let space0 = self.space0.to_space(tol)?;
        let space1 = self.space1.as_ref().map(|s| s.to_space(tol)).transpose()?;
        if self.repr == Repr::GraphT && space1.is_none() {
            return Err(Error::Malformed("graph_T needs both space0 and space1".into()));
        }
        Ok(LagrangianInput {
            repr: self.repr,
            matrix: self.matrix.to_matrix()?,
            space0,
            space1,
        })
    }

    pub fn from_correspondence(c: &Correspondence, repr: Repr, tol: &Tolerances) -> Result<Self> {
        let matrix = match repr {
            Repr::Frame => c.frame().basis().clone(),
            Repr::GraphU => c.u().clone(),
            Repr::GraphT => c.to_t(tol)?,
        };
        Ok(LagrangianJson {
            repr,
            matrix: MatrixJson::from(&matrix),
            space0: SpaceJson::from(c.v0()),
            space1: Some(SpaceJson::from(c.v1())),
        })
    }

    pub fn from_graph_isometry(g: &GraphIsometry) -> Self {
        LagrangianJson {
            repr: Repr::GraphU,
            matrix: MatrixJson::from(g.u()),
            space0: SpaceJson::from(g.space()),
            space1: None,
        }
    }
}

impl LagrangianInput {
    /// The space containing the subspace: `V` or `ΠV0 ⊕ V1`.
    pub fn ambient(&self) -> Result<SuperSpace> {
        match &self.space1 {
            None => Ok(self.space0.clone()),
            Some(v1) => correspondence_space(&self.space0, v1),
        }
    }

    /// Orthonormal frame of the subspace in the coordinates of [`ambient`](Self::ambient).
    pub fn frame(&self, tol: &Tolerances) -> Result<Frame> {
        let ambient = self.ambient()?;
        match self.repr {
            Repr::Frame => {
                if self.matrix.rows() != ambient.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "frame has {} rows, space has dimension {}",
                        self.matrix.rows(),
                        ambient.dim()
                    )));
                }
                linalg::orthonormalize(&self.matrix, tol.rank_cutoff)
            }
            Repr::GraphU => lagrangian::from_graph_isometry(&GraphIsometry::new(ambient, self.matrix.clone(), tol)?, tol),
            Repr::GraphT => {
                let layout = PairLayout::new(&self.space0, self.space1.as_ref().unwrap());
                lagrangian::graph_t_frame(&self.matrix, &layout, tol)
            }
        }
    }

    pub fn correspondence(&self, tol: &Tolerances) -> Result<Correspondence> {
        let Some(v1) = &self.space1 else {
            return Err(Error::Malformed("a correspondence needs space1".into()));
        };
        let v0 = &self.space0;
        match self.repr {
            Repr::Frame => Correspondence::from_frame(v0, v1, &self.frame(tol)?, tol),
            Repr::GraphU => Correspondence::from_u(v0, v1, self.matrix.clone(), tol),
            Repr::GraphT => Correspondence::from_t(v0, v1, &self.matrix, tol),
        }
    }

    pub fn graph_isometry(&self, tol: &Tolerances) -> Result<GraphIsometry> {
        let ambient = self.ambient()?;
        match self.repr {
            Repr::GraphU => GraphIsometry::new(ambient, self.matrix.clone(), tol),
            _ => lagrangian::to_graph_isometry(&ambient, &self.frame(tol)?, tol),
        }
    }
}

/// A polarized space: the super space fields plus the reference `w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarizedJson {
    #[serde(flatten)]
    pub space: SpaceJson,
    pub w: MatrixJson,
}

impl From<&PolarizedSpace> for PolarizedJson {
    fn from(p: &PolarizedSpace) -> Self {
        PolarizedJson {
            space: SpaceJson::from(p.space()),
            w: MatrixJson::from(p.w()),
        }
    }
}

impl PolarizedJson {
    pub fn decode(&self, tol: &Tolerances) -> Result<PolarizedSpace> {
        PolarizedSpace::new(self.space.to_space(tol)?, self.w.to_matrix()?, tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuredJson {
    #[serde(rename = "N0")]
    pub n0: usize,
    pub core: MatrixJson,
    pub tail: TailSymbol,
    #[serde(default)]
    pub lattice: Lattice,
}

impl From<&StructuredOp> for StructuredJson {
    fn from(op: &StructuredOp) -> Self {
        StructuredJson {
            n0: op.n0(),
            core: MatrixJson::from(op.core()),
            tail: *op.tail(),
            lattice: op.lattice(),
        }
    }
}

impl StructuredJson {
    pub fn decode(&self) -> Result<StructuredOp> {
        StructuredOp::new(self.lattice, self.n0, self.core.to_matrix()?, self.tail)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
