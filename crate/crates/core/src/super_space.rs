//! Finite-dimensional super Hilbert spaces.
//!
//! Coordinates are always ordered `[V⁺; V⁻]`, so `Γ = diag(+I_p, −I_q)`.

use crate::error::{Error, Result};
use crate::linalg::{Field, Frame, Matrix, Tolerances, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct SuperSpace {
    dim_plus: usize,
    dim_minus: usize,
    field: Field,
    generators: Vec<Matrix>,
}

impl SuperSpace {
    /// Space of degree 0.
    pub fn new(dim_plus: usize, dim_minus: usize, field: Field) -> Self {
        SuperSpace {
            dim_plus,
            dim_minus,
            field,
            generators: Vec::new(),
        }
    }

    /// Space with a right Cl_d action given by `generators.len()` matrices.
    ///
    /// Fails with `NotAModule` unless every generator is odd, skew-adjoint and
    /// the generators satisfy `e_j e_k + e_k e_j = −2δ_jk`.
    pub fn with_clifford(
        dim_plus: usize,
        dim_minus: usize,
        field: Field,
        generators: Vec<Matrix>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let s = SuperSpace {
            dim_plus,
            dim_minus,
            field,
            generators,
        };
        let n = s.dim();
        for (j, e) in s.generators.iter().enumerate() {
            if e.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "generator {j} has shape {:?}, space has dimension {n}",
                    e.shape()
                )));
            }
        }
        let res = s.relation_residual();
        if res > tol.proj {
            return Err(Error::NotAModule(format!("relation residual {res:.3e}")));
        }
        Ok(s)
    }

    pub fn dim_plus(&self) -> usize {
        self.dim_plus
    }

    pub fn dim_minus(&self) -> usize {
        self.dim_minus
    }

    pub fn dim(&self) -> usize {
        self.dim_plus + self.dim_minus
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn gamma(&self) -> Matrix {
        let mut d = vec![1.0; self.dim_plus];
        d.extend(std::iter::repeat_n(-1.0, self.dim_minus));
        Matrix::diag_real(&d, self.field)
    }

    /// Largest violation of the module relations (skew-adjointness, oddness,
    /// Clifford anticommutators).
    pub fn relation_residual(&self) -> f64 {
        let n = self.dim();
        let g = self.gamma();
        let id = Matrix::identity(n, self.field);
        let mut worst: f64 = 0.0;
        for (j, e) in self.generators.iter().enumerate() {
            worst = worst.max((&e.adjoint() + e).hs_norm());
            worst = worst.max((&(&g * e) + &(e * &g)).hs_norm());
            for (k, f) in self.generators.iter().enumerate().skip(j) {
                let ac = &(e * f) + &(f * e);
                let target = if j == k { id.scale(-2.0) } else { Matrix::zeros(n, n, self.field) };
                worst = worst.max(ac.dist(&target));
            }
        }
        worst
    }

    /// `B(x, y) = ⟨Γx, y⟩`, conjugate-linear in `x`.
    pub fn b_form(&self, x: &[C64], y: &[C64]) -> Result<C64> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {} in a space of dimension {n}",
                x.len(),
                y.len()
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            let t = x[i].conj() * y[i];
            if i < self.dim_plus {
                acc += t;
            } else {
                acc -= t;
            }
        }
        Ok(acc)
    }

    /// Gram matrix of `B` between the columns of `a` and `b`: `aᴴ Γ b`.
    pub fn b_matrix(&self, a: &Matrix, b: &Matrix) -> Matrix {
        &(&a.adjoint() * &self.gamma()) * b
    }

    /// Coordinate permutation taking `[V⁺; V⁻]` to `[V⁻; V⁺]`.
    fn swap_permutation(&self) -> Vec<usize> {
        (self.dim_plus..self.dim()).chain(0..self.dim_plus).collect()
    }

    /// Matrix of the canonical identification `V → ΠV` in standard coordinates.
    pub fn to_opposite_map(&self) -> Matrix {
        Matrix::identity(self.dim(), self.field).select_rows(&self.swap_permutation())
    }

    /// `ΠV`: grading flipped, same Clifford action. Coordinates are reordered so
    /// that the new plus part (old `V⁻`) comes first.
    pub fn opposite(&self) -> SuperSpace {
        let perm = self.swap_permutation();
        SuperSpace {
            dim_plus: self.dim_minus,
            dim_minus: self.dim_plus,
            field: self.field,
            generators: self.generators.iter().map(|e| e.permute_sym(&perm)).collect(),
        }
    }

    /// `true` iff every generator maps `span(f)` into itself within `tol.proj`.
    pub fn clifford_invariant(&self, f: &Frame, tol: &Tolerances) -> bool {
        self.invariance_residual(f) <= tol.proj
    }

    /// `max_j ‖(I − P) e_j P‖_F`.
    pub fn invariance_residual(&self, f: &Frame) -> f64 {
        let p = f.projector();
        let q = &Matrix::identity(self.dim(), self.field) - &p;
        self.generators
            .iter()
            .map(|e| (&(&q * e) * &p).hs_norm())
            .fold(0.0, f64::max)
    }

    /// Same underlying data with the generators dropped.
    pub fn forget_clifford(&self) -> SuperSpace {
        SuperSpace::new(self.dim_plus, self.dim_minus, self.field)
    }

    pub fn same_shape(&self, other: &SuperSpace) -> bool {
        self.dim_plus == other.dim_plus && self.dim_minus == other.dim_minus && self.field == other.field
    }
}

/// `V0 ⊕ V1` together with its block embeddings.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub space: SuperSpace,
    /// `V0 → V0 ⊕ V1` in standard coordinates.
    pub embed0: Matrix,
    /// `V1 → V0 ⊕ V1` in standard coordinates.
    pub embed1: Matrix,
}

/// Graded direct sum, coordinates `[V0⁺, V1⁺, V0⁻, V1⁻]`.
pub fn direct_sum(v0: &SuperSpace, v1: &SuperSpace) -> Result<DirectSum> {
    if v0.field != v1.field {
        return Err(Error::FieldMismatch {
            expected: v0.field,
            found: v1.field,
        });
    }
    if v0.degree() != v1.degree() {
        return Err(Error::DegreeMismatch(v0.degree(), v1.degree()));
    }
    let field = v0.field;
    let (p0, q0, p1, q1) = (v0.dim_plus, v0.dim_minus, v1.dim_plus, v1.dim_minus);
    let n = p0 + q0 + p1 + q1;
    let mut embed0 = Matrix::zeros(n, p0 + q0, field);
    let mut embed1 = Matrix::zeros(n, p1 + q1, field);
    let one = C64::new(1.0, 0.0);
    for i in 0..p0 {
        embed0.set(i, i, one);
    }
    for i in 0..q0 {
        embed0.set(p0 + p1 + i, p0 + i, one);
    }
    for i in 0..p1 {
        embed1.set(p0 + i, i, one);
    }
    for i in 0..q1 {
        embed1.set(p0 + p1 + q0 + i, p1 + i, one);
    }
    let generators = v0
        .generators
        .iter()
        .zip(&v1.generators)
        .map(|(a, b)| &(&(&embed0 * a) * &embed0.adjoint()) + &(&(&embed1 * b) * &embed1.adjoint()))
        .collect();
    Ok(DirectSum {
        space: SuperSpace {
            dim_plus: p0 + p1,
            dim_minus: q0 + q1,
            field,
            generators,
        },
        embed0,
        embed1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: &[f64]) -> Vec<C64> {
        x.iter().map(|&v| C64::new(v, 0.0)).collect()
    }

    fn rot() -> Matrix {
        Matrix::from_real_rows(2, 2, &[0.0, -1.0, 1.0, 0.0])
    }

    #[test]
    fn b_form_signs() {
        let v = SuperSpace::new(1, 1, Field::Real);
        assert_eq!(v.b_form(&r(&[1.0, 0.0]), &r(&[1.0, 0.0])).unwrap().re, 1.0);
        assert_eq!(v.b_form(&r(&[0.0, 1.0]), &r(&[0.0, 1.0])).unwrap().re, -1.0);
        assert_eq!(v.b_form(&r(&[1.0, 0.0]), &r(&[0.0, 1.0])).unwrap().re, 0.0);
        assert!(v.b_form(&r(&[1.0]), &r(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn b_form_is_conjugate_linear_in_first_slot() {
        let v = SuperSpace::new(1, 0, Field::Complex);
        let i = C64::new(0.0, 1.0);
        assert_eq!(v.b_form(&[i], &[C64::new(1.0, 0.0)]).unwrap(), -i);
    }

    #[test]
    fn opposite_swaps_and_negates_gamma() {
        let v = SuperSpace::new(2, 3, Field::Real);
        let o = v.opposite();
        assert_eq!((o.dim_plus(), o.dim_minus()), (3, 2));
        assert_eq!(o.opposite(), v);
        let p = v.to_opposite_map();
        let pulled = &(&p.adjoint() * &o.gamma()) * &p;
        assert!(pulled.dist(&v.gamma().scale(-1.0)) < 1e-15);
    }

    #[test]
    fn opposite_keeps_module_relations() {
        let v = SuperSpace::with_clifford(1, 1, Field::Real, vec![rot()], &Tolerances::default()).unwrap();
        assert!(v.opposite().relation_residual() < 1e-15);
    }

    #[test]
    fn direct_sum_dims_and_blocks() {
        let s = direct_sum(&SuperSpace::new(1, 2, Field::Real), &SuperSpace::new(3, 0, Field::Real)).unwrap();
        assert_eq!((s.space.dim_plus(), s.space.dim_minus()), (4, 2));
        let v0 = SuperSpace::new(1, 1, Field::Real).opposite();
        let v1 = SuperSpace::new(1, 1, Field::Real);
        let s = direct_sum(&v0, &v1).unwrap();
        // plus part: (old V0⁻, V1⁺)
        assert_eq!(s.space.dim_plus(), 2);
        assert_eq!(s.embed0.get(0, 0).re, 1.0);
        assert_eq!(s.embed1.get(1, 0).re, 1.0);
    }

    #[test]
    fn direct_sum_mismatches() {
        let a = SuperSpace::new(1, 1, Field::Real);
        let b = SuperSpace::new(1, 1, Field::Complex);
        assert!(matches!(direct_sum(&a, &b), Err(Error::FieldMismatch { .. })));
        let c = SuperSpace::with_clifford(1, 1, Field::Real, vec![rot()], &Tolerances::default()).unwrap();
        assert!(matches!(direct_sum(&a, &c), Err(Error::DegreeMismatch(0, 1))));
    }

    #[test]
    fn invariance_examples() {
        let tol = Tolerances::default();
        let v = SuperSpace::with_clifford(1, 1, Field::Real, vec![rot()], &tol).unwrap();
        assert!(v.clifford_invariant(&Frame::full(2, Field::Real), &tol));
        assert!(v.clifford_invariant(&Frame::empty(2, Field::Real), &tol));
        let line = Frame::new(Matrix::from_real_rows(2, 1, &[1.0, 0.0]), &tol).unwrap();
        assert!(!v.clifford_invariant(&line, &tol));
    }

    #[test]
    fn rejects_bad_generators() {
        let bad = Matrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = SuperSpace::with_clifford(1, 1, Field::Real, vec![bad], &Tolerances::default());
        assert!(matches!(e, Err(Error::NotAModule(_))));
    }
}
