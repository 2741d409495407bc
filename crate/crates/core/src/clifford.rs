//! Clifford algebras as explicit matrix algebras, graded module decomposition
//! and the index of invariant sub-Lagrangians.
//!
//! Real graded irreducibles are built recursively: an ungraded `Cl_{d−1}`
//! irreducible `W` gives the graded `Cl_d` irreducible `W ⊕ W`, and an ungraded
//! irreducible is cut out of a graded one by splitting with a Hermitian element
//! of its commutant. Complex ones come from Jordan–Wigner gamma matrices.

use std::fmt;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lagrangian::{self, GraphIsometry};
use crate::linalg::{self, Field, Frame, Matrix, Tolerances, C64};
use crate::super_space::SuperSpace;

pub const REAL_MAX_DEGREE: usize = 8;
pub const COMPLEX_MAX_DEGREE: usize = 12;

/// Dimension of the graded irreducible `Cl_d`-module, `d = 0..=8`.
pub const REAL_GRADED_DIMS: [usize; 9] = [1, 2, 4, 8, 8, 16, 16, 16, 16];
/// Dimension of the ungraded irreducible `Cl_k`-module, `k = 0..=8`.
pub const REAL_UNGRADED_DIMS: [usize; 9] = [1, 2, 4, 4, 8, 8, 8, 8, 16];
/// `KO^{-d}(pt)` for `d mod 8`.
pub const KO_GROUPS: [Group; 8] = [
    Group::Z,
    Group::Zmod(2),
    Group::Zmod(2),
    Group::Trivial,
    Group::Z,
    Group::Trivial,
    Group::Trivial,
    Group::Trivial,
];
/// `KU^{-d}(pt)` for `d mod 2`.
pub const KU_GROUPS: [Group; 2] = [Group::Z, Group::Trivial];

pub fn complex_graded_dim(d: usize) -> usize {
    if d == 0 {
        1
    } else {
        2 << ((d - 1) / 2)
    }
}

pub fn complex_ungraded_dim(k: usize) -> usize {
    1 << (k / 2)
}

/// Number of isomorphism classes of graded irreducibles.
pub fn graded_types(d: usize, field: Field) -> usize {
    match field {
        Field::Real if d.is_multiple_of(4) => 2,
        Field::Complex if d.is_multiple_of(2) => 2,
        _ => 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Group {
    Trivial,
    Z,
    Zmod(i64),
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Trivial => f.write_str("0"),
            Group::Z => f.write_str("Z"),
            Group::Zmod(n) => write!(f, "Z/{n}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    degree: usize,
    field: Field,
    module: SuperSpace,
}

impl CliffordAlgebra {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The standard graded irreducible module carrying the generators.
    pub fn module(&self) -> &SuperSpace {
        &self.module
    }

    pub fn generators(&self) -> &[Matrix] {
        self.module.generators()
    }

    pub fn irreducible_dim(&self) -> usize {
        self.module.dim()
    }

    /// Largest violation of `e_j e_k + e_k e_j = −2δ_jk`, skew-adjointness and oddness.
    pub fn relation_residual(&self) -> f64 {
        self.module.relation_residual()
    }
}

pub fn build_clifford(d: usize, field: Field) -> Result<CliffordAlgebra> {
    let module = match field {
        Field::Real if d <= REAL_MAX_DEGREE => real_tower().graded[d].clone(),
        Field::Complex if d <= COMPLEX_MAX_DEGREE => complex_graded(d),
        _ => return Err(Error::UnsupportedDegree { degree: d, field }),
    };
    Ok(CliffordAlgebra {
        degree: d,
        field,
        module,
    })
}

pub(crate) fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    Matrix::from_fn(ar * br, ac * bc, a.field().join(b.field()), |i, j| {
        a.get(i / br, j / bc) * b.get(i % br, j % bc)
    })
}

/// Graded module `W ⊕ W` from ungraded generators `f_j` on `W`:
/// `e_j = [[0, −f_j], [−f_j, 0]]`, `e_d = [[0, −1], [1, 0]]`.
fn graded_from_ungraded(w_dim: usize, f: &[Matrix], field: Field) -> SuperSpace {
    let z = Matrix::zeros(w_dim, w_dim, field);
    let id = Matrix::identity(w_dim, field);
    let mut gens: Vec<Matrix> = f
        .iter()
        .map(|fj| {
            let m = -fj;
            Matrix::from_blocks(&z, &m, &m, &z)
        })
        .collect();
    gens.push(Matrix::from_blocks(&z, &(-&id), &id, &z));
    SuperSpace::with_clifford(w_dim, w_dim, field, gens, &Tolerances::default())
        .expect("graded construction satisfies the relations")
}

/// Projection onto the commutant: average of `e_S X e_S⁻¹` over all monomials `e_S`.
fn twirl(x: &Matrix, gens: &[Matrix]) -> Matrix {
    let mut acc = x.clone();
    for e in gens {
        // Averaging over {1, e} for each generator in turn covers every monomial.
        let conj = &(e * &acc) * &e.adjoint();
        acc = (&acc + &conj).scale(0.5);
    }
    acc
}

/// Orthonormal basis of an irreducible submodule of the ungraded module given by `gens`.
pub(crate) fn ungraded_irreducible(gens: &[Matrix], n: usize, field: Field, seed: u64) -> Result<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = Matrix::identity(n, field);
    let mut cur: Vec<Matrix> = gens.to_vec();
    loop {
        let dim = basis.cols();
        if dim <= 1 {
            return Ok(basis);
        }
        let x = Matrix::from_fn(dim, dim, field, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = if field == Field::Complex { StandardNormal.sample(&mut rng) } else { 0.0 };
            C64::new(re, im)
        });
        let x = twirl(&x, &cur);
        let h = &x + &x.adjoint();
        let (vals, vecs) = linalg::eigh(&h)?;
        let top = *vals.last().unwrap();
        let spread = top - vals[0];
        let scale = vals.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        if spread <= 1e-8 * scale {
            return Ok(basis);
        }
        let keep: Vec<usize> = (0..dim).filter(|&i| vals[i] >= top - 1e-6 * scale).collect();
        let sub = Matrix::from_fn(dim, keep.len(), field, |i, j| vecs.get(i, keep[j]));
        cur = cur.iter().map(|f| &(&sub.adjoint() * f) * &sub).collect();
        basis = &basis * &sub;
    }
}

struct RealTower {
    graded: Vec<SuperSpace>,
    ungraded_dims: Vec<usize>,
}

const TOWER_SEED: u64 = 0x5eed_c11f;

/// Graded irreducibles for `d = 0..=9` (degree 9 only feeds the restriction map at 8).
fn real_tower() -> &'static RealTower {
    static TOWER: OnceLock<RealTower> = OnceLock::new();
    TOWER.get_or_init(|| {
        let field = Field::Real;
        let mut graded = vec![SuperSpace::new(1, 0, field)];
        let mut ungraded_dims = Vec::new();
        for k in 0..=REAL_MAX_DEGREE {
            let e = &graded[k];
            let b = ungraded_irreducible(e.generators(), e.dim(), field, TOWER_SEED + k as u64)
                .expect("commutant split");
            let f: Vec<Matrix> = e.generators().iter().map(|g| &(&b.adjoint() * g) * &b).collect();
            ungraded_dims.push(b.cols());
            graded.push(graded_from_ungraded(b.cols(), &f, field));
        }
        RealTower { graded, ungraded_dims }
    })
}

/// Dimensions of the constructed ungraded real irreducibles, `k = 0..=8`.
pub fn constructed_real_ungraded_dims() -> Vec<usize> {
    real_tower().ungraded_dims.clone()
}

/// Jordan–Wigner gamma matrices on `m` qubits: `2m` Hermitian, anticommuting involutions.
fn gammas(m: usize) -> Vec<Matrix> {
    let f = Field::Complex;
    let c = |re: f64, im: f64| C64::new(re, im);
    let x = Matrix::from_rows(2, 2, f, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    let y = Matrix::from_rows(2, 2, f, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    let z = Matrix::from_rows(2, 2, f, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    let id = Matrix::identity(2, f);
    let mut out = Vec::with_capacity(2 * m);
    for a in 0..m {
        for p in [&x, &y] {
            let mut acc = Matrix::identity(1, f);
            for b in 0..m {
                let factor = if b < a {
                    &z
                } else if b == a {
                    p
                } else {
                    &id
                };
                acc = kron(&acc, factor);
            }
            out.push(acc);
        }
    }
    out
}

fn complex_graded(d: usize) -> SuperSpace {
    let field = Field::Complex;
    if d == 0 {
        return SuperSpace::new(1, 0, field);
    }
    let m = d.div_ceil(2);
    let g = gammas(m);
    let n = 1 << m;
    // Chirality i^m γ_1⋯γ_{2m} is diagonal with entries ±1.
    let mut chi = Matrix::identity(n, field);
    for gj in &g {
        chi = &chi * gj;
    }
    let phase = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][m % 4];
    let chi = chi.scale_c(phase);
    let mut order: Vec<usize> = (0..n).filter(|&i| chi.get(i, i).re > 0.0).collect();
    let plus = order.len();
    order.extend((0..n).filter(|&i| chi.get(i, i).re < 0.0));
    let i = C64::new(0.0, 1.0);
    let gens = g[..d].iter().map(|gj| gj.scale_c(i).permute_sym(&order)).collect();
    SuperSpace::with_clifford(plus, n - plus, field, gens, &Tolerances::default())
        .expect("gamma matrices satisfy the relations")
}

/// `Cl_d` acting on itself by right multiplication, monomials orthonormal.
pub fn regular_module(d: usize, field: Field) -> Result<SuperSpace> {
    if (field == Field::Real && d > REAL_MAX_DEGREE) || (field == Field::Complex && d > COMPLEX_MAX_DEGREE) {
        return Err(Error::UnsupportedDegree { degree: d, field });
    }
    let n = 1usize << d;
    let mut even: Vec<usize> = (0..n).filter(|s| s.count_ones() % 2 == 0).collect();
    let plus = even.len();
    even.extend((0..n).filter(|s| s.count_ones() % 2 == 1));
    let pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (k, &s) in even.iter().enumerate() {
            p[s] = k;
        }
        p
    };
    let mut gens = Vec::with_capacity(d);
    for j in 0..d {
        let mut e = Matrix::zeros(n, n, field);
        for s in 0..n {
            // e_S · e_j: move e_j past the generators of S with index > j.
            let above = (s >> (j + 1)).count_ones();
            let mut sign = if above % 2 == 0 { 1.0 } else { -1.0 };
            let t = s ^ (1 << j);
            if s & (1 << j) != 0 {
                sign = -sign;
            }
            e.set(pos[t], pos[s], C64::new(sign, 0.0));
        }
        gens.push(e);
    }
    SuperSpace::with_clifford(plus, n - plus, field, gens, &Tolerances::default())
}

/// Multiplicities of graded irreducibles. Index 0 is the standard irreducible
/// (the module of [`build_clifford`]), index 1 its opposite when the two differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedModuleClass {
    pub degree: usize,
    pub field: Field,
    pub multiplicities: Vec<i64>,
}

impl GradedModuleClass {
    pub fn zero(degree: usize, field: Field) -> Self {
        GradedModuleClass {
            degree,
            field,
            multiplicities: vec![0; graded_types(degree, field)],
        }
    }

    pub fn add(&self, other: &GradedModuleClass) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        Ok(GradedModuleClass {
            degree: self.degree,
            field: self.field,
            multiplicities: self
                .multiplicities
                .iter()
                .zip(&other.multiplicities)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// Trace of the normalized volume element of `f_j = e_d e_j` on `E⁺`.
fn omega_trace(space: &SuperSpace) -> f64 {
    let d = space.degree();
    let p = space.dim_plus();
    let gens = space.generators();
    let ed = &gens[d - 1];
    let mut w = Matrix::identity(p, Field::Complex);
    for ej in &gens[..d - 1] {
        let f = (ed * ej).block(0, 0, p, p);
        w = &w * &f;
    }
    let k = d - 1;
    let phase = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)]
        [(k * (k + 1) / 2) % 4];
    (w.trace() * phase).re
}

fn as_count(x: f64, what: &str) -> Result<i64> {
    let r = x.round();
    if (x - r).abs() > 1e-6 || r < 0.0 {
        return Err(Error::NotAModule(format!("{what} = {x:.6} is not a nonnegative integer")));
    }
    Ok(r as i64)
}

pub fn decompose_module(alg: &CliffordAlgebra, space: &SuperSpace, tol: &Tolerances) -> Result<GradedModuleClass> {
    let d = alg.degree;
    if space.degree() != d {
        return Err(Error::DegreeMismatch(d, space.degree()));
    }
    if space.field() != alg.field {
        return Err(Error::FieldMismatch {
            expected: alg.field,
            found: space.field(),
        });
    }
    let residual = space.relation_residual();
    if residual > tol.proj * (space.dim().max(1) as f64) {
        return Err(Error::NotAModule(format!("relation residual {residual:.3e}")));
    }
    if d == 0 {
        return Ok(GradedModuleClass {
            degree: 0,
            field: alg.field,
            multiplicities: vec![space.dim_plus() as i64, space.dim_minus() as i64],
        });
    }
    let p = space.dim_plus();
    if p != space.dim_minus() {
        return Err(Error::NotAModule("even and odd parts differ in dimension".into()));
    }
    let p_std = alg.module.dim_plus();
    let n = as_count(p as f64 / p_std as f64, "multiplicity")?;
    let multiplicities = if graded_types(d, alg.field) == 1 {
        vec![n]
    } else {
        let s_std = omega_trace(&alg.module) / p_std as f64;
        let t = omega_trace(space) / p_std as f64;
        let a = as_count((n as f64 + s_std * t) / 2.0, "multiplicity")?;
        let b = as_count((n as f64 - s_std * t) / 2.0, "multiplicity")?;
        vec![a, b]
    };
    Ok(GradedModuleClass {
        degree: d,
        field: alg.field,
        multiplicities,
    })
}

/// Graded irreducibles of the given degree: the standard one and, when there
/// are two classes, its opposite.
pub fn graded_irreducibles(d: usize, field: Field) -> Result<Vec<SuperSpace>> {
    let e = match field {
        Field::Real if d <= REAL_MAX_DEGREE + 1 => real_tower().graded[d].clone(),
        Field::Complex if d <= COMPLEX_MAX_DEGREE + 1 => complex_graded(d),
        _ => return Err(Error::UnsupportedDegree { degree: d, field }),
    };
    if graded_types(d, field) == 2 {
        let o = e.opposite();
        Ok(vec![e, o])
    } else {
        Ok(vec![e])
    }
}

/// Drops the last generator.
pub fn restrict(space: &SuperSpace) -> Result<SuperSpace> {
    let gens = space.generators();
    let k = gens.len().saturating_sub(1);
    SuperSpace::with_clifford(
        space.dim_plus(),
        space.dim_minus(),
        space.field(),
        gens[..k].to_vec(),
        &Tolerances::default(),
    )
}

/// Classes of restrictions of graded `Cl_{d+1}` irreducibles.
pub fn restriction_image(d: usize, field: Field) -> Result<Vec<GradedModuleClass>> {
    let alg = build_clifford(d, field)?;
    graded_irreducibles(d + 1, field)?
        .iter()
        .map(|m| decompose_module(&alg, &restrict(m)?, &Tolerances::default()))
        .collect()
}

/// Diagonalizes `a` (rows × n) by unimodular row and column operations.
/// Returns the diagonal (length n, zero-padded) and the column transform `V`.
fn diagonalize(mut a: Vec<Vec<i64>>, n: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let r = a.len();
    let mut v: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let swap_cols = |a: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    for t in 0..r.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            swap_cols(&mut a, &mut v, t, bj);
            let piv = a[t][t];
            let mut clean = true;
            let pivot_row = a[t].clone();
            for row in &mut a[t + 1..r] {
                let q = row[t] / piv;
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= q * p;
                }
                clean &= row[t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j] / piv;
                for row in a.iter_mut() {
                    row[j] -= q * row[t];
                }
                for row in v.iter_mut() {
                    row[j] -= q * row[t];
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    let diag = (0..n).map(|i| if i < r { a[i][i] } else { 0 }).collect();
    (diag, v)
}

struct Quotient {
    /// Index of the nontrivial component and its group, if any.
    component: Option<(usize, Group)>,
    v: Vec<Vec<i64>>,
    sign: i64,
}

fn quotient(d: usize, field: Field) -> Result<Quotient> {
    let image = restriction_image(d, field)?;
    let n = graded_types(d, field);
    let rows: Vec<Vec<i64>> = image.into_iter().map(|c| c.multiplicities).collect();
    let (diag, v) = diagonalize(rows, n);
    let nontrivial: Vec<(usize, Group)> = diag
        .iter()
        .enumerate()
        .filter_map(|(i, &x)| match x {
            0 => Some((i, Group::Z)),
            1 => None,
            m => Some((i, Group::Zmod(m))),
        })
        .collect();
    if nontrivial.len() > 1 {
        return Err(Error::NotAModule("quotient group is not cyclic".into()));
    }
    let component = nontrivial.first().copied();
    // The standard irreducible is sent to +1.
    let sign = match component {
        Some((i, Group::Z)) if v[0][i] < 0 => -1,
        _ => 1,
    };
    Ok(Quotient { component, v, sign })
}

/// Group of the quotient `M̂_d / i*M̂_{d+1}` computed from the restriction image.
pub fn quotient_group(d: usize, field: Field) -> Result<Group> {
    Ok(quotient(d, field)?.component.map_or(Group::Trivial, |(_, g)| g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexClass {
    pub degree: usize,
    pub field: Field,
    pub group: Group,
    pub value: i64,
}

impl fmt::Display for IndexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.group {
            Group::Trivial => write!(f, "0 in 0"),
            g => write!(f, "{} in {g}", self.value),
        }
    }
}

impl IndexClass {
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: &IndexClass) -> Result<IndexClass> {
        if self.degree != other.degree || self.field != other.field {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let value = match self.group {
            Group::Trivial => 0,
            Group::Z => self.value + other.value,
            Group::Zmod(m) => (self.value + other.value).rem_euclid(m),
        };
        Ok(IndexClass { value, ..self.clone() })
    }
}

pub fn abs_class(m: &GradedModuleClass) -> Result<IndexClass> {
    let q = quotient(m.degree, m.field)?;
    let (group, value) = match q.component {
        None => (Group::Trivial, 0),
        Some((i, g)) => {
            let y: i64 = m.multiplicities.iter().enumerate().map(|(k, &x)| x * q.v[k][i]).sum();
            match g {
                Group::Zmod(n) => (g, y.rem_euclid(n)),
                _ => (g, q.sign * y),
            }
        }
    };
    Ok(IndexClass {
        degree: m.degree,
        field: m.field,
        group,
        value,
    })
}

/// `(L ⊕ ΓL)^⊥ = ker u ⊕ ker uᴴ` with the restricted Clifford action.
pub fn defect_module(g: &GraphIsometry, tol: &Tolerances) -> Result<SuperSpace> {
    let space = g.space();
    let kp = g.kernel(tol)?;
    let km = g.cokernel(tol)?;
    let b = Matrix::block_diag(&[kp.basis(), km.basis()]);
    let gens = space.generators().iter().map(|e| &(&b.adjoint() * e) * &b).collect();
    SuperSpace::with_clifford(kp.dim(), km.dim(), space.field(), gens, tol)
}

pub fn sublagrangian_index(g: &GraphIsometry, tol: &Tolerances) -> Result<IndexClass> {
    let space = g.space();
    if space.degree() > 0 {
        let f = lagrangian::from_graph_isometry(g, tol)?;
        let residual = space.invariance_residual(&f);
        if residual > tol.proj {
            return Err(Error::NotInvariant { residual });
        }
    }
    let alg = build_clifford(space.degree(), space.field())?;
    let defect = defect_module(g, tol)?;
    abs_class(&decompose_module(&alg, &defect, tol)?)
}

/// For a `Cl_{d+1}`-module, the `+1` eigenspace of `Γ e_{d+1}`: a Lagrangian
/// invariant under the first `d` generators. Returns the restricted space and the frame.
pub fn invariant_lagrangian(module: &SuperSpace, tol: &Tolerances) -> Result<(SuperSpace, Frame)> {
    let gens = module.generators();
    let Some(last) = gens.last() else {
        return Err(Error::UnsupportedDegree {
            degree: 0,
            field: module.field(),
        });
    };
    let s = &module.gamma() * last;
    let (vals, vecs) = linalg::eigh(&s)?;
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.0).collect();
    let basis = Matrix::from_fn(module.dim(), keep.len(), module.field(), |i, j| vecs.get(i, keep[j]));
    let frame = Frame::new(basis, &Tolerances { ortho: tol.proj, ..*tol })?;
    Ok((restrict(module)?, frame))
}
