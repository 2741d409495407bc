//! Structured operators on sequence spaces: a dense core on the modes
//! `|n| ≤ N0` plus an exactly known diagonal tail.

use serde::{Deserialize, Serialize};

use crate::composition::Correspondence;
use crate::error::{Error, Result};
use crate::lagrangian;
use crate::linalg::{self, Field, Matrix, Tolerances, C64};
use crate::super_space::SuperSpace;

/// Index set and grading of the sequence space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lattice {
    /// `n ∈ ℤ`, `Γ e_n = e_{−n}`.
    #[default]
    Integer,
    /// `n ∈ ℤ` labelling `λ = n + ½`, `Γ e_n = e_{−n−1}`.
    HalfInteger,
    /// `n ≥ 0`, ungraded. Used for one-sided tails.
    Natural,
}

impl Lattice {
    /// Modes of the band of radius `r`, ascending.
    pub fn modes(self, r: usize) -> Vec<i64> {
        let r = r as i64;
        match self {
            Lattice::Integer => (-r..=r).collect(),
            Lattice::HalfInteger => (-r - 1..=r).collect(),
            Lattice::Natural => (0..=r).collect(),
        }
    }

    /// Partner under `Γ`, if the lattice is graded.
    pub fn partner(self, n: i64) -> Option<i64> {
        match self {
            Lattice::Integer => Some(-n),
            Lattice::HalfInteger => Some(-n - 1),
            Lattice::Natural => None,
        }
    }
}

/// Diagonal entries `a_n` outside the core.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum TailSymbol {
    Zero {},
    Const { c: f64 },
    /// `c·e^{αn}`
    Exp { c: f64, alpha: f64 },
    /// `c·e^{−ℓ(n+½)}`
    ApsExp { c: f64, l: f64 },
}

impl TailSymbol {
    pub fn eval(&self, n: i64) -> f64 {
        let n = n as f64;
        match *self {
            TailSymbol::Zero {} => 0.0,
            TailSymbol::Const { c } => c,
            TailSymbol::Exp { c, alpha } => c * (alpha * n).exp(),
            TailSymbol::ApsExp { c, l } => c * (-l * (n + 0.5)).exp(),
        }
    }

    /// `(coef, rate)` with `a_n = coef·e^{rate·n}`.
    pub fn canonical(&self) -> (f64, f64) {
        match *self {
            TailSymbol::Zero {} => (0.0, 0.0),
            TailSymbol::Const { c } => (c, 0.0),
            TailSymbol::Exp { c, alpha } => (c, alpha),
            TailSymbol::ApsExp { c, l } => (c * (-l / 2.0).exp(), -l),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().0 == 0.0
    }

    /// `Σ |a_n|²` over the tail converges.
    pub fn is_square_summable(&self, lattice: Lattice) -> bool {
        let (c, r) = self.canonical();
        if c == 0.0 {
            return true;
        }
        match lattice {
            Lattice::Natural => r < 0.0,
            // Two-sided: a nonzero exponential grows on one side.
            Lattice::Integer | Lattice::HalfInteger => false,
        }
    }

    /// Pointwise product, kept inside the grammar.
    pub fn product(&self, other: &TailSymbol) -> Result<TailSymbol> {
        use TailSymbol::*;
        Ok(match (*self, *other) {
            (Zero {}, _) | (_, Zero {}) => Zero {},
            (Const { c }, Const { c: d }) => Const { c: c * d },
            (ApsExp { c, l }, ApsExp { c: d, l: m }) => ApsExp { c: c * d, l: l + m },
            (ApsExp { c, l }, Const { c: d }) | (Const { c: d }, ApsExp { c, l }) => ApsExp { c: c * d, l },
            (a, b) => {
                let (c, r) = a.canonical();
                let (d, s) = b.canonical();
                if !(c * d).is_finite() || !(r + s).is_finite() {
                    return Err(Error::UnsupportedSymbols(format!("{a:?} · {b:?}")));
                }
                Exp { c: c * d, alpha: r + s }
            }
        })
    }

    /// `1/a_n`, when defined.
    pub fn reciprocal(&self) -> Option<TailSymbol> {
        match *self {
            TailSymbol::Zero {} => None,
            TailSymbol::Const { c } => Some(TailSymbol::Const { c: 1.0 / c }),
            TailSymbol::Exp { c, alpha } => Some(TailSymbol::Exp { c: 1.0 / c, alpha: -alpha }),
            TailSymbol::ApsExp { c, l } => Some(TailSymbol::ApsExp { c: 1.0 / c, l: -l }),
        }
    }

    /// `|a_n| ≤ |b_n|` for all large `n` (one-sided).
    pub fn eventually_dominated_by(&self, other: &TailSymbol) -> bool {
        let (c, r) = self.canonical();
        let (d, s) = other.canonical();
        c == 0.0 || (d != 0.0 && (r < s || (r == s && c.abs() <= d.abs())))
    }

    /// Unimodular symbol: `|a_n| = 1` for all `n`.
    pub fn is_unimodular(&self) -> bool {
        let (c, r) = self.canonical();
        c.abs() == 1.0 && r == 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructuredOp {
    lattice: Lattice,
    n0: usize,
    core: Matrix,
    tail: TailSymbol,
}

impl StructuredOp {
    pub fn new(lattice: Lattice, n0: usize, core: Matrix, tail: TailSymbol) -> Result<Self> {
        let k = lattice.modes(n0).len();
        if core.shape() != (k, k) {
            return Err(Error::DimensionMismatch(format!(
                "core has shape {:?}, band of radius {n0} has {k} modes",
                core.shape()
            )));
        }
        if !core.is_finite() {
            return Err(Error::Malformed("core entries must be finite".into()));
        }
        Ok(StructuredOp { lattice, n0, core, tail })
    }

    /// Diagonal operator `e_n ↦ a_n e_n` for every `n`.
    pub fn multiplication(lattice: Lattice, n0: usize, tail: TailSymbol) -> Self {
        let d: Vec<f64> = lattice.modes(n0).iter().map(|&n| tail.eval(n)).collect();
        StructuredOp {
            lattice,
            n0,
            core: Matrix::diag_real(&d, Field::Real),
            tail,
        }
    }

    /// `T_α e_n = e^{αn} e_n` on `ℓ²(ℤ)`.
    pub fn t_alpha(alpha: f64) -> Self {
        StructuredOp::multiplication(Lattice::Integer, 0, TailSymbol::Exp { c: 1.0, alpha })
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn core(&self) -> &Matrix {
        &self.core
    }

    pub fn tail(&self) -> &TailSymbol {
        &self.tail
    }

    /// Diagonal core, so the whole operator is a multiplication operator.
    pub fn is_diagonal(&self) -> bool {
        let k = self.core.rows();
        (0..k).all(|i| (0..k).all(|j| i == j || self.core.get(i, j) == C64::new(0.0, 0.0)))
    }

    /// The core is the tail symbol itself.
    pub fn is_pure(&self) -> bool {
        *self == StructuredOp::multiplication(self.lattice, self.n0, self.tail)
    }

    /// Diagonal entry at mode `n` (diagonal operators only).
    pub fn diagonal_entry(&self, n: i64) -> C64 {
        let modes = self.lattice.modes(self.n0);
        match modes.iter().position(|&m| m == n) {
            Some(i) => self.core.get(i, i),
            None => C64::new(self.tail.eval(n), 0.0),
        }
    }

    /// Dense matrix on the modes of the band of radius `n` (mode basis).
    pub fn truncate_matrix(&self, n: usize) -> Result<Matrix> {
        if n < self.n0 {
            return Err(Error::DimensionMismatch(format!("truncation {n} below band radius {}", self.n0)));
        }
        let modes = self.lattice.modes(n);
        let inner = self.lattice.modes(self.n0);
        let offset = modes.iter().position(|&m| m == inner[0]).unwrap_or(0);
        let mut out = Matrix::zeros(modes.len(), modes.len(), self.core.field());
        for (i, &m) in modes.iter().enumerate() {
            if i < offset || i >= offset + inner.len() {
                out.set(i, i, C64::new(self.tail.eval(m), 0.0));
            }
        }
        out.set_block(offset, offset, &self.core);
        Ok(out)
    }

    /// Dense truncation with its graded structure.
    pub fn truncate(&self, n: usize) -> Result<Truncation> {
        let t_modes = self.truncate_matrix(n)?;
        let frame = GradedModes::new(self.lattice, n)?;
        let t = &(&frame.q * &t_modes) * &frame.q.adjoint();
        Ok(Truncation {
            modes: frame.modes.clone(),
            gamma_modes: frame.gamma_modes(),
            t_modes,
            space: frame.space(),
            q: frame.q.clone(),
            t,
        })
    }

    /// Graph of the truncation as a correspondence `V → V`. Diagonal operators
    /// are converted pair by pair in closed form, so large entries stay accurate.
    pub fn truncated_correspondence(&self, n: usize, tol: &Tolerances) -> Result<Correspondence> {
        let g = GradedModes::new(self.lattice, n)?;
        let space = g.space();
        if !self.is_diagonal() {
            let tr = self.truncate(n)?;
            return Correspondence::from_t(&space, &space, &tr.t, tol);
        }
        let mut pairs = Vec::new();
        for &(plus, minus, mode) in &g.pairs {
            let a = self.diagonal_entry(mode).re;
            let a_partner = self.diagonal_entry(self.lattice.partner(mode).unwrap()).re;
            pairs.push(PairEntry::from_values(plus, minus, a, a_partner)?);
        }
        let mut selfpaired = Vec::new();
        if let Some(idx) = g.zero_plus {
            selfpaired.push((idx, self.diagonal_entry(0)));
        }
        let u = diagonal_pair_u(space.dim_plus(), space.dim_minus(), &pairs, &selfpaired);
        Correspondence::from_u(&space, &space, u, tol)
    }
}

/// Exact Hilbert–Schmidt decision: only the tail matters.
pub fn is_hilbert_schmidt(op: &StructuredOp) -> bool {
    op.tail.is_square_summable(op.lattice)
}

/// Graded basis of the truncated sequence space.
struct GradedModes {
    lattice: Lattice,
    modes: Vec<i64>,
    /// `(plus index, minus index, nonnegative mode)` of each exchanged pair.
    pairs: Vec<(usize, usize, i64)>,
    /// Plus index of the self-paired mode `e_0` (integer lattice).
    zero_plus: Option<usize>,
    /// Graded coordinates = `q` · mode coordinates.
    q: Matrix,
}

impl GradedModes {
    fn new(lattice: Lattice, n: usize) -> Result<Self> {
        if lattice == Lattice::Natural {
            return Err(Error::UnsupportedSymbols("the natural lattice carries no grading".into()));
        }
        let modes = lattice.modes(n);
        let pos = |m: i64| modes.iter().position(|&x| x == m).unwrap();
        let positive: Vec<i64> = match lattice {
            Lattice::Integer => (1..=n as i64).collect(),
            _ => (0..=n as i64).collect(),
        };
        let zero = lattice == Lattice::Integer;
        let p = positive.len() + usize::from(zero);
        let dim = modes.len();
        let mut q = Matrix::zeros(dim, dim, Field::Real);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut pairs = Vec::new();
        let mut zero_plus = None;
        if zero {
            q.set(0, pos(0), C64::new(1.0, 0.0));
            zero_plus = Some(0);
        }
        for (k, &m) in positive.iter().enumerate() {
            let plus = k + usize::from(zero);
            let minus = p + k;
            let (i, j) = (pos(m), pos(lattice.partner(m).unwrap()));
            q.set(plus, i, C64::new(s, 0.0));
            q.set(plus, j, C64::new(s, 0.0));
            q.set(minus, i, C64::new(s, 0.0));
            q.set(minus, j, C64::new(-s, 0.0));
            pairs.push((plus, k, m));
        }
        Ok(GradedModes {
            lattice,
            modes,
            pairs,
            zero_plus,
            q,
        })
    }

    fn space(&self) -> SuperSpace {
        let p = self.pairs.len() + usize::from(self.zero_plus.is_some());
        SuperSpace::new(p, self.pairs.len(), Field::Real)
    }

    fn gamma_modes(&self) -> Matrix {
        let n = self.modes.len();
        let mut g = Matrix::zeros(n, n, Field::Real);
        for (i, &m) in self.modes.iter().enumerate() {
            let j = self.modes.iter().position(|&x| x == self.lattice.partner(m).unwrap()).unwrap();
            g.set(j, i, C64::new(1.0, 0.0));
        }
        g
    }
}

/// Dense truncation of a structured operator.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub modes: Vec<i64>,
    /// The involution `e_n ↦ e_partner(n)` in the mode basis.
    pub gamma_modes: Matrix,
    pub t_modes: Matrix,
    /// Graded space with `Γ = diag(+1, −1)`.
    pub space: SuperSpace,
    /// Graded coordinates from mode coordinates.
    pub q: Matrix,
    /// The operator in graded coordinates.
    pub t: Matrix,
}

impl Truncation {
    /// `(‖T⁻¹ − Γ Tᴴ Γ‖_F, threshold)` in the mode basis.
    pub fn lagrangian_residual(&self, tol: &Tolerances) -> Result<(f64, f64)> {
        lagrangian::lagrangian_graph_residual_gamma(&self.t_modes, &self.gamma_modes, &self.gamma_modes, tol)
    }

    /// Residual relative to `max(1, ‖T‖_F)`.
    pub fn relative_residual(&self, tol: &Tolerances) -> Result<f64> {
        Ok(self.lagrangian_residual(tol)?.0 / self.t_modes.hs_norm().max(1.0))
    }

    pub fn is_lagrangian_graph(&self, tol: &Tolerances) -> Result<bool> {
        let (r, thr) = self.lagrangian_residual(tol)?;
        Ok(r <= thr)
    }
}

/// One exchanged pair of a diagonal operator, in graded coordinates.
#[derive(Clone, Copy, Debug)]
pub struct PairEntry {
    pub plus: usize,
    pub minus: usize,
    /// `(a − a')/(a + a')`
    pub tanh: f64,
    /// `2/(a + a')`
    pub sech: f64,
}

impl PairEntry {
    /// From the entries `a` (on the nonnegative mode) and `a'` (on its partner).
    /// The graph is Lagrangian only when `a·a' = 1`.
    pub fn from_values(plus: usize, minus: usize, a: f64, a_partner: f64) -> Result<Self> {
        if (a * a_partner - 1.0).abs() > 1e-9 {
            return Err(Error::NotLagrangian(format!(
                "diagonal entries {a} and {a_partner} on an exchanged pair do not multiply to 1"
            )));
        }
        let x = a.abs().ln();
        let sign = a.signum();
        Ok(PairEntry::from_log(plus, minus, x, sign))
    }

    /// Entries `a = s·e^{x}`, `a' = s·e^{−x}`.
    pub fn from_log(plus: usize, minus: usize, x: f64, sign: f64) -> Self {
        PairEntry {
            plus,
            minus,
            tanh: x.tanh(),
            sech: sign / x.cosh(),
        }
    }
}

/// `u : V⁻ ⊕ V⁺ → V⁺ ⊕ V⁻` of a diagonal graph `V → V`, assembled pair by pair:
/// `u00 = −tanh`, `u01 = u10 = sech`, `u11 = tanh`; a self-paired even mode with
/// entry `a0` contributes `u01 = 1/a0`.
pub fn diagonal_pair_u(p: usize, q: usize, pairs: &[PairEntry], selfpaired: &[(usize, C64)]) -> Matrix {
    let mut u = Matrix::zeros(p + q, q + p, Field::Real);
    let r = |x: f64| C64::new(x, 0.0);
    for e in pairs {
        u.set(e.plus, e.minus, r(-e.tanh));
        u.set(e.plus, q + e.plus, r(e.sech));
        u.set(p + e.minus, e.minus, r(e.sech));
        u.set(p + e.minus, q + e.plus, r(e.tanh));
    }
    for &(i, a0) in selfpaired {
        u.set(i, q + i, C64::new(1.0, 0.0) / a0);
    }
    u
}

/// Smallest nonzero singular values of `1 − v11u11` and `1 − u11v11` for the
/// dense truncations of `graph(a)` and `graph(b)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LadderStep {
    pub n: usize,
    pub sigma_min_a: f64,
    pub sigma_min_b: f64,
}

fn smallest_nonzero(m: &Matrix) -> Result<f64> {
    Ok(linalg::singular_values(m)?
        .into_iter()
        .filter(|&s| s > 0.0)
        .fold(f64::INFINITY, f64::min))
}

pub fn composition_gap_ladder(
    a: &StructuredOp,
    b: &StructuredOp,
    truncations: &[usize],
    tol: &Tolerances,
) -> Result<Vec<LadderStep>> {
    truncations
        .iter()
        .map(|&n| {
            let u = a.truncated_correspondence(n, tol)?.blocks();
            let v = b.truncated_correspondence(n, tol)?.blocks();
            let id = Matrix::identity(u.u11.cols(), Field::Real);
            let ma = &id - &(&v.u00 * &u.u11);
            let mb = &Matrix::identity(u.u11.rows(), Field::Real) - &(&u.u11 * &v.u00);
            Ok(LadderStep {
                n,
                sigma_min_a: smallest_nonzero(&ma)?,
                sigma_min_b: smallest_nonzero(&mb)?,
            })
        })
        .collect()
}

/// Outcome of composing two structured graphs, `a` applied first.
#[derive(Clone, Debug, PartialEq)]
pub enum StructuredComposition {
    ClosedLagrangian { product: StructuredOp },
    NotClosed { closure: StructuredOp, diagnosis: String },
}

impl StructuredComposition {
    pub fn is_closed(&self) -> bool {
        matches!(self, StructuredComposition::ClosedLagrangian { .. })
    }

    pub fn operator(&self) -> &StructuredOp {
        match self {
            StructuredComposition::ClosedLagrangian { product } => product,
            StructuredComposition::NotClosed { closure, .. } => closure,
        }
    }
}

/// `graph(T_b) ∘ graph(T_a) = graph(T_b T_a)` on its natural domain.
///
/// The natural domain is the full domain of the product exactly when no side of
/// the lattice has `a` growing while `b` decays.
pub fn compose_structured(a: &StructuredOp, b: &StructuredOp) -> Result<StructuredComposition> {
    if a.lattice != b.lattice {
        return Err(Error::UnsupportedSymbols("operators live on different lattices".into()));
    }
    if !a.is_diagonal() || !b.is_diagonal() {
        return Err(Error::UnsupportedSymbols("only multiplication operators compose symbolically".into()));
    }
    let lattice = a.lattice;
    let tail = a.tail.product(&b.tail)?;
    let n0 = a.n0.max(b.n0);
    let modes = lattice.modes(n0);
    let core_entries: Vec<C64> = modes.iter().map(|&n| a.diagonal_entry(n) * b.diagonal_entry(n)).collect();
    let product = if a.is_pure() && b.is_pure() {
        StructuredOp::multiplication(lattice, n0, tail)
    } else {
        StructuredOp::new(lattice, n0, Matrix::diag(&core_entries, Field::Real), tail)?
    };
    let (_, ra) = a.tail.canonical();
    let (_, rb) = b.tail.canonical();
    let sides: &[f64] = match lattice {
        Lattice::Natural => &[1.0],
        _ => &[1.0, -1.0],
    };
    let broken = !a.tail.is_zero() && !b.tail.is_zero() && sides.iter().any(|&s| s * ra > 0.0 && s * rb < 0.0);
    if !broken {
        return Ok(StructuredComposition::ClosedLagrangian { product });
    }
    let identity = tail.canonical() == (1.0, 0.0) && core_entries.iter().all(|z| *z == C64::new(1.0, 0.0));
    let diagnosis = if identity {
        "composition ⊂ identity, not everywhere defined".to_string()
    } else {
        format!("composition ⊂ graph of the product symbol {tail:?}, domain not closed")
    };
    Ok(StructuredComposition::NotClosed { closure: product, diagnosis })
}

/// Structured and dense views of `L_{α2} ∘ L_{α1}`.
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleDemo {
    pub alpha1: f64,
    pub alpha2: f64,
    /// `closed_lagrangian` or `not_closed`.
    pub verdict: String,
    pub diagnosis: Option<String>,
    pub product_tail: TailSymbol,
    pub ladder: Vec<LadderStep>,
    /// Each ladder step shrinks by at least `e^{|α|ΔN}`, `α = min(|α1|, |α2|)`.
    pub ladder_decays: bool,
}

pub fn demo_counterexample(alpha1: f64, alpha2: f64, tol: &Tolerances) -> Result<CounterexampleDemo> {
    let (a, b) = (StructuredOp::t_alpha(alpha1), StructuredOp::t_alpha(alpha2));
    let r = compose_structured(&a, &b)?;
    let ladder = composition_gap_ladder(&a, &b, &[8, 16, 32], tol)?;
    let rate = alpha1.abs().min(alpha2.abs());
    let ladder_decays = ladder.windows(2).all(|w| {
        let dn = (w[1].n - w[0].n) as f64;
        w[1].sigma_min_a <= w[0].sigma_min_a * (-rate * dn).exp()
    });
    let (verdict, diagnosis) = match &r {
        StructuredComposition::ClosedLagrangian { .. } => ("closed_lagrangian", None),
        StructuredComposition::NotClosed { diagnosis, .. } => ("not_closed", Some(diagnosis.clone())),
    };
    Ok(CounterexampleDemo {
        alpha1,
        alpha2,
        verdict: verdict.into(),
        diagnosis,
        product_tail: *r.operator().tail(),
        ladder,
        ladder_decays,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::{compose_bruteforce, compose_formula};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn only_zero_is_dominated_by_zero() {
        let zero = TailSymbol::Zero {};
        let decay = TailSymbol::ApsExp { c: 1.0, l: 0.25 };
        assert!(!decay.eventually_dominated_by(&zero));
        assert!(zero.eventually_dominated_by(&decay));
        assert!(zero.eventually_dominated_by(&zero));
    }

    #[test]
    fn hs_examples() {
        let zero = StructuredOp::multiplication(Lattice::Integer, 2, TailSymbol::Zero {});
        assert!(is_hilbert_schmidt(&zero));
        let grow = StructuredOp::multiplication(Lattice::Natural, 0, TailSymbol::Exp { c: 1.0, alpha: 0.3 });
        assert!(!is_hilbert_schmidt(&grow));
        let decay = StructuredOp::multiplication(Lattice::Natural, 0, TailSymbol::ApsExp { c: 1.0, l: 0.5 });
        assert!(is_hilbert_schmidt(&decay));
        let c = StructuredOp::multiplication(Lattice::Natural, 0, TailSymbol::Const { c: 2.0 });
        assert!(!is_hilbert_schmidt(&c));
    }

    #[test]
    fn canonical_form_of_aps() {
        let s = TailSymbol::ApsExp { c: 2.0, l: 0.4 };
        let (c, r) = s.canonical();
        for n in [0, 3, 7] {
            assert!((c * (r * n as f64).exp() - s.eval(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn same_sign_composes_exactly() {
        let r = compose_structured(&StructuredOp::t_alpha(0.5), &StructuredOp::t_alpha(0.7)).unwrap();
        assert!(r.is_closed());
        assert_eq!(*r.operator().tail(), TailSymbol::Exp { c: 1.0, alpha: 0.5 + 0.7 });
    }

    #[test]
    fn opposite_sign_is_not_closed() {
        let r = compose_structured(&StructuredOp::t_alpha(1.0), &StructuredOp::t_alpha(-1.0)).unwrap();
        match r {
            StructuredComposition::NotClosed { closure, diagnosis } => {
                assert_eq!(closure, StructuredOp::t_alpha(0.0));
                assert!(diagnosis.contains("identity"));
            }
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }

    #[test]
    fn identity_composes_with_identity() {
        let r = compose_structured(&StructuredOp::t_alpha(0.0), &StructuredOp::t_alpha(0.0)).unwrap();
        assert!(r.is_closed());
        assert_eq!(*r.operator(), StructuredOp::t_alpha(0.0));
    }

    #[test]
    fn truncation_is_lagrangian() {
        let tr = StructuredOp::t_alpha(0.5).truncate(8).unwrap();
        assert!(tr.is_lagrangian_graph(&tol()).unwrap());
        assert!(lagrangian::is_lagrangian_graph(&tr.t, &tr.space, &tr.space, &tol()).unwrap());
        let id = StructuredOp::t_alpha(0.0).truncate(4).unwrap();
        assert!(id.t.dist(&Matrix::identity(9, Field::Real)) < 1e-15);
    }

    #[test]
    fn closed_form_u_matches_dense_conversion() {
        for op in [
            StructuredOp::t_alpha(0.3),
            StructuredOp::multiplication(Lattice::HalfInteger, 1, TailSymbol::ApsExp { c: 1.0, l: -0.4 }),
        ] {
            let c = op.truncated_correspondence(5, &tol()).unwrap();
            let tr = op.truncate(5).unwrap();
            let dense = Correspondence::from_t(&tr.space, &tr.space, &tr.t, &tol()).unwrap();
            assert!(c.u().dist(dense.u()) < 1e-12);
        }
    }

    #[test]
    fn truncated_same_sign_composition() {
        let (a, b) = (StructuredOp::t_alpha(0.2), StructuredOp::t_alpha(0.3));
        let ca = a.truncated_correspondence(6, &tol()).unwrap();
        let cb = b.truncated_correspondence(6, &tol()).unwrap();
        let expect = StructuredOp::t_alpha(0.5).truncated_correspondence(6, &tol()).unwrap();
        assert!(compose_bruteforce(&ca, &cb, &tol()).unwrap().distance(expect.frame()) < 1e-10);
        assert!(compose_formula(&ca, &cb, 1e-10, &tol()).unwrap().distance(&expect) < 1e-10);
    }

    #[test]
    fn rejects_non_lagrangian_pairs() {
        let op = StructuredOp::multiplication(Lattice::Integer, 0, TailSymbol::Const { c: 2.0 });
        assert!(op.truncated_correspondence(2, &tol()).is_err());
    }

    #[test]
    fn ladder_decays_only_for_opposite_signs() {
        let t = tol();
        let (a, b) = (StructuredOp::t_alpha(0.25), StructuredOp::t_alpha(-0.25));
        let steps = composition_gap_ladder(&a, &b, &[8, 16, 32], &t).unwrap();
        for w in steps.windows(2) {
            let dn = (w[1].n - w[0].n) as f64;
            assert!(w[1].sigma_min_a <= w[0].sigma_min_a * (-0.25 * dn).exp());
        }
        // 1 − tanh² at the outermost mode.
        let x = 0.25 * 32.0_f64;
        assert!((steps[2].sigma_min_a - 1.0 / x.cosh().powi(2)).abs() < 1e-9);
        let same = composition_gap_ladder(&a, &StructuredOp::t_alpha(0.4), &[8, 16, 32], &t).unwrap();
        assert!(same.iter().all(|s| s.sigma_min_a >= 1.0 - 1e-12));
    }

    #[test]
    fn symbol_json_shape() {
        let s = serde_json::to_string(&TailSymbol::ApsExp { c: 1.0, l: 0.5 }).unwrap();
        assert_eq!(s, r#"{"kind":"aps_exp","params":{"c":1.0,"l":0.5}}"#);
        let z: TailSymbol = serde_json::from_str(r#"{"kind":"zero","params":{}}"#).unwrap();
        assert_eq!(z, TailSymbol::Zero {});
    }
}
