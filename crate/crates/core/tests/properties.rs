use proptest::prelude::*;

use lagcat::clifford::sublagrangian_index;
use lagcat::composition::{compose_bruteforce, compose_bruteforce_corr, compose_formula_detailed, Correspondence};
use lagcat::field_theory::{glue, glue_check, BordismKind, SpectralObject, Spin};
use lagcat::io::{LagrangianJson, Repr};
use lagcat::lagrangian::{self, u_to_t, PairLayout};
use lagcat::polarization::{direct_sum_polarized, opposite_polarized, PolarizedSpace};
use lagcat::random::{self, case_rng};
use lagcat::sequence::TailSymbol;
use lagcat::sweep::random_chain;
use lagcat::{Field, SuperSpace, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn polarized(seed: u64, p: usize, q: usize, rank: usize, field: Field) -> PolarizedSpace {
    let mut rng = case_rng(seed, 0);
    let w = random::partial_isometry(&mut rng, q, p, rank, field);
    PolarizedSpace::new(SuperSpace::new(p, q, field), w, &tol()).unwrap()
}

fn symbol() -> impl Strategy<Value = TailSymbol> {
    prop_oneof![
        Just(TailSymbol::Zero {}),
        (-3i32..=3).prop_filter("nonzero", |c| *c != 0).prop_map(|c| TailSymbol::Const { c: c as f64 }),
        ((-3i32..=3).prop_filter("nonzero", |c| *c != 0), -8i32..=8)
            .prop_map(|(c, a)| TailSymbol::Exp { c: c as f64, alpha: a as f64 / 4.0 }),
        (1i32..=3, -8i32..=8).prop_map(|(c, l)| TailSymbol::ApsExp { c: c as f64, l: l as f64 / 4.0 }),
    ]
}

fn same_symbol(a: &TailSymbol, b: &TailSymbol) -> bool {
    let (c, r) = a.canonical();
    let (d, s) = b.canonical();
    (c - d).abs() <= 1e-12 * c.abs().max(1.0) && (c == 0.0 || (r - s).abs() <= 1e-12)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn bruteforce_composite_is_lagrangian(seed in any::<u64>(), max_dim in 1usize..6, f in field()) {
        let mut rng = case_rng(seed, 0);
        let (a, b) = random_chain(&mut rng, max_dim, f, &tol()).unwrap();
        let frame = compose_bruteforce(&a, &b, &tol()).unwrap();
        let space = lagrangian::correspondence_space(a.v0(), b.v1()).unwrap();
        prop_assert!(lagrangian::isotropy_residual(&space, &frame) <= 1e-8);
        prop_assert_eq!(2 * frame.dim(), space.dim());
    }

    #[test]
    fn formula_matches_bruteforce_with_gap(seed in any::<u64>(), max_dim in 1usize..6, f in field()) {
        let mut rng = case_rng(seed, 1);
        let (a, b) = random_chain(&mut rng, max_dim, f, &tol()).unwrap();
        let r = compose_formula_detailed(&a, &b, tol().rank_cutoff, &tol()).unwrap();
        prop_assume!(r.gap >= 0.1);
        let brute = compose_bruteforce(&a, &b, &tol()).unwrap();
        prop_assert!(r.result.frame().distance(&brute) <= 1e-8);
    }

    #[test]
    fn identity_is_neutral(seed in any::<u64>(), max_dim in 1usize..6, f in field()) {
        let mut rng = case_rng(seed, 2);
        let (a, _) = random_chain(&mut rng, max_dim, f, &tol()).unwrap();
        let left = Correspondence::identity(a.v0(), &tol()).unwrap();
        let right = Correspondence::identity(a.v1(), &tol()).unwrap();
        let r1 = compose_formula_detailed(&left, &a, tol().rank_cutoff, &tol()).unwrap().result;
        let r2 = compose_bruteforce_corr(&a, &right, &tol()).unwrap();
        prop_assert!(r1.distance(&a) <= 1e-8);
        prop_assert!(r2.distance(&a) <= 1e-8);
    }

    #[test]
    fn u_t_u_roundtrip(seed in any::<u64>(), p in 0usize..5, q in 0usize..5, f in field()) {
        prop_assume!(p + q > 0);
        let mut rng = case_rng(seed, 3);
        let layout = PairLayout { p0: p, q0: q, p1: p, q1: q };
        let u = random::general_position_u(&mut rng, &layout, f, 0.1);
        let v = SuperSpace::new(p, q, f);
        let t = u_to_t(&u, &layout, &tol()).unwrap();
        prop_assert!(lagrangian::is_lagrangian_graph(&t, &v, &v, &tol()).unwrap());
        let back = lagrangian::t_to_u(&t, &v, &v, &tol()).unwrap();
        prop_assert!(back.dist(&u) <= 1e-8);
    }

    #[test]
    fn json_roundtrip_preserves_lagrangian(seed in any::<u64>(), max_dim in 1usize..5, f in field()) {
        let mut rng = case_rng(seed, 4);
        let (a, _) = random_chain(&mut rng, max_dim, f, &tol()).unwrap();
        let j = LagrangianJson::from_correspondence(&a, Repr::GraphU, &tol()).unwrap();
        let s = serde_json::to_string(&j).unwrap();
        let back: LagrangianJson = serde_json::from_str(&s).unwrap();
        let c = back.decode(&tol()).unwrap().correspondence(&tol()).unwrap();
        prop_assert!(c.distance(&a) <= 1e-12);
    }

    #[test]
    fn opposite_is_an_involution(seed in any::<u64>(), p in 0usize..5, q in 0usize..5, f in field()) {
        let v = SuperSpace::new(p, q, f);
        let vv = v.opposite().opposite();
        prop_assert!(vv.same_shape(&v));
        prop_assert!(vv.gamma().dist(&v.gamma()) == 0.0);
        let pol = polarized(seed, p, q, p.min(q), f);
        let back = opposite_polarized(&opposite_polarized(&pol, &tol()).unwrap(), &tol()).unwrap();
        prop_assert!(back.w().dist(pol.w()) <= 1e-14);
    }

    #[test]
    fn index_is_additive(
        s0 in any::<u64>(), s1 in any::<u64>(),
        p0 in 0usize..4, q0 in 0usize..4, p1 in 0usize..4, q1 in 0usize..4,
        r0 in 0usize..4, r1 in 0usize..4,
        f in field(),
    ) {
        let a = polarized(s0, p0, q0, r0, f);
        let b = polarized(s1, p1, q1, r1, f);
        let ia = sublagrangian_index(a.reference(), &tol()).unwrap();
        let ib = sublagrangian_index(b.reference(), &tol()).unwrap();
        let sum = direct_sum_polarized(&a, &b, &tol()).unwrap();
        let is = sublagrangian_index(sum.reference(), &tol()).unwrap();
        prop_assert_eq!(is.clone(), ia.add(&ib).unwrap());
        // degree 0: index = dim ker w − dim ker wᴴ
        let r = |p: usize, q: usize, r: usize| r.min(p).min(q) as i64;
        let expected = (p0 as i64 - r(p0, q0, r0)) - (q0 as i64 - r(p0, q0, r0))
            + (p1 as i64 - r(p1, q1, r1)) - (q1 as i64 - r(p1, q1, r1));
        prop_assert_eq!(is.value, expected);
    }

    #[test]
    fn symbol_product_is_commutative_and_associative(a in symbol(), b in symbol(), c in symbol()) {
        let ab = a.product(&b).unwrap();
        prop_assert!(same_symbol(&ab, &b.product(&a).unwrap()));
        let left = ab.product(&c).unwrap();
        let right = a.product(&b.product(&c).unwrap()).unwrap();
        prop_assert!(same_symbol(&left, &right));
        for n in [-3i64, 0, 5] {
            let want = a.eval(n) * b.eval(n);
            prop_assert!((ab.eval(n) - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn reciprocal_is_inverse(a in symbol()) {
        match a.reciprocal() {
            None => prop_assert!(a.is_zero()),
            Some(r) => {
                let one = TailSymbol::Const { c: 1.0 };
                prop_assert!(same_symbol(&a.product(&r).unwrap(), &one));
            }
        }
    }

    #[test]
    fn domination_is_stable_under_products(a in symbol(), b in symbol(), c in symbol()) {
        let (a, b) = if a.eventually_dominated_by(&b) { (a, b) } else { (b, a) };
        prop_assert!(a.eventually_dominated_by(&b));
        prop_assume!(!c.is_zero());
        let ac = a.product(&c).unwrap();
        let bc = b.product(&c).unwrap();
        prop_assert!(ac.eventually_dominated_by(&bc));
    }

    #[test]
    fn gluing_is_associative(a in 0u32..16, b in 0u32..16, c in 0u32..16) {
        let cyl = |k: u32| BordismKind::Cylinder { length: k as f64 / 8.0 };
        let left = glue(&glue(&cyl(a), &cyl(b)).unwrap(), &cyl(c)).unwrap();
        let right = glue(&cyl(a), &glue(&cyl(b), &cyl(c)).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn cylinders_glue_densely(l1 in 0.0f64..1.0, l2 in 0.0f64..1.0, modes in 2usize..8, periodic in any::<bool>()) {
        let spin = if periodic { Spin::Periodic } else { Spin::Antiperiodic };
        let obj = SpectralObject::circle(spin, modes, 1, false).unwrap();
        let r = glue_check(
            &BordismKind::Cylinder { length: l1 },
            &BordismKind::Cylinder { length: l2 },
            &obj,
            tol().rank_cutoff,
            1e-9,
            &tol(),
        )
        .unwrap();
        prop_assert_eq!(r.structured_exact, Some(true));
        prop_assert!(r.passed, "distance {}", r.dense_distance);
    }
}
