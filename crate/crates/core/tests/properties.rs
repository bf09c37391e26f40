//! Property tests for the algebraic invariants of each module.

mod common;

use common::fixture;
use leibniz::derivations::{map_space, unflatten, MapKind, MapOnSubspace};
use leibniz::dialgebra::{
    axioms_check, dialg_bracket, leibniz_to_dialgebra, DialgElement, DialgMonomial,
};
use leibniz::equations::{
    centralizer, check_solution, solve_in, EqSystem, EvalContext, SolveVerdict, TermExpr,
};
use leibniz::free::{FreeElement, Monomial};
use leibniz::hnn::{build_truncated_quotient, exact_model_check, hnn_extend, present, ModelOutcome};
use leibniz::linalg::{null_space, rref, solve, solve_with_certificate, Matrix, Subspace};
use leibniz::parse::parse_free;
use leibniz::{Field, Scalar, StructureAlgebra};
use proptest::prelude::*;

fn q() -> Field {
    Field::Rational
}

fn scalars(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| q().from_i64(x)).collect()
}

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
            .prop_map(move |rows| Matrix::from_rows(q(), c, rows.iter().map(|x| scalars(x)).collect()).unwrap())
    })
}

fn free_strategy(generators: usize, max_degree: usize) -> impl Strategy<Value = FreeElement> {
    prop::collection::vec(
        (prop::collection::vec(0..generators, 1..=max_degree), -3i64..=3),
        0..4,
    )
    .prop_map(|terms| {
        let mut e = FreeElement::zero(q());
        for (w, c) in terms {
            e.add_term(Monomial::new(w), &q().from_i64(c));
        }
        e
    })
}

fn dialg_monomial(generators: usize, max_len: usize) -> impl Strategy<Value = DialgMonomial> {
    prop::collection::vec(0..generators, 1..=max_len)
        .prop_flat_map(|w| {
            let len = w.len();
            (Just(w), 0..len)
        })
        .prop_map(|(w, c)| DialgMonomial::new(w, c))
}

fn dialg_element() -> impl Strategy<Value = DialgElement> {
    prop::collection::vec((dialg_monomial(2, 3), -2i64..=2), 0..3).prop_map(|terms| {
        let mut e = DialgElement::zero(q());
        for (m, c) in terms {
            e.add_term(m, &q().from_i64(c));
        }
        e
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_plus_nullity(m in matrix_strategy(4, 5)) {
        let k = null_space(&m);
        prop_assert_eq!(m.rank() + k.dim(), m.cols());
        for v in k.basis() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        let (r, pivots) = rref(&m);
        prop_assert_eq!(pivots.len(), m.rank());
        prop_assert_eq!(rref(&r).0, r);
    }

    #[test]
    fn solve_or_certificate(m in matrix_strategy(4, 4), b in prop::collection::vec(-3i64..=3, 4)) {
        let b = scalars(&b[..m.rows()]);
        match solve_with_certificate(&m, &b) {
            Ok(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), b.clone()),
            Err(w) => {
                let wm = m.transpose().mul_vec(&w).unwrap();
                prop_assert!(wm.iter().all(Scalar::is_zero));
                let wb = w.iter().zip(&b).fold(q().zero(), |acc, (x, y)| acc + x * y);
                prop_assert!(!wb.is_zero());
            }
        }
        prop_assert_eq!(solve(&m, &b).is_some(), solve_with_certificate(&m, &b).is_ok());
    }

    #[test]
    fn subspace_dimension_formula(a in matrix_strategy(3, 4), b in matrix_strategy(3, 4)) {
        prop_assume!(a.cols() == b.cols());
        let n = a.cols();
        let u = Subspace::span(q(), n, a.to_rows());
        let v = Subspace::span(q(), n, b.to_rows());
        let s = u.sum(&v).unwrap();
        let i = u.intersection(&v).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(i.is_subspace_of(&u) && i.is_subspace_of(&v));
        prop_assert!(u.is_subspace_of(&s));
        prop_assert_eq!(null_space(&u.quotient_map()), u);
    }

    #[test]
    fn free_leibniz_identity(x in free_strategy(3, 3), y in free_strategy(3, 3), z in free_strategy(3, 3)) {
        let lhs = x.bracket(&y).bracket(&z);
        let rhs = x.bracket(&z).bracket(&y).add(&x.bracket(&y.bracket(&z)));
        prop_assert_eq!(lhs, rhs);
        // [x, [y, z] + [z, y]] = 0
        let sym = y.bracket(&z).add(&z.bracket(&y));
        prop_assert!(x.bracket(&sym).is_zero());
    }

    #[test]
    fn display_parses_back(x in free_strategy(3, 4)) {
        prop_assert_eq!(parse_free(&x.to_string(), q()).unwrap(), x);
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        x in free_strategy(3, 3),
        y in free_strategy(3, 3),
        coords in prop::collection::vec(-2i64..=2, 9),
    ) {
        let a = fixture("sl2").algebra;
        let values: Vec<Vec<Scalar>> = coords.chunks(3).map(scalars).collect();
        let lhs = x.bracket(&y).evaluate(&a, &values).unwrap();
        let rhs = a.bracket(&x.evaluate(&a, &values).unwrap(), &y.evaluate(&a, &values).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dialgebra_axioms_on_random_triples(x in dialg_monomial(3, 4), y in dialg_monomial(3, 4), z in dialg_monomial(3, 4)) {
        prop_assert!(axioms_check(&[[x, y, z]]).holds);
    }

    #[test]
    fn dialgebra_bracket_is_leibniz(x in dialg_element(), y in dialg_element(), z in dialg_element()) {
        let b = dialg_bracket;
        prop_assert_eq!(b(&b(&x, &y), &z), b(&b(&x, &z), &y).add(&b(&x, &b(&y, &z))));
    }

    #[test]
    fn leibniz_to_dialgebra_preserves_brackets(x in free_strategy(2, 3), y in free_strategy(2, 3)) {
        prop_assert_eq!(
            leibniz_to_dialgebra(&x.bracket(&y)),
            dialg_bracket(&leibniz_to_dialgebra(&x), &leibniz_to_dialgebra(&y))
        );
    }

    #[test]
    fn solutions_found_always_check(target in prop::collection::vec(0i64..3, 2), use_neq in any::<bool>()) {
        let f = Field::prime(3).unwrap();
        let a = fixture("n2").algebra.over_field(f).unwrap();
        let x = || TermExpr::var("x");
        let b = TermExpr::Const(target.iter().map(|&t| f.from_i64(t)).collect());
        let s = EqSystem::new(
            vec!["x".into()],
            vec![TermExpr::bracket(x(), x()).minus(b)],
            if use_neq { vec![x()] } else { vec![] },
        ).unwrap();
        let out = solve_in(&s, &a, 1000).unwrap();
        let brute = common::brute_force_solutions(&s, &a);
        match out.verdict {
            SolveVerdict::Found(asg) => {
                prop_assert!(check_solution(&s, &asg, &EvalContext::identity(&a)).unwrap().holds);
                prop_assert!(!brute.is_empty());
            }
            SolveVerdict::NoSolution => prop_assert!(brute.is_empty()),
            SolveVerdict::Undecided => prop_assert!(false, "budget suffices"),
        }
    }

    #[test]
    fn centralizer_is_antitone(c1 in prop::collection::vec(-2i64..=2, 3), c2 in prop::collection::vec(-2i64..=2, 3)) {
        for name in ["solvable3", "sl2"] {
            let a = fixture(name).algebra;
            let small = centralizer(&a, &[scalars(&c1)]);
            let large_set = centralizer(&a, &[scalars(&c1), scalars(&c2)]);
            prop_assert!(large_set.is_subspace_of(&small));
        }
    }
}

/// Every element of the truncated relator ideal vanishes in the algebra it presents.
#[test]
fn truncated_ideal_is_sound() {
    for name in ["n2", "solvable3", "sl2"] {
        let a = fixture(name).algebra;
        let p = present(&a).unwrap();
        let tq = build_truncated_quotient(&p, 3).unwrap();
        assert!(tq.is_saturated());
        let basis: Vec<Vec<Scalar>> = (0..a.dim()).map(|i| a.basis_element(i)).collect();
        for r in tq.ideal_basis() {
            assert!(r.evaluate(&a, &basis).unwrap().iter().all(Scalar::is_zero), "{name}");
        }
        // Degree-1 part of the quotient is the algebra itself.
        assert_eq!(tq.quotient_dims_per_degree()[0], a.dim());
    }
}

/// `J_N ⊆ J_{N+1}` and normal forms are idempotent.
#[test]
fn truncations_are_nested() {
    let a = fixture("n2").algebra;
    let d = unflatten(q(), 2, map_space(&a, MapKind::Derivation).basis()[0].as_slice());
    let m = MapOnSubspace::restriction_of(&Subspace::span(q(), 2, vec![scalars(&[1, 0])]), &d);
    let h = hnn_extend(&a, &m, MapKind::Derivation).unwrap();
    let small = build_truncated_quotient(&h.presentation, 3).unwrap();
    let large = build_truncated_quotient(&h.presentation, 4).unwrap();
    for r in small.ideal_basis() {
        assert!(large.contains(&r).unwrap());
        let nf = large.normal_form(&r).unwrap();
        assert!(nf.is_zero());
    }
    let probe = FreeElement::generator(q(), 2).bracket(&FreeElement::generator(q(), 1));
    let nf = large.normal_form(&probe).unwrap();
    assert_eq!(large.normal_form(&nf).unwrap(), nf);
}

/// Relators of an HNN-extension with an exact model vanish in that model.
#[test]
fn hnn_ideal_vanishes_in_exact_models() {
    let a = StructureAlgebra::abelian(q(), 2);
    let d = Matrix::from_rows(q(), 2, vec![scalars(&[1, 2]), scalars(&[0, -1])]).unwrap();
    let h = hnn_extend(&a, &MapOnSubspace::restriction_of(&Subspace::full(q(), 2), &d), MapKind::Derivation).unwrap();
    let ModelOutcome::Model(model) = exact_model_check(&h) else {
        panic!("abelian algebras admit semidirect models");
    };
    let values: Vec<Vec<Scalar>> = (0..3).map(|i| model.algebra.basis_element(i)).collect();
    let tq = build_truncated_quotient(&h.presentation, 3).unwrap();
    for r in tq.ideal_basis() {
        assert!(r.evaluate(&model.algebra, &values).unwrap().iter().all(Scalar::is_zero));
    }
}
