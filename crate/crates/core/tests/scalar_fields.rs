use kmono_core::poly::{commutator_constant, gaussian_inner, gaussian_norm_sq, monomials_up_to, Exponent};
use kmono_core::{Cx, NablaTable, Poly6, Rational};
use proptest::prelude::*;

fn poly_strategy(max_deg: u8) -> impl Strategy<Value = Poly6> {
    let term = (prop::array::uniform6(0u8..=max_deg), -3i64..=3, -3i64..=3);
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        let mut p = Poly6::zero();
        for (e, re, im) in terms {
            if e.iter().map(|&x| x as usize).sum::<usize>() <= max_deg as usize {
                p.add_term(e, &Cx::int(re, im));
            }
        }
        p
    })
}

#[test]
fn commutator_on_all_index_tuples() {
    let t = NablaTable::new();
    let mons: Vec<Exponent> = monomials_up_to(3);
    for idx in 0..256usize {
        let (a, b, c, d) = ((idx >> 6) & 3, (idx >> 4) & 3, (idx >> 2) & 3, idx & 3);
        let k = Cx::from(commutator_constant(a, b, c, d));
        for e in &mons {
            let p = Poly6::monomial(*e, Cx::ONE);
            assert_eq!(t.commutator(a, b, c, d, &p), p.scale(&k), "indices {a}{b}{c}{d}, monomial {e:?}");
        }
    }
}

#[test]
fn moment_pairings() {
    assert_eq!(gaussian_inner(&Poly6::one(), &Poly6::one()), Cx::ONE);
    assert_eq!(gaussian_norm_sq(&Poly6::x(3)), Rational::new(1, 2));
    let p = Poly6::monomial([0, 0, 0, 0, 2, 0], Cx::ONE);
    assert_eq!(gaussian_norm_sq(&p), Rational::new(3, 4));
    // |x|² against 1: six second moments
    assert_eq!(gaussian_inner(&Poly6::phi(), &Poly6::one()), Cx::from(3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nabla_and_theta_are_adjoint(u in poly_strategy(3), v in poly_strategy(3), a in 0usize..4, b in 0usize..4) {
        let t = NablaTable::new();
        prop_assert_eq!(
            gaussian_inner(&t.nabla_upper(a, b, &u), &v),
            gaussian_inner(&u, &t.theta(a, b, &v))
        );
    }

    #[test]
    fn pairing_is_hermitian_and_positive(u in poly_strategy(3), v in poly_strategy(3)) {
        prop_assert_eq!(gaussian_inner(&u, &v), gaussian_inner(&v, &u).conj());
        let n = gaussian_norm_sq(&u);
        prop_assert!(n >= Rational::ZERO);
        prop_assert_eq!(n.is_zero(), u.is_zero());
    }

    #[test]
    fn ring_axioms(p in poly_strategy(2), q in poly_strategy(2), r in poly_strategy(2)) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.sub(&p), Poly6::zero());
        if let (Some(dp), Some(dq)) = (p.degree(), q.degree()) {
            prop_assert_eq!(p.mul(&q).degree(), Some(dp + dq));
        }
    }

    #[test]
    fn theta_raises_degree_by_at_most_one(p in poly_strategy(3), a in 0usize..4, b in 0usize..4) {
        let t = NablaTable::new();
        let th = t.theta(a, b, &p);
        if let Some(d) = th.degree() {
            prop_assert!(d <= p.degree().unwrap() + 1);
        }
        prop_assert_eq!(th, t.theta(b, a, &p).neg());
    }
}
