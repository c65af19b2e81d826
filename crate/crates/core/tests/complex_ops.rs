use kmono_core::complex::{estimate_constants, EstimateReport};
use kmono_core::{Cx, Error, Mode, MonogenicComplex, Rational, Section, Tag};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn d_squares_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for k in 4..=8 {
        let cx = MonogenicComplex::new(k).unwrap();
        for l in 0..3 {
            for _ in 0..3 {
                let f = cx.random_section(l, 3, &mut rng).unwrap();
                let df = cx.d(l, &f).unwrap();
                assert!(df.is_contraction_free(), "k={k} l={l}");
                assert!(cx.d(l + 1, &df).unwrap().is_zero(), "k={k} l={l}");
            }
        }
    }
}

#[test]
fn d_lowers_degree_and_kills_constants() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for l in 0..3 {
        let c = cx.random_section(l, 0, &mut rng).unwrap();
        assert!(cx.d(l, &c).unwrap().is_zero());
        let f = cx.random_section(l, 2, &mut rng).unwrap();
        let df = cx.d(l, &f).unwrap();
        assert_eq!(df.degree(), Some(1));
        assert_eq!(df.tag(), Tag::ScriptV);
    }
    assert!(matches!(cx.d(4, &Section::zero(cx.profile(4).unwrap(), Tag::V)), Err(Error::LevelOutOfRange { .. })));
}

#[test]
fn full_adjoint_pairs_with_unrestricted_sections() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for l in 0..3 {
        for _ in 0..3 {
            let u = cx.random_v_section(l, 2, &mut rng).unwrap();
            let f = cx.random_section(l + 1, 2, &mut rng).unwrap();
            let lhs = cx.d(l, &u).unwrap().inner(&f).unwrap();
            let ds = cx.d_star_full(l, &f).unwrap();
            assert_eq!(lhs, u.inner(&ds).unwrap(), "l={l}");
            assert!(ds.degree().unwrap() <= 3);
        }
        let zero = Section::zero(cx.profile(l + 1).unwrap(), Tag::ScriptV);
        assert!(cx.d_star_full(l, &zero).unwrap().is_zero());
    }
}

#[test]
fn restricted_adjoint() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for l in 0..3 {
        for _ in 0..3 {
            let h = cx.random_section(l, 2, &mut rng).unwrap();
            let f = cx.random_section(l + 1, 2, &mut rng).unwrap();
            let th = cx.theta_restricted(l, &f).unwrap();
            assert!(th.is_contraction_free());
            assert_eq!(cx.d(l, &h).unwrap().inner(&f).unwrap(), h.inner(&th).unwrap(), "l={l}");
        }
    }
    for _ in 0..5 {
        let f = cx.random_section(1, 2, &mut rng).unwrap();
        assert_eq!(cx.theta_restricted(0, &f).unwrap(), cx.d_star_full(0, &f).unwrap().with_tag(Tag::ScriptV));
    }
    let untagged = cx.random_v_section(2, 1, &mut rng).unwrap();
    assert!(matches!(cx.theta_restricted(1, &untagged), Err(Error::NotContractionFree)));
}

#[test]
fn laplacians_are_self_adjoint_and_nonnegative() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for l in 1..=3 {
        let u = cx.random_section(l, 2, &mut rng).unwrap();
        let v = cx.random_section(l, 2, &mut rng).unwrap();
        let bu = cx.box_op(l, &u).unwrap();
        let bv = cx.box_op(l, &v).unwrap();
        assert_eq!(bu.inner(&v).unwrap(), u.inner(&bv).unwrap(), "l={l}");
        assert!(bu.degree().unwrap() <= 2);
        let q = bu.inner(&u).unwrap();
        assert!(q.im.is_zero());
        let mut expect = cx.theta_restricted(l - 1, &u).unwrap().norm_sq();
        if l < 3 {
            expect = &expect + &cx.d(l, &u).unwrap().norm_sq();
        }
        assert_eq!(q.re, expect);
        assert!(q.re >= Rational::ZERO);
        let zero = Section::zero(cx.profile(l).unwrap(), Tag::ScriptV);
        assert!(cx.box_op(l, &zero).unwrap().is_zero());
    }
}

fn check(cx: &MonogenicComplex, l: usize, f: &Section) -> EstimateReport {
    let r = cx.estimate_check(l, f, Mode::Strict).unwrap();
    assert!(r.holds, "k={} l={l}: {} > {}", cx.k(), r.lhs, r.rhs);
    r
}

#[test]
fn estimate_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let cx6 = MonogenicComplex::new(6).unwrap();
    for deg in 0..=2 {
        for l in 1..=3 {
            let f = cx6.random_section(l, deg, &mut rng).unwrap();
            check(&cx6, l, &f);
        }
    }
    let zero = Section::zero(cx6.profile(1).unwrap(), Tag::ScriptV);
    let r = check(&cx6, 1, &zero);
    assert!(r.lhs.is_zero() && r.rhs.is_zero());

    let cx7 = MonogenicComplex::new(7).unwrap();
    assert_eq!(estimate_constants(7, 3), Some((Rational::new(5, 16), Rational::ZERO)));
    for _ in 0..3 {
        let f = cx7.random_section(3, 2, &mut rng).unwrap();
        let r = check(&cx7, 3, &f);
        assert_eq!(r.rhs, &Rational::new(5, 16) * &r.adjoint_norm_sq);
    }
}

#[test]
fn estimate_hypothesis_guard() {
    let cx = MonogenicComplex::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let f = cx.random_section(1, 1, &mut rng).unwrap();
    assert!(matches!(cx.estimate_check(1, &f, Mode::Strict), Err(Error::OutsideHypothesis { k: 5 })));
    let r = cx.estimate_check(1, &f, Mode::Exploratory).unwrap();
    assert!(r.outside_hypothesis);
}

#[test]
fn section_pairing_is_hermitian() {
    let cx = MonogenicComplex::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let f = cx.random_section(2, 2, &mut rng).unwrap();
    let g = cx.random_section(2, 2, &mut rng).unwrap();
    assert_eq!(f.inner(&g).unwrap(), g.inner(&f).unwrap().conj());
    assert_eq!(f.inner(&f).unwrap(), Cx::from(f.norm_sq()));
}
