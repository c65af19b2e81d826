use kmono_core::solver::{assemble, sample_compatible, solve};
use kmono_core::{Error, Mode, MonogenicComplex, Section, Tag};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn assembled_matrix_matches_operator() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    for l in 0..3 {
        let op = assemble(&cx, l, 2).unwrap();
        for _ in 0..4 {
            let g = cx.random_section(l, 2, &mut rng).unwrap();
            let lhs = op.apply(&op.domain.coords(&g).unwrap());
            let rhs = op.codomain.coords(&cx.d(l, &g).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "l={l}");
        }
    }
    let op = assemble(&cx, 0, 1).unwrap();
    assert_eq!((op.nrows(), op.ncols()), (189, 84 * 7));
    let flat = assemble(&cx, 1, 0).unwrap();
    assert_eq!(flat.nrows(), 0);
    assert!(assemble(&cx, 3, 1).is_err());
}

#[test]
fn capped_space_round_trip() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    let op = assemble(&cx, 1, 2).unwrap();
    assert_eq!(op.domain.dim(), 189 * 28);
    let g = cx.random_section(1, 2, &mut rng).unwrap();
    assert_eq!(op.domain.section(&op.domain.coords(&g).unwrap()), g);
    let high = cx.random_section(1, 3, &mut rng).unwrap();
    assert!(op.domain.coords(&high).is_err());
    let raw = cx.random_v_section(1, 1, &mut rng).unwrap();
    assert!(matches!(op.domain.coords(&raw), Err(Error::NotContractionFree)));
}

#[test]
fn zero_data_gives_zero_solution() {
    let cx = MonogenicComplex::new(6).unwrap();
    for l in 0..3 {
        let f = Section::zero(cx.profile(l + 1).unwrap(), Tag::ScriptV);
        let res = solve(&cx, l, &f, Mode::Strict).unwrap();
        assert!(res.u.is_zero());
        assert!(res.norm_sq.is_zero());
        assert_eq!(res.u_degree, None);
    }
}

#[test]
fn solves_images_of_the_operator() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for l in 0..3 {
        for deg in 1..=2 {
            let g = cx.random_section(l, deg, &mut rng).unwrap();
            let f = cx.d(l, &g).unwrap();
            let res = solve(&cx, l, &f, Mode::Strict).unwrap();
            assert!(res.residual_zero && res.min_norm_selected);
            assert_eq!(res.compatibility_checked, l < 2);
            assert_eq!(cx.d(l, &res.u).unwrap(), f);
            assert!(res.u.is_contraction_free());
            assert_eq!(res.u_degree, Some(f.degree().unwrap() + 1));
            // the returned solution never beats itself: ‖u‖ ≤ ‖g‖
            assert!(res.norm_sq <= g.norm_sq());
        }
    }
}

#[test]
fn solves_sampled_compatible_data() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(304);
    for l in 0..3 {
        let f = sample_compatible(&cx, l, 1, &mut rng).unwrap();
        assert!(!f.is_zero());
        assert!(f.is_contraction_free());
        if l < 2 {
            assert!(cx.d(l + 1, &f).unwrap().is_zero());
        }
        let res = solve(&cx, l, &f, Mode::Strict).unwrap();
        assert_eq!(cx.d(l, &res.u).unwrap(), f);
        assert!(res.u_degree.unwrap() <= f.degree().unwrap() + 1);
    }
}

#[test]
fn solution_is_orthogonal_to_the_kernel() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(305);
    for l in [0usize, 2] {
        let g = cx.random_section(l, 1, &mut rng).unwrap();
        let f = cx.d(l, &g).unwrap();
        let res = solve(&cx, l, &f, Mode::Strict).unwrap();
        let op = assemble(&cx, l, 1).unwrap();
        let rref = op.rref();
        for (free, _) in rref.nullspace() {
            let w = op.domain.section(&rref.kernel_vector(&[(free, kmono_core::Cx::ONE)]));
            assert!(cx.d(l, &w).unwrap().is_zero());
            assert!(res.u.inner(&w).unwrap().is_zero(), "l={l}");
        }
    }
}

#[test]
fn rejects_incompatible_data() {
    let cx = MonogenicComplex::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(306);
    for l in 0..2 {
        let f = cx.random_section(l + 1, 1, &mut rng).unwrap();
        match solve(&cx, l, &f, Mode::Strict) {
            Err(Error::Incompatible { residual }) => {
                assert!(!residual.is_zero());
                assert_eq!(*residual, cx.d(l + 1, &f).unwrap());
            }
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }
    let raw = cx.random_v_section(2, 1, &mut rng).unwrap();
    assert!(matches!(solve(&cx, 1, &raw, Mode::Strict), Err(Error::NotContractionFree)));
}

#[test]
fn spin_below_six_needs_exploratory_mode() {
    let mut rng = ChaCha8Rng::seed_from_u64(307);
    for k in [4usize, 5] {
        let cx = MonogenicComplex::new(k).unwrap();
        let g = cx.random_section(1, 2, &mut rng).unwrap();
        let f = cx.d(1, &g).unwrap();
        assert!(matches!(solve(&cx, 1, &f, Mode::Strict), Err(Error::OutsideHypothesis { .. })));
        let res = solve(&cx, 1, &f, Mode::Exploratory).unwrap();
        assert!(res.outside_hypothesis);
        assert_eq!(cx.d(1, &res.u).unwrap(), f);
    }
}
