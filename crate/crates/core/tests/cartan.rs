use ecw_core::cartan::*;
use ecw_core::qseries::{rat, rat_int, QExp, Rational, Ring};
use ecw_core::theta::{sigma_product, sigma_qexp, TauPoint};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

type F = EqForm<Rational>;

fn conv() -> CartanConvention {
    CartanConvention::default()
}

fn rand_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

/// Random form built from arbitrary monomials (not necessarily invariant).
fn random_form(rng: &mut ChaCha8Rng, n: usize) -> F {
    let mut f = F::zero(n);
    for _ in 0..rng.gen_range(1..5) {
        let mut t = F::constant(n, rand_rat(rng));
        for _ in 0..rng.gen_range(0..4) {
            let g = match rng.gen_range(0..4) {
                0 => F::coord(n, rng.gen_range(0..2 * n)),
                1 => F::dcoord(n, rng.gen_range(0..2 * n)),
                2 => F::gaussian(n, rng.gen_range(0..n), 1),
                _ => F::lie_var(n, rng.gen_range(0..n)),
            };
            t = t.wedge(&g).unwrap();
        }
        f = f.add(&t).unwrap();
    }
    f
}

/// Random form built from rotation-invariant generators.
fn random_invariant(rng: &mut ChaCha8Rng, n: usize) -> F {
    let mut f = F::zero(n);
    for _ in 0..rng.gen_range(1..5) {
        let mut t = F::constant(n, rand_rat(rng));
        for _ in 0..rng.gen_range(0..4) {
            let j = rng.gen_range(0..n);
            let (x, y) = (F::coord(n, 2 * j), F::coord(n, 2 * j + 1));
            let (dx, dy) = (F::dcoord(n, 2 * j), F::dcoord(n, 2 * j + 1));
            let g = match rng.gen_range(0..7) {
                0 => x.wedge(&x).unwrap().add(&y.wedge(&y).unwrap()).unwrap(),
                1 => dx.wedge(&dy).unwrap(),
                2 => x.wedge(&dx).unwrap().add(&y.wedge(&dy).unwrap()).unwrap(),
                3 => x.wedge(&dy).unwrap().sub(&y.wedge(&dx).unwrap()).unwrap(),
                4 => F::gaussian(n, j, 1),
                5 => F::lie_var(n, j),
                _ => F::beta(n, -1),
            };
            t = t.wedge(&g).unwrap();
        }
        f = f.add(&t).unwrap();
    }
    f
}

#[test]
fn d_squared_and_double_contraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.gen_range(1..=2);
        let a = random_form(&mut rng, n);
        assert!(a.d().d().is_zero());
        if n == 1 {
            assert!(a.contract(&conv()).contract(&conv()).is_zero());
        }
    }
    let top = F::gaussian(1, 0, 1).wedge(&F::dcoord(1, 0)).unwrap().wedge(&F::dcoord(1, 1)).unwrap();
    assert!(top.d().is_zero());
}

#[test]
fn wedge_is_graded_commutative() {
    let dx = F::dcoord(1, 0);
    let dy = F::dcoord(1, 1);
    assert_eq!(dx.wedge(&dy).unwrap(), dy.wedge(&dx).unwrap().neg());
    assert!(dx.wedge(&dx).unwrap().is_zero());
}

#[test]
fn q_squared_vanishes_on_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let n = rng.gen_range(1..=2);
        let a = random_invariant(&mut rng, n);
        assert!(a.is_invariant(&conv()));
        let q = a.cartan_q(&conv()).unwrap();
        assert!(q.cartan_q(&conv()).unwrap().is_zero());
    }
    assert!(F::one(2).cartan_q(&conv()).unwrap().is_zero());
}

#[test]
fn non_invariant_rejected() {
    let x = F::coord(1, 0);
    assert_eq!(x.cartan_q(&conv()).unwrap_err(), CartanError::NotInvariant { plane: 0 });
}

#[test]
fn q_raises_degree_by_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 20 {
        let a = random_invariant(&mut rng, 2);
        let Some(d) = a.degree() else { continue };
        let q = a.cartan_q(&conv()).unwrap();
        for k in q.terms().keys() {
            assert_eq!(k.degree(), d + 1);
        }
        checked += 1;
    }
}

#[test]
fn mq_form_closed_and_restricts_to_euler() {
    for n in 1..=3 {
        for c in [CartanConvention::default(), CartanConvention::integer()] {
            let u = mq_thom_form(n, &c);
            assert!(u.cartan_q(&c).unwrap().is_zero(), "n={n} {c:?}");
            assert_eq!(u.degree(), Some(2 * n as i64));
        }
        let res = mq_thom_form(n, &conv()).restrict_origin();
        let want = LieSeries::monomial(n, -(n as i32), 0, vec![1; n], rat_int(1));
        assert_eq!(res.terms, want.terms);
    }
}

#[test]
fn mq_form_integrates_to_one() {
    for n in 1..=2 {
        let mut u = mq_thom_form(n, &conv());
        for j in 0..n {
            u = u.integrate_plane(j).unwrap();
        }
        assert_eq!(u, F::one(n));
    }
    // c = 2 with pi dvol integrates to pi
    let v = mq_thom_form(1, &CartanConvention::integer()).integrate_plane(0).unwrap();
    assert_eq!(v, F::pi(1, 1));
}

#[test]
fn gaussian_moments() {
    assert_eq!(gaussian_moment(0, 0, 1), Some((rat_int(1), 0)));
    assert_eq!(gaussian_moment(2, 0, 1), Some((rat(1, 2), -1)));
    assert_eq!(gaussian_moment(2, 2, 2), Some((rat(1, 32), -2)));
    assert_eq!(gaussian_moment(1, 0, 1), None);
}

#[test]
fn restrict_drops_forms() {
    assert!(F::dcoord(1, 0).restrict_origin().terms.is_empty());
    assert_eq!(F::coord(1, 0).restrict_origin().terms.len(), 0);
}

#[test]
fn spin_thom_restricts_to_sigma() {
    let zo = 7;
    let u = elliptic_thom_form_spin(1, zo, 6, &conv());
    assert!(u.cartan_q(&conv()).unwrap().is_zero());
    let res = u.restrict_origin();
    let s = sigma_qexp(zo as usize, 6);
    for j in 1..zo as usize {
        // z^j of sigma/(2 pi i) is s_j (2 pi i)^{j-1}
        let got = res.coeff(-1, j as i32 - 1, &[j as u32]);
        let want = if j % 2 == 1 {
            s.coeff(j).scale_rational(&Rational::from_integer(num_bigint::BigInt::from(-4).pow(((j - 1) / 2) as u32)))
        } else {
            QExp::zero()
        };
        assert!(got.sub(&want).is_zero(), "z^{j}");
    }
    assert!(res.coeff(-1, 0, &[1]).is_one());
}

#[test]
fn complex_thom_matches_exact_spin() {
    let exact = elliptic_thom_form_spin(2, 5, 4, &conv());
    let cplx = elliptic_thom_form(ThomGroup::SpinEven, 2, 2, &[], 5, 4, &conv()).unwrap();
    assert_eq!(exact.terms().len(), cplx.terms().len());
    for (k, c) in exact.terms() {
        let d = c.map(|r| Complex64::from_rational(r)).sub(&cplx.terms()[k]);
        assert!(d.max_magnitude() < 1e-9, "{k:?}");
    }
}

#[test]
fn shifted_factor_matches_numeric_sigma() {
    let tau = Complex64::new(0.0, 1.0);
    let tp = TauPoint::new(tau).unwrap();
    let f = elliptic_thom_form(ThomGroup::SpinEven, 1, 0, &[(rat(1, 2), rat(1, 2))], 4, 12, &conv()).unwrap();
    let res = f.restrict_origin();
    let c = res.coeff(-1, -1, &[0]).eval_at_tau(tau) / PI;
    let s = Complex64::new(0.5, 0.0) - tau * 0.5;
    let want = sigma_product(&tp, s, 60).unwrap().value / Complex64::new(0.0, 2.0 * PI);
    assert!(want.norm() > 1e-3);
    assert!((c - want).norm() < 1e-8, "{c} vs {want}");
}

#[test]
fn upsilon_shifted_factor_matches_numeric() {
    let tau = Complex64::new(0.2, 1.1);
    let tp = TauPoint::new(tau).unwrap();
    let (h1, h2) = (rat(1, 3), rat(1, 4));
    let w = sigma_w_series_shifted(&h1, &h2, true, 3, 14).unwrap();
    let s = tau * -0.25 + 1.0 / 3.0;
    let want = ecw_core::theta::upsilon(&tp, s, 60).unwrap().value;
    assert!((w.coeff(0).eval_at_tau(tau) - want).norm() < 1e-8);
    // first derivative in z equals 2 pi i times the w^1 coefficient
    let h = 1e-5;
    let up = |z: Complex64| ecw_core::theta::upsilon(&tp, s + z, 60).unwrap().value;
    let deriv = (up(Complex64::new(h, 0.0)) - up(Complex64::new(-h, 0.0))) / (2.0 * h);
    let got = w.coeff(1).eval_at_tau(tau) * Complex64::new(0.0, 2.0 * PI);
    assert!((deriv - got).norm() < 1e-5 * got.norm().max(1.0));
}

#[test]
fn lattice_shift_rejected() {
    let e = elliptic_thom_form(ThomGroup::U, 2, 1, &[(rat_int(1), rat_int(0))], 3, 3, &conv()).unwrap_err();
    assert_eq!(e, CartanError::LatticeShift { plane: 1 });
}

#[test]
fn thom_form_weyl_invariance() {
    let shifts = [(rat(1, 2), rat(0, 1)), (rat(1, 3), rat(1, 2))];
    let swapped = [shifts[1].clone(), shifts[0].clone()];
    for group in [ThomGroup::U, ThomGroup::SpinEven] {
        let a = elliptic_thom_form(group, 4, 2, &shifts, 4, 3, &conv()).unwrap();
        let b = elliptic_thom_form(group, 4, 2, &swapped, 4, 3, &conv()).unwrap();
        assert_eq!(b, a.permute_planes(&[0, 1, 3, 2]).unwrap());
        assert_eq!(a, a.permute_planes(&[1, 0, 2, 3]).unwrap());
    }
}

#[test]
fn s2_examples() {
    let one = S2Section { borel_part: S2Form::constant(rat_int(1)), pole_values: [vec![rat_int(1)], vec![rat_int(1)]], shift: rat_int(0) };
    assert_eq!(s2_section_check(&one).unwrap(), S2Check { invariant: true, analytic: true, closed: true });

    let zh = S2Form::z().wedge(&S2Form::poly_h(&[rat_int(0), rat_int(1)]));
    let s = S2Section { borel_part: zh, pole_values: [vec![rat_int(0)], vec![rat_int(0)]], shift: rat_int(0) };
    let r = s2_section_check(&s).unwrap();
    assert!(!r.analytic);

    // adding Q(beta (1 - h^2) p(h) drot) keeps closedness and pole data
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let p: Vec<Rational> = (0..3).map(|_| rand_rat(&mut rng)).collect();
        let vanish = S2Form::poly_h(&[rat_int(1), rat_int(0), rat_int(-1)]).wedge(&S2Form::poly_h(&p));
        let prim = S2Form::beta(1).wedge(&vanish).wedge(&S2Form::drot());
        let exact = prim.cartan_q().unwrap();
        let sec = S2Section { borel_part: one.borel_part.add(&exact), pole_values: one.pole_values.clone(), shift: rat_int(0) };
        assert_eq!(s2_section_check(&sec).unwrap(), S2Check { invariant: true, analytic: true, closed: true });
    }
}

#[test]
fn s2_non_invariant() {
    let f = S2Form::term(S2Key { beta_pow: 0, lie: 0, h_pow: 1, mode: 1, ext: 0 }, rat_int(1));
    let s = S2Section { borel_part: f, pole_values: [vec![rat_int(1)], vec![rat_int(1)]], shift: rat_int(0) };
    let r = s2_section_check(&s).unwrap();
    assert!(!r.invariant && !r.closed);
    let bad = S2Section { borel_part: S2Form::<Rational>::zero(), pole_values: [vec![], vec![rat_int(1)]], shift: rat_int(0) };
    assert!(s2_section_check(&bad).is_err());
}
