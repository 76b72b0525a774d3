use ecw_core::fgl::*;
use ecw_core::qseries::{rat, rat_int, MultiSeries, PowerSeries, Rational};
use ecw_core::theta::TauPoint;
use num_complex::Complex64;
use std::time::Instant;

#[test]
fn sigma_law_is_exact() {
    let t = Instant::now();
    let law = fgl_from_coordinate(&sigma_coordinate(10, 6), 10).unwrap();
    let r = fgl_check(&law).unwrap();
    assert_eq!(r.max(), 0.0, "{r:?}");
    eprintln!("sigma check order 10: {:?}", t.elapsed());
}

#[test]
fn upsilon_law_is_exact() {
    let law = fgl_from_coordinate(&upsilon_coordinate(8, 5), 8).unwrap();
    assert_eq!(fgl_check(&law).unwrap().max(), 0.0);
}

#[test]
fn sigma_addition_oracle() {
    let t = Instant::now();
    let law = fgl_from_coordinate(&sigma_coordinate(12, 8), 12).unwrap();
    let tp = TauPoint::new(Complex64::new(0.0, 1.0)).unwrap();
    let r = sigma_addition_residual(&law, &tp, Complex64::new(0.05, 0.0), Complex64::new(0.07, 0.0), 60).unwrap();
    eprintln!("oracle residual {r:e} in {:?}", t.elapsed());
    assert!(r < 1e-6);
}

#[test]
fn sigma_law_cubic_coefficient() {
    // f(w) = w + a w^3 + ... gives F = x + y + 3a(x^2 y + x y^2) + ..., and
    // sigma = w exp(e_2 w^2 / 24 + ...) has a = e_2 / 24.
    let law = fgl_from_coordinate(&sigma_coordinate(6, 8), 6).unwrap();
    for (k, _) in law.f.terms() {
        assert_eq!((k[0] + k[1]) % 2, 1, "even degree term {k:?}");
    }
    let e2 = ecw_core::modular::eisenstein_qexp(2, 8).unwrap().qexp;
    let want = e2.scale_rational(&rat(1, 8));
    assert_eq!(law.f.coeff(&[2, 1]), want);
    assert_eq!(law.f.coeff(&[1, 2]), want);
}

#[test]
fn conjugation_by_polynomial() {
    // g(x) = x + 2x^2 - x^3/3
    let g = PowerSeries::new(vec![rat_int(0), rat_int(1), rat_int(2), rat(-1, 3), rat_int(0), rat_int(0), rat_int(0), rat_int(0)]);
    let r = conjugation_residual(&multiplicative_coordinate(8), &g, 8).unwrap();
    assert_eq!(r, 0.0);
    let f = PowerSeries::<Rational>::var(8);
    assert_eq!(conjugation_residual(&f, &g, 8).unwrap(), 0.0);
}

#[test]
fn additive_from_identity() {
    let law = fgl_from_coordinate(&additive_coordinate(12), 12).unwrap();
    assert_eq!(law.f, MultiSeries::var(2, 12, 0).add(&MultiSeries::var(2, 12, 1)));
}

#[test]
fn cubical_suite_both_taus() {
    for tau in [Complex64::new(0.0, 1.0), Complex64::new(0.3, 1.1)] {
        let t = Instant::now();
        let r = cubical_verify(tau, 100, 42, 60).unwrap();
        eprintln!("{r:?} in {:?}", t.elapsed());
        assert!(r.max_residual() < 1e-7, "{r:?}");
    }
}

#[test]
fn cubical_sl2_residual_converges() {
    let tau = Complex64::new(0.1, 0.8);
    let res: Vec<f64> = [1, 2, 4, 8].iter().map(|&n| cubical_verify(tau, 10, 3, n).unwrap().sl2_s).collect();
    for w in res.windows(2) {
        assert!(w[1] < w[0] * 0.5 || w[1] < 1e-13, "{res:?}");
    }
    assert!(res[0] > 1e-6, "truncation is visible at one term: {res:?}");
}

#[test]
fn cubical_point_examples() {
    let tp = TauPoint::new(Complex64::new(0.0, 1.0)).unwrap();
    let s = |x, y, z| cubical_s(&CubicalSample { tau: tp, x, y, z, variant: Variant::Sigma }, 60).unwrap();
    let e = Complex64::new(1e-4, 0.0);
    assert!((s(e, e, e) - 1.0).norm() < 1e-6);
    let w = Complex64::new(0.1, 0.1);
    let lhs = s(w + w, w, w) * s(w, w, w);
    let rhs = s(w, w + w, w) * s(w, w, w);
    assert!((lhs / rhs - 1.0).norm() < 1e-9);
    let (x, y) = (Complex64::new(0.2, 0.0), Complex64::new(0.0, 0.15));
    assert!((s(x, y, -x - y) - 1.0).norm() < 1e-8);
    let (a, b, c) = (Complex64::new(0.13, 0.2), Complex64::new(-0.3, 0.05), Complex64::new(0.21, -0.17));
    assert!((s(a, b, c) - s(c, a, b)).norm() < 1e-12);
    let u = cubical_s(&CubicalSample { tau: tp, x: a, y: b, z: c, variant: Variant::Upsilon }, 60).unwrap();
    assert!((u - s(a, b, c)).norm() < 1e-10);
}
