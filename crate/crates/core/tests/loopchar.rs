use ecw_core::loopchar::*;
use ecw_core::qseries::{qexp_at_y_one, rat, rat_int, rat_to_f64, QExp, Rational, Ring, YPoly};
use ecw_core::theta::{sigma_product, upsilon, TauPoint};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tp(re: f64, im: f64) -> TauPoint {
    TauPoint::new(c64(re, im)).unwrap()
}

fn eval_ypoly(p: &YPoly, z: Complex64) -> Complex64 {
    p.terms().iter().map(|(t, c)| (c64(0.0, PI * t[0] as f64) * z).exp() * rat_to_f64(c)).sum()
}

fn eval_char(chi: &QExp<YPoly>, t: &TauPoint, z: Complex64) -> Complex64 {
    chi.terms().map(|(n, p)| eval_ypoly(p, z) * t.q().powi(n as i32)).sum()
}

fn eta_sq(t: &TauPoint, terms: i32) -> Complex64 {
    (1..=terms).map(|n| (c64(1.0, 0.0) - t.q().powi(n)).powi(2)).product()
}

#[test]
fn spin2_character_low_terms() {
    let chi = char_spin2_qexp(6);
    let half = |t: i32| YPoly::y_pow(1, 0, t);
    assert_eq!(chi.coeff(0).unwrap(), half(1).sub(&half(-1)));
    // -(y^{1/2} - y^{-1/2})(y + y^{-1}), odd under y -> 1/y
    let want = half(3).neg().add(&half(1)).sub(&half(-1)).add(&half(-3));
    assert_eq!(chi.coeff(1).unwrap(), want);
    assert!(qexp_at_y_one(&chi).terms().all(|(_, c)| *c == rat_int(0)));
    assert_eq!(chi.order(), Some(6));
}

#[test]
fn lu1_character_relation() {
    let spin = char_spin2_qexp(8);
    let lu1 = char_lu1_qexp(8);
    assert_eq!(lu1.coeff(0).unwrap(), YPoly::one().sub(&YPoly::y_pow(1, 0, 2)));
    let scaled = spin.map(|p| p.mul(&YPoly::y_pow(1, 0, 1)).neg());
    assert_eq!(scaled, lu1);
    assert!(qexp_at_y_one(&lu1).terms().all(|(_, c)| *c == rat_int(0)));
}

#[test]
fn characters_evaluate_to_theta_functions() {
    let t = tp(0.1, 1.3);
    let spin = char_spin2_qexp(30);
    let lu1 = char_lu1_qexp(30);
    for z in [c64(0.1, 0.0), c64(0.3, 0.1), c64(-0.2, 0.05)] {
        let e = eta_sq(&t, 60);
        let s = sigma_product(&t, z, 60).unwrap().value;
        let u = upsilon(&t, z, 60).unwrap().value;
        assert!((eval_char(&spin, &t, z) - s * e).norm() < 1e-12);
        assert!((eval_char(&lu1, &t, z) - u * e).norm() < 1e-12);
    }
}

#[test]
fn euler_sections() {
    let t = tp(0.05, 1.1);
    let z = c64(0.17, 0.08);
    let spin1 = GroupTag::new(Family::SpinEven, 1).unwrap();
    let v = euler_section(&spin1, &t, &[z], 40).unwrap();
    assert_eq!(v.value, sigma_product(&t, z, 40).unwrap().value);
    assert_eq!((v.degree, v.beta_power), (2, -1));
    for fam in [Family::U, Family::SpinEven] {
        let g = GroupTag::new(fam, 3).unwrap();
        let w = euler_section(&g, &t, &[z, c64(0.0, 0.0), -z * 0.5], 40).unwrap();
        assert_eq!(w.value.norm(), 0.0);
        assert_eq!((w.degree, w.beta_power), (6, -3));
    }
    let u2 = GroupTag::new(Family::U, 2).unwrap();
    let p = euler_section(&u2, &t, &[z, -z], 60).unwrap().value;
    let s = sigma_product(&t, z, 60).unwrap().value;
    assert!((p + s * s).norm() < 1e-10);
    let su2 = GroupTag::new(Family::SU, 2).unwrap();
    assert!(euler_section(&su2, &t, &[z, -z], 40).is_ok());
    assert!(matches!(euler_section(&su2, &t, &[z, z], 40), Err(LoopError::NotTraceless(_))));
    assert!(matches!(euler_section(&u2, &t, &[z], 40), Err(LoopError::WrongLength { expected: 2, got: 1 })));
    assert_eq!(GroupTag::new(Family::U, 0).unwrap_err(), LoopError::ZeroRank);
}

#[test]
fn euler_section_symmetries() {
    let t = tp(-0.2, 1.25);
    let spin = GroupTag::new(Family::SpinEven, 3).unwrap();
    let u = GroupTag::new(Family::U, 3).unwrap();
    let z = [c64(0.11, 0.02), c64(-0.27, 0.1), c64(0.35, -0.06)];
    for g in [spin, u] {
        let a = euler_section(&g, &t, &z, 40).unwrap().value;
        let b = euler_section(&g, &t, &[z[2], z[0], z[1]], 40).unwrap().value;
        assert_eq!(a, b);
    }
    let a = euler_section(&spin, &t, &z, 40).unwrap().value;
    let flipped = euler_section(&spin, &t, &[z[0], -z[1], z[2]], 40).unwrap().value;
    assert_eq!(flipped, -a);
}

#[test]
fn euler_section_vanishes_only_at_lattice() {
    let t = tp(0.0, 1.0);
    let u1 = GroupTag::new(Family::U, 1).unwrap();
    let mut floor = f64::INFINITY;
    for i in 0..40 {
        for j in 0..40 {
            let z = t.tau() * (j as f64 / 40.0) + i as f64 / 40.0;
            let near = [c64(0.0, 0.0), c64(1.0, 0.0), t.tau(), t.tau() + 1.0].iter().any(|c| (z - c).norm() < 0.1);
            if !near {
                floor = floor.min(euler_section(&u1, &t, &[z], 40).unwrap().value.norm());
            }
        }
    }
    assert!(floor > 1e-2);
}

// f(z + m + n tau) / f(z) computed from the one-variable sigma laws
fn spin_oracle(t: &TauPoint, z: &[Complex64], m: &[i64], n: &[i64]) -> Complex64 {
    let mut ratio = c64(1.0, 0.0);
    for j in 0..z.len() {
        let sign = if (m[j] + n[j]).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let nj = n[j] as f64;
        ratio *= (c64(0.0, -PI) * (z[j] * 2.0 * nj + t.tau() * nj * nj)).exp() * sign;
    }
    ratio
}

#[test]
fn looijenga_examples() {
    let t = tp(0.0, 1.0);
    let spin4 = GroupTag::new(Family::SpinEven, 2).unwrap();
    let id = Level::identity(2);
    let z = [c64(0.1, 0.0), c64(0.2, 0.0)];
    assert!(looijenga_shift_check(&spin4, &id, &t, &z, &[0, 0], &[1, 1], 60).unwrap() < 1e-8);
    assert!(looijenga_shift_check(&spin4, &id, &t, &z, &[1, 1], &[0, 0], 60).unwrap() < 1e-9);
    assert_eq!(looijenga_shift_check(&spin4, &id, &t, &z, &[0, 0], &[0, 0], 60).unwrap(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let t = tp(rng.gen_range(-0.5..0.5), rng.gen_range(0.9..1.6));
        let z: Vec<Complex64> = (0..2).map(|_| c64(rng.gen_range(-0.4..0.4), rng.gen_range(-0.2..0.2))).collect();
        let a: i64 = rng.gen_range(-2..=2);
        let m = [a, rng.gen_range(-1..=1) * 2 - a];
        let b: i64 = rng.gen_range(-1..=1);
        let n = [b, if rng.gen_bool(0.5) { b } else { -b }];
        let r = looijenga_shift_check(&spin4, &id, &t, &z, &m, &n, 60).unwrap();
        assert!(r < 1e-8, "m={m:?} n={n:?}: {r:e}");
        let shifted: Vec<Complex64> = (0..2).map(|j| z[j] + m[j] as f64 + t.tau() * n[j] as f64).collect();
        let lhs: Complex64 = shifted.iter().map(|&w| sigma_product(&t, w, 60).unwrap().value).product();
        let f: Complex64 = z.iter().map(|&w| sigma_product(&t, w, 60).unwrap().value).product();
        let rhs = spin_oracle(&t, &z, &m, &n) * f;
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-8);
    }
    let su2 = GroupTag::new(Family::SU, 2).unwrap();
    let gram = Level { gram: vec![vec![2, -1], vec![-1, 2]] };
    let zs = [c64(0.13, 0.04), c64(-0.13, -0.04)];
    assert!(looijenga_shift_check(&su2, &id, &t, &zs, &[1, -1], &[1, -1], 60).unwrap() < 1e-8);
    assert!(looijenga_shift_check(&su2, &gram, &t, &zs, &[1, -1], &[0, 0], 60).unwrap() < 1e-9);
}

#[test]
fn looijenga_errors() {
    let t = tp(0.0, 1.0);
    let spin4 = GroupTag::new(Family::SpinEven, 2).unwrap();
    let z = [c64(0.1, 0.0), c64(0.2, 0.0)];
    let id = Level::identity(2);
    assert_eq!(
        looijenga_shift_check(&spin4, &id, &t, &z, &[1, 0], &[0, 0], 40).unwrap_err(),
        LoopError::NotInLattice(vec![1, 0])
    );
    let su3 = GroupTag::new(Family::SU, 3).unwrap();
    let z3 = [c64(0.1, 0.0), c64(0.2, 0.0), c64(-0.3, 0.0)];
    assert!(matches!(
        looijenga_shift_check(&su3, &Level::identity(3), &t, &z3, &[1, 0, 0], &[0, 0, 0], 40),
        Err(LoopError::NotInLattice(_))
    ));
    let bad = Level { gram: vec![vec![1, 2], vec![0, 1]] };
    assert!(matches!(looijenga_shift_check(&spin4, &bad, &t, &z, &[0, 0], &[0, 0], 40), Err(LoopError::InvalidLevel(_))));
    let indefinite = Level { gram: vec![vec![1, 0], vec![0, -1]] };
    assert!(indefinite.validate(&spin4).is_err());
    assert!(Level { gram: vec![vec![3]] }.validate(&GroupTag::new(Family::U, 1).unwrap()).is_err());
}

#[test]
fn anomaly_examples() {
    let one = modular_anomaly(&[vec![rat_int(1)]], 4, 8);
    assert!(one.pure_e2 && !one.is_zero);
    assert_eq!(one.quadratic.len(), 1);
    // roots z and -z in one variable
    let pair = modular_anomaly(&[vec![rat_int(1)], vec![rat_int(-1)]], 4, 8);
    assert_eq!(pair.quadratic.get(&vec![2u32]).map(String::as_str), Some("-1/12"));
    assert_eq!(pair.lambda.as_deref(), Some("-1/24"));
    assert!(!pair.is_zero);
    // two independent roots: anomaly = -(x^2 + y^2) / 24, vanishing with p_1
    let two = modular_anomaly(&[vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(1)]], 4, 8);
    assert!(two.vanishes_on_p1_locus);
    assert_eq!(two.quadratic.get(&vec![1u32, 1]), None);
    let lam: Rational = two.lambda.unwrap().parse().unwrap();
    assert_eq!(lam, rat(-1, 24));
    let none = modular_anomaly(&[], 4, 8);
    assert!(none.is_zero);
}
