use ecw_core::finite::*;
use ecw_core::qseries::{rat, rat_int};
use std::collections::BTreeSet;
use std::time::Instant;

fn corpus() -> Vec<(&'static str, FiniteGroup)> {
    ["trivial", "z2", "z3", "z4", "z5", "z6", "s3", "d4", "q8", "z2xz2", "a4", "d6", "z2xz6"]
        .into_iter()
        .map(|n| (n, builtin_group(n).unwrap()))
        .collect()
}

fn brute_pairs(g: &FiniteGroup) -> usize {
    let mut c = 0;
    for a in 0..g.order() {
        for b in 0..g.order() {
            if g.mul(a, b) == g.mul(b, a) {
                c += 1;
            }
        }
    }
    c
}

#[test]
fn corpus_orders() {
    let orders: Vec<usize> = corpus().iter().map(|(_, g)| g.order()).collect();
    assert_eq!(orders, vec![1, 2, 3, 4, 5, 6, 6, 8, 8, 4, 12, 12, 12]);
    assert!(!FiniteGroup::symmetric(3).commute(1, 2) || !FiniteGroup::symmetric(3).commute(1, 3));
}

#[test]
fn pair_counts() {
    assert_eq!(commuting_pairs(&FiniteGroup::cyclic(2)).len(), 4);
    assert_eq!(commuting_pairs(&FiniteGroup::symmetric(3)).len(), 18);
    assert_eq!(commuting_pairs(&FiniteGroup::quaternion()).len(), 40);
    for (name, g) in corpus() {
        let p = commuting_pairs(&g);
        assert_eq!(p.len(), brute_pairs(&g), "{name}");
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn json_roundtrip_and_rejection() {
    let g = FiniteGroup::quaternion();
    let back = FiniteGroup::from_json(&g.to_json()).unwrap();
    assert_eq!(back, g);
    assert!(FiniteGroup::from_json(r#"{"order":2,"mul":[[0,1],[1,1]]}"#).is_err());
    assert!(FiniteGroup::from_json(r#"{"order":3,"mul":[[0,1],[1,0]]}"#).is_err());
    // Z/3 with a broken row is non-associative or lacks inverses
    assert!(FiniteGroup::from_table(vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]], None).is_err());
}

#[test]
fn s_action_example() {
    // S = [[0,-1],[1,0]] under the left action sends (h1, h2) to (h2^{-1}, h1).
    let g = FiniteGroup::cyclic(5);
    let h = CommutingPair { h1: 1, h2: 2 };
    assert_eq!(sl2z_act(&g, &Sl2Z::S, h), CommutingPair { h1: 3, h2: 1 });
    // [[0,1],[-1,0]] is its inverse.
    let s_inv = Sl2Z::S.inverse();
    assert_eq!(sl2z_act(&g, &s_inv, h), CommutingPair { h1: 2, h2: 4 });
}

#[test]
fn left_action_and_commutation_exhaustive() {
    let t0 = Instant::now();
    for (name, g) in corpus() {
        let n = g.exponent() as i64;
        let pairs = commuting_pairs(&g);
        let gens = [Sl2Z::S, Sl2Z::T, Sl2Z::S.inverse(), Sl2Z::T.inverse()].map(|m| Sl2Mod::reduce(&m, n));
        for h in &pairs {
            for a in &gens {
                for b in &gens {
                    let lhs = sl2_act(&g, &a.mul(b), *h);
                    let rhs = sl2_act(&g, a, sl2_act(&g, b, *h));
                    assert_eq!(lhs, rhs, "{name} {h:?}");
                }
                for x in 0..g.order() {
                    assert_eq!(sl2_act(&g, a, conj_act(&g, x, *h)), conj_act(&g, x, sl2_act(&g, a, *h)), "{name}");
                }
            }
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 20.0);
}

/// Burnside count of conjugation orbits: (1/|G|) sum_x |fixed pairs of x|.
fn burnside_conj(g: &FiniteGroup) -> usize {
    let pairs = commuting_pairs(g);
    let fixed: usize = (0..g.order()).map(|x| pairs.iter().filter(|h| conj_act(g, x, **h) == **h).count()).sum();
    fixed / g.order()
}

#[test]
fn conjugation_orbits() {
    let s3 = FiniteGroup::symmetric(3);
    let r = orbit_decomposition(&s3, Action::Conj);
    assert_eq!(r.orbits.len(), 8);
    for (name, g) in corpus() {
        let r = orbit_decomposition(&g, Action::Conj);
        assert_eq!(r.orbits.len(), burnside_conj(&g), "{name}");
        assert_eq!(r.orbits.iter().map(|o| o.size).sum::<usize>(), r.pair_count);
        assert!(r.orbits.iter().all(|o| o.stabilizer.is_none()));
    }
}

#[test]
fn orbits_partition_and_stabilizers() {
    for (name, g) in corpus() {
        for action in [Action::Sl2, Action::Both] {
            let r = orbit_decomposition(&g, action);
            let all: BTreeSet<CommutingPair> = r.orbits.iter().flat_map(|o| o.pairs.iter().copied()).collect();
            assert_eq!(all.len(), r.pair_count, "{name}");
            let total = Sl2Mod::enumerate(r.modulus).len();
            for o in &r.orbits {
                let st = o.stabilizer.as_ref().unwrap();
                assert_eq!(st.order * st.index, total);
                if action == Action::Sl2 {
                    // orbit-stabilizer through SL2(Z/N)
                    assert_eq!(o.size * st.order, total, "{name} {:?}", o.representative);
                }
            }
        }
    }
}

#[test]
fn devoto_small_groups() {
    let t = devoto_report(&FiniteGroup::trivial());
    assert_eq!(t.orbits.len(), 1);
    assert_eq!(t.orbits[0].stabilizer.as_ref().unwrap().index, 1);

    let z2 = devoto_report(&FiniteGroup::cyclic(2));
    assert_eq!(z2.orbits.len(), 2);
    assert_eq!(z2.orbits[0].size, 1);
    assert_eq!(z2.orbits[0].stabilizer.as_ref().unwrap().order, 6);
    assert_eq!(z2.orbits[1].size, 3);
    let st = z2.orbits[1].stabilizer.as_ref().unwrap();
    assert_eq!((st.order, st.index), (2, 3));

    let z3 = devoto_report(&FiniteGroup::cyclic(3));
    let sizes: Vec<usize> = z3.orbits.iter().map(|o| o.size).collect();
    assert_eq!(sizes, vec![1, 8]);
    assert_eq!(z3.orbits[1].stabilizer.as_ref().unwrap().index, 8);
}

#[test]
fn zn_cocycle_examples() {
    let w = zn_cocycle(2, 1).unwrap();
    assert_eq!(*w.turns(1, 1, 1), rat(1, 2));
    assert!((w.value(1, 1, 1) + 1.0).norm() < 1e-15);
    assert_eq!(zn_cocycle(5, 0).unwrap(), Cocycle3::trivial(5));
    assert!(zn_cocycle(1, 1).is_err());
    for n in 2..=6 {
        let g = FiniteGroup::cyclic(n);
        for k in 0..n as i64 {
            let r = coboundary_check(&zn_cocycle(n, k).unwrap(), &g).unwrap();
            assert!(r.ok, "n={n} k={k}");
            assert_eq!(r.checked, n.pow(4));
        }
    }
}

#[test]
fn coboundary_negative_control() {
    let g = FiniteGroup::cyclic(3);
    let base = zn_cocycle(3, 1).unwrap();
    let bump = Cocycle3::from_fn(3, |a, b, c| if (a, b, c) == (1, 2, 1) { rat(1, 7) } else { rat_int(0) });
    let bad = base.mul(&bump);
    let r = coboundary_check(&bad, &g).unwrap();
    assert!(!r.ok);
    assert!(r.violation.is_some() && r.worst_residual > 0.1);
    assert!(matches!(VerifiedCocycle::new(bad.clone(), &g), Err(FiniteError::NotCocycle(_))));
    assert!(fq_cocycle_checked(&bad, &g, CommutingPair { h1: 0, h2: 0 }, 1).is_err());
    assert!(matches!(coboundary_check(&base, &FiniteGroup::cyclic(4)), Err(FiniteError::OrderMismatch { .. })));
}

#[test]
fn fq_cocycle_basics() {
    let g = FiniteGroup::cyclic(2);
    let l = VerifiedCocycle::new(zn_cocycle(2, 1).unwrap(), &g).unwrap();
    let h = CommutingPair { h1: 1, h2: 1 };
    let v = fq_cocycle(&l, &g, h, 1).unwrap();
    assert_eq!(v, fq_cocycle(&l, &g, h, 1).unwrap());
    // all six factors are l(1,1,1)
    assert_eq!(v, rat_int(0));
    let s3 = FiniteGroup::symmetric(3);
    let triv = VerifiedCocycle::new(Cocycle3::trivial(6), &s3).unwrap();
    for h in commuting_pairs(&s3) {
        for x in 0..6 {
            assert_eq!(fq_cocycle(&triv, &s3, h, x).unwrap(), rat_int(0));
        }
    }
    let q8 = FiniteGroup::quaternion();
    let l = VerifiedCocycle::new(zn_cocycle(2, 1).unwrap().pullback(&q8_abelianization_z2()), &q8).unwrap();
    for h in commuting_pairs(&q8) {
        assert_eq!(fq_cocycle(&l, &q8, h, q8.identity()).unwrap(), rat_int(0));
    }
    assert!(matches!(fq_cocycle(&l, &q8, CommutingPair { h1: 2, h2: 4 }, 0), Err(FiniteError::NotCommuting(_))));
}

/// `+-1, +-i -> 0`, `+-j, +-k -> 1`.
fn q8_abelianization_z2() -> Vec<usize> {
    vec![0, 0, 0, 0, 1, 1, 1, 1]
}

#[test]
fn descent_exhaustive() {
    let t0 = Instant::now();
    for n in 2..=6 {
        let g = FiniteGroup::cyclic(n);
        for k in 0..n as i64 {
            let l = VerifiedCocycle::new(zn_cocycle(n, k).unwrap(), &g).unwrap();
            let r = fq_descent_check(&l, &g);
            assert!(r.ok, "n={n} k={k} {:?}", r.violation);
        }
    }
    let q8 = FiniteGroup::quaternion();
    let phi = q8_abelianization_z2();
    assert!(q8.is_homomorphism_to(&FiniteGroup::cyclic(2), &phi));
    let l = VerifiedCocycle::new(zn_cocycle(2, 1).unwrap().pullback(&phi), &q8).unwrap();
    assert!(fq_descent_check(&l, &q8).ok);
    for (name, g) in corpus().into_iter().filter(|(_, g)| g.order() <= 8) {
        let l = VerifiedCocycle::new(Cocycle3::trivial(g.order()), &g).unwrap();
        assert!(fq_descent_check(&l, &g).ok, "{name}");
    }
    assert!(t0.elapsed().as_secs_f64() < 20.0);
}

#[test]
fn descent_stable_under_coboundaries() {
    for (name, g) in corpus().into_iter().filter(|(_, g)| g.order() >= 2) {
        for seed in 0..3 {
            let dm = random_coboundary(&g, 12, seed);
            assert!(coboundary_check(&dm, &g).unwrap().ok, "{name}");
            let base = if name.starts_with('z') && !name.contains('x') {
                zn_cocycle(g.order(), 1).unwrap()
            } else {
                Cocycle3::trivial(g.order())
            };
            let l = VerifiedCocycle::new(base.mul(&dm), &g).unwrap();
            assert!(fq_descent_check(&l, &g).ok, "{name} seed {seed}");
        }
    }
}

#[test]
fn exponent_and_torsion() {
    assert_eq!(FiniteGroup::quaternion().exponent(), 4);
    assert_eq!(FiniteGroup::symmetric(3).exponent(), 6);
    assert_eq!(FiniteGroup::alternating4().exponent(), 6);
    assert_eq!(cochain_torsion(&zn_cocycle(6, 2).unwrap()), 3.into());
    assert_eq!(Sl2Mod::enumerate(2).len(), 6);
    assert_eq!(Sl2Mod::enumerate(4).len(), 48);
}
