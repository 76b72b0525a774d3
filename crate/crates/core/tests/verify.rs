use ecw_core::finite::builtin_group;
use ecw_core::verify::*;

fn show(r: &SuiteReport) {
    for c in &r.checks {
        eprintln!("{:<60} {:>10.3e} <= {:>8.1e} {}", c.name, c.residual, c.threshold, if c.pass { "ok" } else { "FAIL" });
    }
}

#[test]
fn every_suite_passes() {
    for s in Suite::PARTS {
        let r = run_suite(s, &SuiteParams::default());
        show(&r);
        assert!(r.pass, "{s}: {:?}", r.failures().collect::<Vec<_>>());
        assert!(r.checks.windows(2).all(|w| w[0].name < w[1].name));
    }
}

#[test]
fn suite_names_parse() {
    assert_eq!("all".parse::<Suite>(), Ok(Suite::All));
    assert_eq!("thom".parse::<Suite>(), Ok(Suite::Thom));
    assert!("bogus".parse::<Suite>().is_err());
}

#[test]
fn finite_with_group_and_cocycle() {
    let p = SuiteParams {
        group: Some(GroupChoice { label: "builtin:z4".into(), group: builtin_group("z4").unwrap() }),
        cocycle: Some((4, 1)),
        ..SuiteParams::default()
    };
    let r = run_suite(Suite::Finite, &p);
    show(&r);
    assert!(r.pass);
    assert_eq!(r.checks.len(), 4);
    let bad = SuiteParams { cocycle: Some((3, 1)), ..p };
    assert!(!run_suite(Suite::Finite, &bad).pass);
}

#[test]
fn tight_threshold_fails() {
    let mut p = SuiteParams::default();
    p.tolerances.sigma_cross = 0.0;
    p.tolerances.sigma_laws = 0.0;
    let r = run_suite(Suite::Theta, &p);
    assert!(!r.pass);
    assert!(r.failures().all(|c| c.name.starts_with("theta.sigma")));
}

#[test]
fn deterministic_json() {
    let p = SuiteParams { samples: 20, ..SuiteParams::default() };
    let mut a = run_suite(Suite::Cubical, &p);
    let mut b = run_suite(Suite::Cubical, &p);
    a.strip_timing();
    b.strip_timing();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
