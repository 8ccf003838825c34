//! Acceptance suite: ten exact criteria, each reported on one line.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::{ring, Oracle};
use ringlab::catalog::default_catalog;
use ringlab::classify::DEFAULT_CANCELLATION_BOUND;
use ringlab::{CancellationOutcome, FiniteRing, Suite, SuiteStatus};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn catalog_rings() -> Vec<std::sync::Arc<FiniteRing>> {
    default_catalog()
        .iter()
        .map(|e| e.load().expect("catalog entry verifies"))
        .collect()
}

fn example_ring_witness() -> Outcome {
    let r = ring("T2:Zn:3");
    let o = Oracle::new(&r);
    let e = r
        .parse_element("[[1,1],[0,0]]")
        .map_err(|e| e.to_string())?;
    let f = r
        .parse_element("[[0,1],[0,1]]")
        .map_err(|e| e.to_string())?;
    ensure!(r.size() == 27, "size {}", r.size());
    for (name, x) in [("e", e), ("f", f)] {
        ensure!(
            r.is_idempotent(x) && r.mul(x, x) == x,
            "{name} not idempotent"
        );
        ensure!(r.is_regular(x) && o.regular[x], "{name} not regular");
    }
    let ef = r.mul(e, f);
    ensure!(r.render(ef) == "[[0,2],[0,0]]", "ef = {}", r.render(ef));
    ensure!(
        r.regular_witness(ef).is_none() && !o.regular[ef],
        "ef is regular"
    );
    let sandwich: Vec<_> = r.elements().map(|s| r.mul3(ef, s, ef)).collect();
    ensure!(sandwich.iter().all(|&x| x == r.zero()), "(ef)R(ef) != 0");
    ensure!(
        r.special_clean_witnesses(ef).is_empty() && o.special_clean(ef).is_empty(),
        "ef is special clean"
    );
    ensure!(r.has_stable_range_1().holds, "library: SR1 fails");
    ensure!(o.stable_range_1(), "oracle: SR1 fails");
    Ok(format!(
        "ef = {}, (ef)R(ef) = {{0}}, sr1 = true",
        r.render(ef)
    ))
}

fn special_clean_implies_unit_regular() -> Outcome {
    let mut checked = 0;
    for r in catalog_rings() {
        let o = Oracle::new(&r);
        for a in r.elements() {
            let lib: Vec<_> = r
                .special_clean_witnesses(a)
                .iter()
                .map(|d| d.idem)
                .collect();
            ensure!(
                lib == o.special_clean(a),
                "{} {a}: special clean sets differ",
                r.spec()
            );
            for d in r.special_clean_witnesses(a) {
                let u_inv = r
                    .unit_inverse_from_special_clean(&d)
                    .map_err(|e| e.to_string())?;
                ensure!(
                    o.inverse[d.unit] == Some(u_inv),
                    "{} {a}: wrong inverse",
                    r.spec()
                );
                ensure!(
                    r.mul(r.mul(a, u_inv), a) == a,
                    "{} {a}: a u^-1 a != a",
                    r.spec()
                );
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} decompositions replayed"))
}

fn ssp_equivalence() -> Outcome {
    let mut rings = Vec::new();
    for r in catalog_rings() {
        let o = Oracle::new(&r);
        let ssp = r.is_ssp().holds;
        ensure!(ssp == o.ssp(), "{}: ssp disagrees with oracle", r.spec());
        if !ssp {
            continue;
        }
        let rep = ringlab::theorem_suite(r.clone(), Suite::T24).map_err(|e| e.to_string())?;
        ensure!(
            rep.status == SuiteStatus::Holds,
            "{}: {:?}",
            r.spec(),
            rep.conditions
        );
        let c = |k: &str| rep.conditions[k];
        let regular_special = o
            .regular_elements()
            .iter()
            .all(|&a| !o.special_clean(a).is_empty());
        ensure!(
            c("1") == o.ic() && c("2") == o.idem_sr() && c("3") == regular_special,
            "{}: conditions disagree with oracle",
            r.spec()
        );
        rings.push(r.spec().to_string());
    }
    for must in ["Zn:1", "Zn:12", "M2:Zn:2", "M2:Zn:3", "prod:Zn:2+Zn:3"] {
        ensure!(rings.iter().any(|s| s == must), "{must} not covered");
    }
    Ok(format!(
        "{} SSP rings, all three conditions agree",
        rings.len()
    ))
}

fn constructive_matches_oracle() -> Outcome {
    let mut pairs = 0;
    for spec in ["M2:Zn:2", "Zn:4", "Zn:6", "Zn:8", "Zn:9", "Zn:12"] {
        let r = ring(spec);
        let o = Oracle::new(&r);
        let reg = o.regular_elements();
        for &a in &reg {
            for &b in &reg {
                if !o.left_unimodular(a, b) {
                    continue;
                }
                let t = r
                    .solve_unimodular(a, b)
                    .map_err(|e| format!("{spec} ({a},{b}): {e}"))?;
                let report = r.verify_trace(&t);
                ensure!(report.passed, "{spec} ({a},{b}): {:?}", report.failed());
                ensure!(
                    o.idem_sr_set(a, b).contains(&t.idempotent),
                    "{spec} ({a},{b}): e = {} outside oracle set",
                    t.idempotent
                );
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs constructed and verified"))
}

fn products_of_regulars() -> Outcome {
    for r in catalog_rings() {
        let o = Oracle::new(&r);
        let t29 = ringlab::theorem_suite(r.clone(), Suite::T29).map_err(|e| e.to_string())?;
        let c210 = ringlab::theorem_suite(r.clone(), Suite::C210).map_err(|e| e.to_string())?;
        ensure!(
            t29.status == SuiteStatus::Holds,
            "{}: T2.9 {:?}",
            r.spec(),
            t29.conditions
        );
        ensure!(
            c210.status == SuiteStatus::Holds,
            "{}: C2.10 {:?}",
            r.spec(),
            c210.conditions
        );
        let prods = o.products_of_two_regulars();
        let ur = prods.iter().all(|&x| o.unit_regular(x));
        let sc = prods.iter().all(|&x| !o.special_clean(x).is_empty());
        let lhs = o.ssp() && o.ic();
        ensure!(
            t29.conditions["1"] == lhs && t29.conditions["2"] == ur && t29.conditions["3"] == sc,
            "{}: T2.9 disagrees with oracle",
            r.spec()
        );
    }
    let r = ring("T2:Zn:3");
    let o = Oracle::new(&r);
    let ef = r.mul(
        r.parse_element("[[1,1],[0,0]]").unwrap(),
        r.parse_element("[[0,1],[0,1]]").unwrap(),
    );
    ensure!(
        !o.unit_regular(ef) && o.special_clean(ef).is_empty(),
        "ef is not a counterexample"
    );
    let t29 = ringlab::theorem_suite(r, Suite::T29).map_err(|e| e.to_string())?;
    ensure!(
        t29.conditions.values().all(|&v| !v),
        "T2:Zn:3 conditions not all false"
    );
    Ok("all catalog rings agree at arities 2, 3, 4; T2:Zn:3 all false".into())
}

fn unit_regular_rings_special_clean() -> Outcome {
    for spec in ["M2:Zn:2", "M2:Zn:3"] {
        let r = ring(spec);
        let o = Oracle::new(&r);
        ensure!(
            (0..o.n).all(|a| o.unit_regular(a)),
            "{spec} not unit-regular"
        );
        ensure!(
            (0..o.n).all(|a| !o.special_clean(a).is_empty()),
            "{spec}: oracle finds a non special clean element"
        );
        ensure!(
            r.every_element_special_clean().holds,
            "{spec}: library disagrees"
        );
    }
    Ok("M2:Zn:2 and M2:Zn:3 every element special clean".into())
}

fn abelian_uniqueness() -> Outcome {
    let mut counted = 0;
    for n in [4, 6, 8, 9, 12] {
        let r = ring(&format!("Zn:{n}"));
        let o = Oracle::new(&r);
        ensure!(o.abelian(), "Zn:{n} not abelian");
        for a in o.regular_elements() {
            let ws = o.special_clean(a);
            ensure!(ws.len() == 1, "Zn:{n} {a}: {} decompositions", ws.len());
            let d = r
                .unique_special_clean_abelian(a)
                .map_err(|e| e.to_string())?;
            ensure!(d.idem == ws[0], "Zn:{n} {a}: library picked {}", d.idem);
            counted += 1;
        }
    }
    let z6 = ring("Zn:6");
    let d = z6
        .unique_special_clean_abelian(3)
        .map_err(|e| e.to_string())?;
    ensure!((d.idem, d.unit) == (4, 5), "3 = {} + {}", d.idem, d.unit);
    Ok(format!(
        "{counted} regular elements, exactly one decomposition each; 3 = 4 + 5 in Zn:6"
    ))
}

fn one_sided_variants() -> Outcome {
    let mut rings = 0;
    for r in catalog_rings() {
        if !(r.is_ssp().holds && r.is_ic().holds) {
            continue;
        }
        let v = r.one_sided_variants().map_err(|e| e.to_string())?;
        ensure!(
            v.annihilator.holds && v.opposite.holds,
            "{}: variant fails",
            r.spec()
        );
        let o = Oracle::new(&r);
        let reg = o.regular_elements();
        let op = r.opposite();
        let mut right_pairs = 0;
        for &a in &reg {
            for &b in &reg {
                if o.right_annihilators_meet_trivially(a, b) {
                    ensure!(
                        !o.idem_sr_set(a, b).is_empty(),
                        "{} ({a},{b}): annihilator form",
                        r.spec()
                    );
                }
                if o.right_unimodular(a, b) {
                    right_pairs += 1;
                    let e = r
                        .right_sided_witness(&op, a, b)
                        .ok_or_else(|| format!("{} ({a},{b}): no opposite witness", r.spec()))?;
                    ensure!(
                        o.idem_sr_left_set(a, b).contains(&e),
                        "{} ({a},{b}): translated witness {e} fails in R",
                        r.spec()
                    );
                }
            }
        }
        ensure!(
            v.translated_checks == right_pairs,
            "{}: translated {} of {right_pairs}",
            r.spec(),
            v.translated_checks
        );
        rings += 1;
    }
    Ok(format!("{rings} SSP+IC rings, both variants hold"))
}

fn cancellation_consistency() -> Outcome {
    let mut rings = 0;
    for r in catalog_rings() {
        if r.size() > DEFAULT_CANCELLATION_BOUND {
            continue;
        }
        let outcome = r.cancellation_check().map_err(|e| e.to_string())?;
        let CancellationOutcome::Checked(v) = outcome else {
            return Err(format!("{}: skipped", r.spec()));
        };
        let o = Oracle::new(&r);
        ensure!(
            v.holds == r.is_ic().holds && v.holds == o.ic(),
            "{}: cancellation vs IC",
            r.spec()
        );
        rings += 1;
    }
    Ok(format!(
        "{rings} rings of size <= {DEFAULT_CANCELLATION_BOUND} agree"
    ))
}

fn deterministic_reports() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = dir.path().join("cache.json");
    let run = || -> Result<String, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_ringlab"))
            .args(["verify", "--suite", "all", "--format", "json", "--cache"])
            .arg(&cache)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.code() == Some(0), "exit {:?}", out.status.code());
        let mut v: serde_json::Value =
            serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        v.as_object_mut().unwrap().remove("timing");
        Ok(serde_json::to_string_pretty(&v).unwrap())
    };
    let cold = run()?;
    let warm = run()?;
    ensure!(cold == warm, "cold and cached reports differ");
    let uncached = Command::new(env!("CARGO_BIN_EXE_ringlab"))
        .args(["verify", "--suite", "all", "--format", "json", "--no-cache"])
        .output()
        .map_err(|e| e.to_string())?;
    let mut v: serde_json::Value =
        serde_json::from_slice(&uncached.stdout).map_err(|e| e.to_string())?;
    v.as_object_mut().unwrap().remove("timing");
    v["command"] = serde_json::from_str::<serde_json::Value>(&cold).unwrap()["command"].clone();
    ensure!(
        serde_json::to_string_pretty(&v).unwrap() == cold,
        "uncached report differs"
    );
    Ok(format!("{} bytes identical across runs", cold.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "example ring witness",
            example_ring_witness,
            Duration::from_secs(5),
        ),
        (
            "special clean implies unit-regular",
            special_clean_implies_unit_regular,
            Duration::from_secs(60),
        ),
        (
            "SSP equivalence of three conditions",
            ssp_equivalence,
            Duration::from_secs(600),
        ),
        (
            "construction vs brute force",
            constructive_matches_oracle,
            Duration::from_secs(300),
        ),
        (
            "products of regular elements",
            products_of_regulars,
            Duration::from_secs(600),
        ),
        (
            "unit-regular rings are special clean",
            unit_regular_rings_special_clean,
            Duration::from_secs(300),
        ),
        (
            "uniqueness in abelian rings",
            abelian_uniqueness,
            Duration::from_secs(10),
        ),
        (
            "annihilator and one-sided variants",
            one_sided_variants,
            Duration::from_secs(600),
        ),
        (
            "cancellation vs IC",
            cancellation_consistency,
            Duration::from_secs(300),
        ),
        (
            "deterministic reports",
            deterministic_reports,
            Duration::from_secs(600),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
