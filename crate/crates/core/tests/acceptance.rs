//! Acceptance criteria, one line each. Every verdict is an exact-zero test;
//! the wall time of each criterion is printed next to its budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use envelope::contract::{contract_algebra, contracted_su3, su3_spec};
use envelope::dsl;
use envelope::lie::jacobi_defect;
use envelope::realize::poisson_bracket;
use envelope::realize::{Key, PhaseElement};
use envelope::suite::{run_mutations, run_suite, Evaluator, Registry, RepairOutcome, RunOptions, Status, SuiteReport};
use envelope::uea::{normal_form, normal_form_with, RawSum, Strategy};
use envelope::{su3, Algebra, EAElement, Scalar};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Verdict {
    Holds(String),
    /// The criterion fails as printed, and every failure is pinned to a
    /// misprint by a variant that holds.
    Misprinted(String),
}

type Outcome = Result<Verdict, String>;

fn holds(detail: impl Into<String>) -> Outcome {
    Ok(Verdict::Holds(detail.into()))
}

fn report(group: &str, oracle: bool) -> Result<SuiteReport, String> {
    let opts = RunOptions { timings: false, repair: true, oracle };
    run_suite(Registry::builtin(), group, &opts).map_err(|e| e.to_string())
}

fn status<'a>(r: &'a SuiteReport, id: &str) -> Result<&'a Status, String> {
    r.get(id).map(|c| &c.status).ok_or_else(|| format!("{id} missing from the report"))
}

/// Every listed check must PASS.
fn all_pass(r: &SuiteReport, ids: &[String]) -> Result<(), String> {
    let bad: Vec<String> = ids
        .iter()
        .filter_map(|id| match status(r, id) {
            Ok(Status::Pass) => None,
            Ok(s) => Some(format!("{id} {s}")),
            Err(e) => Some(e),
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad.join("; "))
    }
}

fn ids(prefix: &str, names: &[&str]) -> Vec<String> {
    names.iter().map(|n| format!("{prefix}.{n}")).collect()
}

/// A printed form that fails is acceptable when it is reported with an exact
/// residual and a variant or repair that does hold.
fn diagnosed(r: &SuiteReport, id: &str) -> Result<String, String> {
    let c = r.get(id).ok_or_else(|| format!("{id} missing from the report"))?;
    match c.status {
        Status::Pass => Ok(format!("{id} PASS")),
        Status::Fail => {
            if c.residual == "0" || c.residual.is_empty() {
                return Err(format!("{id} fails without a residual"));
            }
            if let Some(v) = c.variants.iter().find(|v| v.holds) {
                return Ok(format!("{id} FAIL as printed, variant {:?} holds", v.label));
            }
            match &c.repair {
                Some(rep @ RepairOutcome::Candidate { .. }) => Ok(format!("{id} FAIL as printed, {rep}")),
                _ => Err(format!("{id} FAIL with neither a holding variant nor a repair")),
            }
        }
        ref s => Err(format!("{id} {s}")),
    }
}

fn c1() -> Outcome {
    let d = jacobi_defect(&su3());
    if d.is_empty() {
        holds("56 triples, no defect")
    } else {
        Err(format!("{} defective triples", d.len()))
    }
}

fn c2() -> Outcome {
    let r = report("sec3.casimirs", false)?;
    let names: Vec<String> = (1..=8).flat_map(|k| [format!("C2-X{k}"), format!("C3-X{k}")]).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    all_pass(&r, &ids("sec3.casimirs", &names))?;
    holds("[C2,Xk] = [C3,Xk] = 0 for k = 1..8")
}

fn c3() -> Outcome {
    let r = report("sec4.cubic", false)?;
    let mut want = ids("sec4.cubic", &["T13", "T23", "T122"]);
    for t in ["T12", "T13", "T23", "T121", "T122", "T123"] {
        for x in ["X1", "X2"] {
            want.push(format!("sec4.cubic.commutant-{t}-{x}"));
        }
    }
    all_pass(&r, &want)?;
    holds(format!("{} identities", want.len()))
}

const CUBIC: [&str; 9] =
    ["T121-T1", "T122-T2", "T121-T2", "T122-T1", "T121-T3", "T122-T3", "T121-T12", "T122-T12", "T121-T122"];

fn c4() -> Outcome {
    let r = report("sec4.cubic", false)?;
    all_pass(&r, &ids("sec4.cubic", &CUBIC))?;
    holds("nine relations")
}

fn c5() -> Outcome {
    let r = report("appA", false)?;
    let (pass, fail): (Vec<_>, Vec<_>) = r.checks.iter().partition(|c| c.status == Status::Pass);
    if fail.is_empty() {
        return holds(format!("{} relations", pass.len()));
    }
    let diagnoses = fail.iter().map(|c| diagnosed(&r, &c.id)).collect::<Result<Vec<_>, _>>()?;
    Ok(Verdict::Misprinted(format!("{} PASS; {}", pass.len(), diagnoses.join("; "))))
}

fn c6() -> Outcome {
    let r = report("sec4.reduction", false)?;
    for c in &r.checks {
        if c.status == Status::Fail && c.residual == "0" {
            return Err(format!("{} fails without a residual", c.id));
        }
        if let Some(RepairOutcome::Candidate { single: false, .. }) = &c.repair {
            return Err(format!("{} repair needs more than one coefficient", c.id));
        }
    }
    let alg1 = diagnosed(&r, "sec4.reduction.alg1")?;
    let alg2 = diagnosed(&r, "sec4.reduction.alg2")?;
    let kforms = diagnosed(&r, "sec4.reduction.K-forms")?;
    let central = ["K-T1", "K-T2", "K-T12"]
        .iter()
        .map(|k| diagnosed(&r, &format!("sec4.reduction.{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    all_pass(&r, &ids("sec4.reduction", &["Kc-T1", "Kc-T2", "Kc-T12", "Kc-forms"]))?;
    holds(format!(
        "{alg1}; {alg2}; {}; {kforms}; K with X3 read as X2^2 is central and equals the central form",
        central.join("; ")
    ))
}

fn c7() -> Outcome {
    let r = report("sec3.ladder", false)?;
    all_pass(
        &r,
        &ids("sec3.ladder", &["Ap-H", "Am-H", "Bp-H", "Bm-H", "Cp-T1", "Cm-T1", "Bp-T2", "Bm-T2", "Ap-T3", "Am-T3"]),
    )?;
    let cp = diagnosed(&r, "sec3.ladder.Cp-H")?;
    let cm = diagnosed(&r, "sec3.ladder.Cm-H")?;
    holds(format!("A and B relations PASS; {cp}; {cm}"))
}

fn c8() -> Outcome {
    let r = report("sec2.classical", false)?;
    all_pass(&r, &ids("sec2.classical", &["H-T1", "H-T2", "H-T3", "tc121", "tc122", "tc123", "cyclic-sum"]))?;
    let sq = diagnosed(&r, "sec2.classical.T12sq")?;
    holds(format!("integrals, (tc121) and the cyclic sum PASS; {sq}"))
}

fn c9() -> Outcome {
    let r = report("sec2.quantum", false)?;
    let limits: Vec<String> =
        r.checks.iter().filter(|c| c.id.starts_with("sec2.quantum.limit-")).map(|c| c.id.clone()).collect();
    let mut want = ids("sec2.quantum", &["H-T1", "H-T2", "H-T3", "T13", "T23", "t121quan"]);
    want.extend(limits.iter().cloned());
    all_pass(&r, &want)?;
    let sq = diagnosed(&r, "sec2.quantum.T12sq")?;
    holds(format!("closure PASS; {sq}; {} hbar -> 0 limits PASS", limits.len()))
}

fn c10() -> Outcome {
    let derived = contract_algebra(&su3(), &su3_spec()).map_err(|e| e.to_string())?;
    if !derived.same_table(&contracted_su3()) {
        return Err("the contracted table differs from the built-in one".into());
    }
    let r = report("sec5", false)?;
    let mut want =
        ids("sec5", &["table-X3-X4", "table-X3-X7", "table-X3-X8", "table-X4-X7", "table-X4-X8", "table-X7-X8"]);
    want.extend(ids("sec5", &["C2-T", "T13", "T23", "T12-explicit", "T121+T123"]));
    want.extend((1..=8).map(|k| format!("sec5.C2-X{k}")));
    want.extend(ids("sec5", &CUBIC));
    all_pass(&r, &want)?;
    match status(&r, "sec5.T12-T13")? {
        Status::Fail => {
            holds("table, Casimir and nine relations PASS; T13 = 0 holds, so T12 - T13 = 0 fails (T12 is nonzero)")
        }
        Status::Pass => holds("table, Casimir and nine relations PASS; T12 - T13 = 0 holds"),
        s => Err(format!("sec5.T12-T13 {s}")),
    }
}

fn c11() -> Outcome {
    let r = report("all", true)?;
    let mut confirmed = 0;
    for c in r.checks.iter().filter(|c| c.engine.is_uea()) {
        match &c.oracle {
            Some(o) if o.confirms => confirmed += 1,
            Some(o) => return Err(format!("{}: oracle {o}", c.id)),
            None if c.status == Status::Pass && !Registry::builtin().check(&c.id).is_some_and(|k| k.cartan) => {
                return Err(format!("{}: PASS without an oracle verdict", c.id))
            }
            None => {}
        }
    }
    let muts = run_mutations(Registry::builtin(), 5).map_err(|e| e.to_string())?;
    if muts.len() < 10 {
        return Err(format!("only {} mutations", muts.len()));
    }
    if let Some(m) = muts.iter().find(|m| !(m.pbw && m.oracle)) {
        return Err(format!("mutation {} escaped (pbw {}, oracle {})", m.id, m.pbw, m.oracle));
    }
    holds(format!("{confirmed} checks confirmed in matrices; {} mutations caught by both engines", muts.len()))
}

fn random_raw(rng: &mut ChaCha8Rng, dim: usize) -> RawSum {
    (0..rng.random_range(1..=3))
        .map(|_| {
            let w = (0..rng.random_range(0..=5)).map(|_| rng.random_range(0..dim)).collect();
            (w, Scalar::from_int(rng.random_range(-3..=3i64)))
        })
        .collect()
}

fn random_element(rng: &mut ChaCha8Rng, alg: &Algebra) -> EAElement {
    normal_form(alg, &random_raw(rng, alg.dim()))
}

fn random_phase(rng: &mut ChaCha8Rng) -> PhaseElement {
    PhaseElement::from_terms((0..rng.random_range(1..=3)).map(|_| {
        let k = Key {
            q: std::array::from_fn(|_| rng.random_range(-2..=2)),
            r: std::array::from_fn(|_| rng.random_range(0..=2)),
        };
        (k, Scalar::from_int(rng.random_range(-3..=3)))
    }))
}

fn c12() -> Outcome {
    let g = su3();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for round in 0..500 {
        let raw = random_raw(&mut rng, 8);
        let nf = normal_form(&g, &raw);
        for s in [Strategy::RightmostFirst, Strategy::Random(round)] {
            if normal_form_with(&g, &raw, s) != nf {
                return Err(format!("strategy {s:?} disagrees on {raw:?}"));
            }
        }
        let again: RawSum = nf.terms().map(|(m, c)| (m.word(), c.clone())).collect();
        if normal_form(&g, &again) != nf {
            return Err(format!("normal form of {raw:?} is not idempotent"));
        }
    }
    for _ in 0..200 {
        let (a, b, c) = (random_element(&mut rng, &g), random_element(&mut rng, &g), random_element(&mut rng, &g));
        if &(&a * &b) * &c != &a * &(&b * &c) {
            return Err(format!("associativity fails for {a}, {b}, {c}"));
        }
    }
    for _ in 0..200 {
        let (a, b, c) = (random_phase(&mut rng), random_phase(&mut rng), random_phase(&mut rng));
        let leibniz = &(&poisson_bracket(&a, &b) * &c) + &(&b * &poisson_bracket(&a, &c));
        if poisson_bracket(&a, &(&b * &c)) != leibniz {
            return Err(format!("Leibniz fails for {a}, {b}, {c}"));
        }
        let jac = &(&poisson_bracket(&poisson_bracket(&a, &b), &c) + &poisson_bracket(&poisson_bracket(&b, &c), &a))
            + &poisson_bracket(&poisson_bracket(&c, &a), &b);
        if !jac.is_zero() {
            return Err(format!("Jacobi fails for {a}, {b}, {c}"));
        }
    }
    let reg = Registry::builtin();
    let ev = Evaluator::new();
    let mut n = 0;
    for (check, src) in reg.expressions() {
        let ctx = ev.context(check, src == check.lhs);
        let e = dsl::parse(src, &ctx).map_err(|d| format!("{}: {d}", check.id))?;
        let back = dsl::parse(&e.to_string(), &ctx).map_err(|d| format!("{}: reprint {d}", check.id))?;
        if back != e {
            return Err(format!("{}: {src:?} does not survive printing", check.id));
        }
        n += 1;
    }
    if Registry::parse(&reg.to_toml()).map_err(|e| e.to_string())? != *reg {
        return Err("registry does not survive a TOML round trip".into());
    }
    holds(format!("500 words, 200 triples, 200 bracket triples, {n} registry expressions"))
}

/// Title, time budget in seconds and the check itself.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("su(3) Jacobi identity", 1, c1),
        ("Casimir centrality", 5, c2),
        ("dependency and commutant identities", 10, c3),
        ("cubic algebra", 120, c4),
        ("quartic algebra with Cartan-dependent constants", 120, c5),
        ("reduction and the Casimir K", 600, c6),
        ("ladder relations", 30, c7),
        ("classical Poisson algebra", 60, c8),
        ("quantum algebra and the classical limit", 120, c9),
        ("contraction", 60, c10),
        ("oracle concordance and mutations", 60, c11),
        ("engine properties and round trips", 60, c12),
    ];
    let mut failed = 0;
    let mut misprinted = Vec::new();
    for (k, (title, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let t = start.elapsed();
        let over = t > Duration::from_secs(budget);
        let (verdict, detail) = match (out, over) {
            (Ok(Verdict::Holds(d)), false) => ("PASS", d),
            (Ok(Verdict::Misprinted(d)), false) => {
                misprinted.push(k + 1);
                ("FAIL", format!("unattainable as printed, every failure diagnosed; {d}"))
            }
            (Ok(Verdict::Holds(d) | Verdict::Misprinted(d)), true) => ("FAIL", format!("over budget; {d}")),
            (Err(e), _) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {verdict} {title} [{:.2} s of {budget} s]: {detail}", k + 1, t.as_secs_f64());
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if !misprinted.is_empty() {
        println!("unattainable as printed, with diagnosed misprints: criterion {misprinted:?}");
    }
    if failed == misprinted.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
