//! The twelve acceptance criteria, one PASS/FAIL line each.
//!
//! Criterion 10 fails at n = 1 with U = M(0) + M(1): the summand generated by
//! the degree-zero vector lies in Omega_0 of the quotient, so the recovered
//! degree-one piece is one-dimensional. The run exits nonzero if any other
//! criterion fails or if criterion 10 fails in any other way.

use std::time::Instant;

use serde_json::Value;
use zhu_core::arith::{binomial, format_rational, ratio};
use zhu_core::cli::{run, CommandName, Outcome, RunConfig, Section};
use zhu_core::identities::check_proof_identities;
use zhu_core::omega::{default_state_cap, o, omega_n, reassociate, reassociate_closed_form};
use zhu_core::report::Verdict;
use zhu_core::voa::{Backend, FockSpace, Voa};

struct Verdicts {
    lines: Vec<(u32, bool, String)>,
}

impl Verdicts {
    fn record(&mut self, k: u32, ok: bool, text: String) {
        println!("{} criterion {k}: {text}", if ok { "PASS" } else { "FAIL" });
        self.lines.push((k, ok, text));
    }
}

fn section<'a>(out: &'a Outcome, name: &str) -> &'a Section {
    out.section(name).unwrap_or_else(|| panic!("missing section {name}"))
}

/// Names of checks in `s` (restricted to `names` when nonempty) that did not pass.
fn not_passing(s: &Section, names: &[&str]) -> Vec<String> {
    s.checks
        .iter()
        .filter(|c| names.is_empty() || names.contains(&c.name.as_str()))
        .filter(|c| c.verdict != Verdict::Pass)
        .map(|c| format!("{}/{}: {:?} {}", s.name, c.name, c.verdict, c.detail.clone().unwrap_or_default()))
        .collect()
}

fn has_all(s: &Section, names: &[&str]) -> bool {
    names.iter().all(|n| s.checks.iter().any(|c| c.name == *n && c.tested > 0))
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn canonical(out: &Outcome) -> String {
    let mut r: Value = serde_json::from_str(&out.report_json().unwrap()).unwrap();
    let mut m: Value = serde_json::from_str(&out.manifest_json().unwrap()).unwrap();
    strip_timing(&mut r);
    strip_timing(&mut m);
    format!("{r}\n{m}")
}

fn main() {
    let cfg = RunConfig { command: CommandName::All, ..RunConfig::default() };
    let started = Instant::now();
    let out = run(&cfg).expect("all");
    println!("all: {} checks in {:.1}s", out.report.checks.len(), started.elapsed().as_secs_f64());
    let mut v = Verdicts { lines: Vec::new() };

    // 1
    let ids = section(&out, "identities");
    let bad = not_passing(ids, &[]);
    let names = ["A_n", "F_n", "a_n", "c_n"];
    v.record(
        1,
        bad.is_empty() && has_all(ids, &names) && ids.elapsed_ms < 10_000,
        format!("A_n, F_n, a_n, c_n identities n <= 8 (a_n n <= 6) in {} ms {bad:?}", ids.elapsed_ms),
    );

    // 2
    let mut kernel = 0;
    let mut collapse = 0;
    let mut bad = Vec::new();
    for n in 0..=8 {
        for c in check_proof_identities(n, 1) {
            match c.name.as_str() {
                "weight shift kernel" => kernel += 1,
                "binomial collapse" => collapse += 1,
                _ => continue,
            }
            if !c.passed() {
                bad.push(format!("{} {:?}", c.name, c.parameters));
            }
        }
    }
    let expected_collapse: i64 = (1..=8).map(|n: i64| n * (n + 1) / 2).sum();
    v.record(
        2,
        bad.is_empty() && kernel == 9 && collapse == expected_collapse,
        format!("kernel display {kernel} cases, collapse {collapse} cases {bad:?}"),
    );

    // 3
    let mut bad = not_passing(section(&out, "algebra n=0"), &["zhu_product_coincidence"]);
    for n in 0..=2 {
        bad.extend(not_passing(section(&out, &format!("algebra n={n}")), &["vacuum_identity"]));
    }
    let present = has_all(section(&out, "algebra n=0"), &["zhu_product_coincidence", "vacuum_identity"]);
    v.record(3, bad.is_empty() && present, format!("star_0 is the Zhu product; 1 is a two-sided identity {bad:?}"));

    // 4
    let mut bad = Vec::new();
    let mut ms = 0;
    for n in 0..=2 {
        let s = section(&out, &format!("algebra n={n}"));
        bad.extend(not_passing(s, &[]));
        ms += s.elapsed_ms;
    }
    v.record(4, bad.is_empty() && ms < 300_000, format!("A_n suite n = 0,1,2 weight 3 slack 4 certified in {ms} ms {bad:?}"));

    // 5
    let names = ["surjection_generators", "surjection_products"];
    let mut bad = Vec::new();
    let mut present = true;
    for n in 1..=2 {
        let s = section(&out, &format!("surjection n={n}"));
        bad.extend(not_passing(s, &names));
        present &= has_all(s, &names);
    }
    v.record(5, bad.is_empty() && present, format!("O_n and star_n - star_(n-1) certified in O_(n-1) for n = 1,2 {bad:?}"));

    // 6
    let names = ["phi_squared", "phi_anti_homomorphism"];
    let mut bad = Vec::new();
    let mut present = true;
    for n in 0..=1 {
        let s = section(&out, &format!("anti_involution n={n}"));
        bad.extend(not_passing(s, &names));
        present &= has_all(s, &names);
    }
    v.record(6, bad.is_empty() && present, format!("phi^2 = id on weight <= 4; anti-homomorphism mod O_n {bad:?}"));

    // 7
    let names = ["o_star_product", "mode_product_identity", "o_kills_o_n"];
    let mut bad = Vec::new();
    let mut present = true;
    for h in ["0", "1", "2/3"] {
        for n in 0..=1 {
            let s = section(&out, &format!("omega n={n} h={h}"));
            bad.extend(not_passing(s, &names));
            present &= has_all(s, &names);
        }
    }
    v.record(7, bad.is_empty() && present, format!("zero-mode product, mode identity, O_n acts by zero on Fock(h) {bad:?}"));

    // 8
    let mut bad = not_passing(section(&out, "reassociate"), &[]);
    for n in 0..=3i64 {
        for i in 0..=n {
            let r = reassociate(i, -i, n).expect("reassociate");
            if r.coeffs != reassociate_closed_form(i, n) {
                bad.push(format!("closed form i={i} n={n}"));
            }
        }
    }
    for n in 0..=1 {
        bad.extend(not_passing(section(&out, &format!("omega n={n} h=2/3")), &["reassociate_behavior"]));
    }
    v.record(8, bad.is_empty(), format!("reassociate(i,-i,n) closed form; general case on Fock(2/3) {bad:?}"));

    // 9
    let voa = Voa::heisenberg();
    let m = FockSpace::highest_weight(Backend::Heisenberg, ratio(2, 3));
    let om = omega_n(&voa, &m, 1, 5, default_state_cap(&voa, 5));
    let w = voa.conformal_vector();
    let mut eig = Vec::new();
    let mut scalar = true;
    for x in om.vectors() {
        let img = o(&m, &w, x);
        let (key, c) = x.iter().next().map(|(k, c)| (k.clone(), c.clone())).unwrap();
        let lambda = img.coeff(&key) / c;
        scalar &= img == x.scaled(&lambda);
        eig.push(lambda);
    }
    let dims = om.dims();
    let ok = dims == [1, 1, 0, 0, 0, 0] && scalar && eig.len() == 2 && &eig[1] - &eig[0] == binomial(1, 1);
    let eig_text: Vec<String> = eig.iter().map(format_rational).collect();
    v.record(9, ok, format!("Omega_1(Fock(2/3)) dims {dims:?}, o(omega) eigenvalues {eig_text:?}"));

    // 10
    let s0 = section(&out, "verma n=0 h=2/3 levels=[0]");
    let s1 = section(&out, "verma n=1 h=2/3 levels=[0, 1]");
    let table = |s: &Section, k: &str| s.tables.get(k).cloned().unwrap_or(Value::Null);
    let five = serde_json::json!([1, 1, 2, 3, 5]);
    let zero = serde_json::json!([0, 0, 0, 0, 0]);
    let part1 = table(s0, "induced_dims") == five
        && table(s0, "quotient_dims") == five
        && table(s0, "radical_dims") == zero
        && not_passing(s0, &[]).is_empty()
        && has_all(s0, &["radical_meets_u_trivially", "omega_recovery"])
        && s0.checks.iter().any(|c| c.name == "relations_in_radical")
        && table(s0, "relations")["total"].as_u64().is_some_and(|t| t > 0)
        && table(s0, "relations")["nonzero"] == 0;
    let rec1 = s1.checks.iter().find(|c| c.name == "omega_recovery").expect("recovery at n = 1");
    let part2 = rec1.verdict == Verdict::Pass;
    let ms = s0.elapsed_ms + s1.elapsed_ms;
    let part3 = ms < 600_000;
    v.record(
        10,
        part1 && part2 && part3,
        format!(
            "n=0: dims {} J {} relations {} [{}]; n=1 U=M(0)+M(1): recovery {:?} ({}); {ms} ms",
            table(s0, "quotient_dims"),
            table(s0, "radical_dims"),
            table(s0, "relations"),
            if part1 { "ok" } else { "bad" },
            rec1.verdict,
            rec1.detail.clone().unwrap_or_default(),
        ),
    );
    let known_failure = part1
        && part3
        && rec1.verdict == Verdict::Fail
        && rec1.detail.as_deref().is_some_and(|d| d.contains("dim Omega_0 = 1, quotient 1 but U has dimension 2"));

    // 11
    let names = ["paired_associativity", "paired_residue"];
    let mut bad = not_passing(s0, &names);
    bad.extend(not_passing(s1, &names));
    let present = has_all(s0, &names) && has_all(s1, &names);
    v.record(11, bad.is_empty() && present, format!("paired associativity and residue equalities on n = 0 and n = 1 builds {bad:?}"));

    // 12
    let again = run(&cfg).expect("all, second run");
    let same = canonical(&out) == canonical(&again);
    v.record(12, same, "two runs of all agree byte for byte apart from elapsed_ms".into());

    let failed: Vec<u32> = v.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    println!("acceptance: {}/12 criteria pass; failing {failed:?}", 12 - failed.len());
    let expected = failed == [10] && known_failure;
    if !expected && !failed.is_empty() {
        eprintln!("unexpected acceptance outcome");
        std::process::exit(1);
    }
}
