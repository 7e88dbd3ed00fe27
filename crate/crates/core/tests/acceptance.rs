//! Acceptance suite: one line per criterion, exact arithmetic throughout.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use refcov::suite::{run_suite, CheckKind, CheckRecord, Selection, Status, SuiteConfig, SuiteReport};

const LISTED: [&str; 12] = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "I2(5)", "G2", "I2(8)", "F4", "H3"];

fn config(groups: &[&str], kinds: &[CheckKind], seed: u64) -> SuiteConfig {
    SuiteConfig {
        groups: groups.iter().map(|g| g.parse().unwrap()).collect(),
        checks: Selection::Only(kinds.iter().copied().collect::<BTreeSet<_>>()),
        seed,
        ..SuiteConfig::default()
    }
}

fn find<'a>(rep: &'a SuiteReport, group: &str, name: &str) -> Option<&'a CheckRecord> {
    rep.records.iter().find(|r| r.group == group && r.name == name)
}

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(what.into());
        }
    }

    fn all_pass(&mut self, rep: &SuiteReport, kind: CheckKind) {
        for r in rep.records.iter().filter(|r| r.kind == kind) {
            self.require(r.status == Status::Pass, format!("{} {}: {}", r.group, r.name, r.witnesses));
        }
    }
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let rep = run_suite(&config(&LISTED, &[CheckKind::Differentials], 20240601)).unwrap();
    o.all_pass(&rep, CheckKind::Differentials);
    for g in LISTED {
        for name in ["d_squared", "delta_squared", "dunkl_squared"] {
            let r = find(&rep, g, name);
            o.require(r.is_some_and(|r| r.witnesses["samples"] == 50), format!("{g}: {name} missing or not 50 samples"));
        }
        let c = find(&rep, g, "dunkl_squared").map(|r| r.witnesses["c"].as_array().map_or(0, Vec::len));
        o.require(c == Some(6), format!("{g}: expected c ≡ 1 plus 5 random multiplicities"));
    }
    o
}

fn criteria_2_to_4() -> (Outcome, Outcome, Outcome) {
    let kinds = [CheckKind::Solomon, CheckKind::Molien, CheckKind::Constants, CheckKind::Freeness];
    let rep = run_suite(&config(&LISTED, &kinds, 0)).unwrap();
    let (mut c2, mut c3, mut c4) = (Outcome::new(), Outcome::new(), Outcome::new());
    c2.all_pass(&rep, CheckKind::Solomon);
    c2.all_pass(&rep, CheckKind::Molien);
    c3.all_pass(&rep, CheckKind::Constants);
    c4.all_pass(&rep, CheckKind::Freeness);
    for g in LISTED {
        let r = g.parse::<refcov::group::GroupSpec>().unwrap().ty.rank();
        let sol = find(&rep, g, "solomon");
        c2.require(sol.is_some_and(|s| s.witnesses["dim"] == json!(1 << r)), format!("{g}: dim ℬ^W ≠ 2^r"));
        c2.require(
            sol.is_some_and(|s| s.witnesses["series"] == s.witnesses["molien"]),
            format!("{g}: explicit and Molien series differ"),
        );
        for name in ["E_ff_zero", "E_uu_zero", "constants_pattern"] {
            c3.require(find(&rep, g, name).is_some(), format!("{g}: {name} missing"));
        }
        let k11 = find(&rep, g, "k11_equals_2");
        c3.require(k11.is_some_and(|k| k.witnesses["k11"] == "2"), format!("{g}: k11 ≠ 2"));
        let fr = find(&rep, g, "freeness");
        c4.require(
            fr.is_some_and(|f| f.witnesses["series"] == f.witnesses["product"] && f.witnesses["series"] == f.witnesses["molien"]),
            format!("{g}: freeness series mismatch"),
        );
        for name in ["pr_times_f", "pr_times_u"] {
            let res = find(&rep, g, name);
            c4.require(res.is_some_and(|x| x.witnesses["nonzero_residual"] == json!([])), format!("{g}: {name} residual"));
        }
    }
    (c2, c3, c4)
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let groups = ["B2", "A3", "B3"];
    let rep = run_suite(&config(&groups, &[CheckKind::J2Invariance], 5)).unwrap();
    o.all_pass(&rep, CheckKind::J2Invariance);
    for g in groups {
        let r = find(&rep, g, "j2_invariance");
        let nonvacuous = r.and_then(|r| r.witnesses.as_array()).is_some_and(|v| v.iter().any(|x| x["vacuous"] == false));
        o.require(nonvacuous, format!("{g}: no nonzero J² perturbation"));
    }
    o
}

fn criterion_6() -> (Outcome, String) {
    let mut o = Outcome::new();
    let groups = ["B2", "B3", "B4", "G2", "F4"];
    let rep = run_suite(&config(&groups, &[CheckKind::LittleAdjoint], 0)).unwrap();
    o.all_pass(&rep, CheckKind::LittleAdjoint);
    let mut free = Vec::new();
    for g in groups {
        for ell in 0..2 {
            for name in ["phi_ideal", "delta_v_equals_g", "E_gg_zero", "E_vv_zero", "m_pattern", "pr_residuals", "freeness"] {
                let full = format!("{name}[ell={ell}]");
                o.require(find(&rep, g, &full).is_some(), format!("{g}: {full} missing"));
            }
            if let Some(f) = find(&rep, g, &format!("freeness[ell={ell}]")) {
                free.push(format!("{g}/{ell}:{}", f.witnesses["free_over"]));
            }
        }
        // the orientation with H_ℓ = (ℤ/2)^n for B_n; both for F4
        let want: u64 = if g == "F4" { 4 } else { 2 };
        let mut hit = false;
        for ell in 0..2 {
            let split = find(&rep, g, &format!("split[ell={ell}]")).map(|r| r.witnesses["split"].clone());
            let deg = find(&rep, g, &format!("u_degree[ell={ell}]")).map(|r| r.witnesses["u_degree"].clone());
            let h_order = split.as_ref().map_or(Value::Null, |s| s["h_ell_order"].clone());
            let coordinate = g.starts_with('B') && h_order == json!(1u64 << (g[1..].parse::<u32>().unwrap()));
            if (coordinate || g == "F4") && deg == Some(json!(want)) {
                hit = true;
            }
        }
        if g != "G2" {
            o.require(hit, format!("{g}: U not in degree {want}"));
        }
    }
    (o, free.join(" "))
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let rep = run_suite(&config(&["A1", "A2"], &[CheckKind::Reeder], 0)).unwrap();
    o.all_pass(&rep, CheckKind::Reeder);
    let a1 = find(&rep, "A1", "reeder_series[A1:adjoint]");
    o.require(
        a1.is_some_and(|r| r.witnesses["lie_side"] == json!([0, 1, 1]) && r.witnesses["weyl_side"] == json!([0, 1, 1])),
        "sl2 adjoint is not u + u² on both sides",
    );
    for m in ["adjoint", "sym3"] {
        o.require(find(&rep, "A2", &format!("reeder_series[A2:{m}]")).is_some(), format!("sl3 {m} missing"));
    }
    o
}

fn criterion_8() -> (Outcome, String) {
    let mut o = Outcome::new();
    let rep = run_suite(&config(&["A1", "A2"], &[CheckKind::LieBridge], 0)).unwrap();
    let mut ranks = Vec::new();
    for r in rep.records.iter().filter(|r| r.kind == CheckKind::LieBridge) {
        if r.name.starts_with("phi_injective") {
            o.require(r.status == Status::Finding, format!("{} should be a finding", r.name));
            o.require(r.witnesses["dims_match"] == true, format!("{} {}: graded source/target differ", r.group, r.name));
            ranks.push(format!("{}={}", &r.name[14..r.name.len() - 1], r.witnesses["rank"]));
        } else {
            o.require(r.status == Status::Pass, format!("{} {}: {}", r.group, r.name, r.witnesses));
        }
    }
    for g in ["A1", "A2"] {
        for name in ["tau_root_formula", "weyl_denominator", "tau_harmonic_injective"] {
            o.require(find(&rep, g, &format!("{name}[{g}]")).is_some(), format!("{g}: {name} missing"));
        }
    }
    let a1 = find(&rep, "A1", "weyl_denominator[A1]");
    o.require(a1.is_some_and(|r| r.witnesses["bound_attained"] == true), "A1 bound not an equality");
    let a2 = find(&rep, "A2", "weyl_denominator[A2]");
    o.require(a2.is_some_and(|r| r.witnesses["coefficient"] == r.witnesses["permanent"]), "A2 top coefficient ≠ per");
    (o, ranks.join(" "))
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let kinds = [CheckKind::Differentials, CheckKind::J2Invariance, CheckKind::Constants, CheckKind::LieBridge];
    let cfg = config(&["A2", "B3", "I2(5)"], &[], 31);
    let cfg = SuiteConfig {
        checks: Selection::All,
        ..cfg
    };
    let a = run_suite(&cfg).unwrap().to_json_string();
    let b = run_suite(&cfg).unwrap().to_json_string();
    o.require(a == b, "two runs of the full suite differ");
    let c1 = config(&["A2", "B3"], &kinds[..3], 8);
    o.require(
        run_suite(&c1).unwrap().to_json_string() == run_suite(&c1).unwrap().to_json_string(),
        "seeded runs differ",
    );
    o
}

fn line(n: usize, label: &str, o: &Outcome, extra: &str) -> bool {
    let status = if o.ok { "PASS" } else { "FAIL" };
    let mut s = format!("criterion {n} [{label}]: {status}");
    if !extra.is_empty() {
        s.push_str(&format!(" ({extra})"));
    }
    println!("{s}");
    for note in o.notes.iter().take(10) {
        println!("    {note}");
    }
    o.ok
}

#[test]
fn acceptance() {
    let c1 = criterion_1();
    let (c2, c3, c4) = criteria_2_to_4();
    let c5 = criterion_5();
    let (c6, free) = criterion_6();
    let c7 = criterion_7();
    let (c8, ranks) = criterion_8();
    let c9 = criterion_9();
    let results = [
        line(1, "d² = δ² = D_c² = 0 on random elements", &c1, ""),
        line(2, "invariants of ΛV⊗H: dimension and series", &c2, ""),
        line(3, "E-orthogonality and constants k_ij", &c3, ""),
        line(4, "free covariant module and p_r residuals", &c4, ""),
        line(5, "J²-perturbation invariance of p_i", &c5, ""),
        line(6, "little adjoint", &c6, &format!("free over p-subsets {free}")),
        line(7, "Lie-side and Weyl-side series", &c7, ""),
        line(8, "τ, permanent bound, harmonics, Φ^V", &c8, &format!("Φ^V ranks {ranks}")),
        line(9, "byte-identical reports", &c9, ""),
    ];
    assert!(results.iter().all(|&x| x), "acceptance criteria failed");
}
