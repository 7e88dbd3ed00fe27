//! Verification suites over catalogue groups and their JSON reports.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Rat, Scalar};
use crate::cache::{load_or_build, CacheOutcome};
use crate::coinvariants::CoinvariantBasis;
use crate::covariant::Covariants;
use crate::differentials::{square_zero_check, DunklParams};
use crate::error::{Error, Result};
use crate::group::{ClassFunction, GroupSpec, GroupType, ReflectionGroup};
use crate::lie_bridge::{catalogue_modules, LieBridge, LieType};
use crate::little_adjoint::little_adjoint_suite;
use crate::molien::{covariant_series_product_formula, graded_multiplicity_series, invariant_series_product_formula, reeder_series_check};
use crate::report::Check;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Random samples per group for the square-zero checks.
pub const SQUARE_ZERO_SAMPLES: usize = 50;
/// Random multiplicity functions tried besides c ≡ 1.
pub const RANDOM_MULTIPLICITIES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Differentials,
    Solomon,
    Constants,
    Freeness,
    Structure,
    J2Invariance,
    LittleAdjoint,
    Molien,
    Reeder,
    LieBridge,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Differentials,
        CheckKind::Solomon,
        CheckKind::Constants,
        CheckKind::Freeness,
        CheckKind::Structure,
        CheckKind::J2Invariance,
        CheckKind::LittleAdjoint,
        CheckKind::Molien,
        CheckKind::Reeder,
        CheckKind::LieBridge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Differentials => "differentials",
            CheckKind::Solomon => "solomon",
            CheckKind::Constants => "constants",
            CheckKind::Freeness => "freeness",
            CheckKind::Structure => "structure",
            CheckKind::J2Invariance => "j2-invariance",
            CheckKind::LittleAdjoint => "little-adjoint",
            CheckKind::Molien => "molien",
            CheckKind::Reeder => "reeder",
            CheckKind::LieBridge => "lie-bridge",
        }
    }

    /// Parses a comma-separated list; `all` selects every kind.
    pub fn parse_list(s: &str) -> Result<Selection> {
        let mut out = BTreeSet::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part.eq_ignore_ascii_case("all") {
                return Ok(Selection::All);
            }
            out.insert(part.parse()?);
        }
        if out.is_empty() {
            return Err(Error::Usage("empty check list".into()));
        }
        Ok(Selection::Only(out))
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('_', "-");
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == t)
            .ok_or_else(|| Error::Usage(format!("unknown check `{s}`")))
    }
}

/// Requested checks: `All` means every check applicable to each group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    All,
    Only(BTreeSet<CheckKind>),
}

impl Selection {
    fn to_json(&self) -> Value {
        match self {
            Selection::All => json!("all"),
            Selection::Only(s) => json!(s.iter().map(|k| k.name()).collect::<Vec<_>>()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub groups: Vec<GroupSpec>,
    pub checks: Selection,
    /// Multiplicity on the class of longer roots.
    pub c_long: Option<Rat>,
    /// Multiplicity on the class of shorter roots.
    pub c_short: Option<Rat>,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub allow_long: bool,
    /// Adds wall-clock timings to each record (breaks byte-identical output).
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            groups: Vec::new(),
            checks: Selection::All,
            c_long: None,
            c_short: None,
            seed: 0,
            cache_dir: None,
            allow_long: false,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported outcome of an open conjecture; never fails the run.
    Finding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub group: String,
    pub kind: CheckKind,
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub witnesses: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub finding: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub engine_version: String,
    pub config: Value,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let st = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Finding => "FINDING",
            };
            out.push_str(&format!("{st:<8} {:<8} {:<15} {}\n", r.group, r.kind.name(), r.name));
        }
        out.push_str(&format!("{} pass, {} fail, {} finding\n", self.summary.pass, self.summary.fail, self.summary.finding));
        out
    }

    pub fn records_for<'a>(&'a self, group: &'a str) -> impl Iterator<Item = &'a CheckRecord> {
        self.records.iter().filter(move |r| r.group == group)
    }
}

/// Catalogued Lie algebra whose Weyl group is `spec`.
pub fn lie_type_for(spec: GroupSpec) -> Option<LieType> {
    match spec.ty {
        GroupType::A(r) if r <= 2 => Some(LieType::A(r)),
        GroupType::B(2) => Some(LieType::B2),
        _ => None,
    }
}

/// Checks that make sense for `spec`.
pub fn applicable(spec: GroupSpec, kind: CheckKind) -> std::result::Result<(), String> {
    let two_classes = matches!(spec.ty, GroupType::B(_) | GroupType::F4 | GroupType::G2)
        || matches!(spec.ty, GroupType::I2(m) if m % 2 == 0);
    match kind {
        CheckKind::LittleAdjoint if !two_classes => Err(format!("{spec} has a single class of reflections")),
        CheckKind::Reeder | CheckKind::LieBridge if lie_type_for(spec).is_none() => {
            Err(format!("no catalogued Lie algebra with Weyl group {spec} (A1, A2, B2 are available)"))
        }
        CheckKind::Constants | CheckKind::Freeness if spec.has_repeated_degrees() => Err(format!("{spec} has repeated degrees")),
        _ => Ok(()),
    }
}

impl SuiteConfig {
    /// Validates the configuration and resolves the checks run per group.
    pub fn plan(&self) -> Result<Vec<(GroupSpec, Vec<CheckKind>)>> {
        if self.groups.is_empty() {
            return Err(Error::Usage("no groups requested".into()));
        }
        let mut out = Vec::new();
        for &spec in &self.groups {
            if spec.is_long_run() && !self.allow_long {
                return Err(Error::LongRunRefused(spec.code()));
            }
            let kinds: Vec<CheckKind> = match &self.checks {
                Selection::All => CheckKind::ALL.into_iter().filter(|&k| applicable(spec, k).is_ok()).collect(),
                Selection::Only(set) => {
                    for &k in set {
                        applicable(spec, k).map_err(|why| Error::Usage(format!("check {k} not valid here: {why}")))?;
                    }
                    set.iter().copied().collect()
                }
            };
            out.push((spec, kinds));
        }
        Ok(out)
    }

    fn to_json(&self) -> Value {
        json!({
            "groups": self.groups.iter().map(|g| g.code()).collect::<Vec<_>>(),
            "checks": self.checks.to_json(),
            "c_long": self.c_long.as_ref().map(|c| c.to_string()),
            "c_short": self.c_short.as_ref().map(|c| c.to_string()),
            "seed": self.seed,
        })
    }
}

/// Multiplicities from the long/short values; classes whose roots have
/// equal length count the first class as long.
pub fn dunkl_params(g: &ReflectionGroup, c_long: Option<&Rat>, c_short: Option<&Rat>) -> Result<DunklParams> {
    let classes = g.reflection_classes();
    let norm = |k: usize| g.reflections()[classes[k][0]].norm.clone();
    let one = Rat::from_int(1);
    let values: Vec<Rat> = if classes.len() == 1 {
        match (c_long, c_short) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Usage(format!("{} has one class of reflections; --c-long and --c-short disagree", g.label())))
            }
            (Some(a), _) | (None, Some(a)) => vec![a.clone()],
            (None, None) => vec![one],
        }
    } else {
        let long_first = norm(0).approx() >= norm(1).approx();
        let (l, s) = (c_long.cloned().unwrap_or(one.clone()), c_short.cloned().unwrap_or(one));
        if long_first {
            vec![l, s]
        } else {
            vec![s, l]
        }
    };
    let params = DunklParams::new(g, values.into_iter().map(|v| Scalar::from_rat(g.field(), v)).collect())?;
    if params.weighted_count(g).is_zero() {
        return Err(Error::DegenerateMultiplicity);
    }
    Ok(params)
}

/// Builds the group and its coinvariant basis, through the cache if one is
/// configured. Cache notices go to stderr.
pub fn load_group(spec: GroupSpec, cache_dir: Option<&std::path::Path>) -> Result<(ReflectionGroup, CoinvariantBasis)> {
    match cache_dir {
        Some(dir) => {
            let (g, h, outcome) = load_or_build(dir, spec)?;
            if let CacheOutcome::Rebuilt(why) = outcome {
                eprintln!("note: rebuilt cache for {spec}: {why}");
            }
            Ok((g, h))
        }
        None => {
            let g = ReflectionGroup::build(spec)?;
            let h = CoinvariantBasis::build(&g)?;
            Ok((g, h))
        }
    }
}

struct Recorder<'a> {
    group: String,
    timings: bool,
    out: &'a mut Vec<CheckRecord>,
}

impl Recorder<'_> {
    fn push(&mut self, kind: CheckKind, checks: Vec<Check>, started: Instant) {
        let millis = self.timings.then(|| started.elapsed().as_millis() as u64);
        for c in checks {
            let status = if c.name.starts_with("phi_injective") {
                Status::Finding
            } else if c.passed {
                Status::Pass
            } else {
                Status::Fail
            };
            self.out.push(CheckRecord {
                group: self.group.clone(),
                kind,
                name: c.name,
                status,
                witnesses: c.details,
                millis,
            });
        }
    }
}

fn series_checks(g: &ReflectionGroup) -> Vec<Check> {
    let d = g.degrees();
    let r = g.rank();
    let mut out = Vec::new();
    for (name, chi, product, total) in [
        ("molien_invariant", ClassFunction::trivial(g), invariant_series_product_formula(d), 1i64 << r),
        ("molien_covariant", ClassFunction::reflection(g), covariant_series_product_formula(d), (r as i64) << r),
    ] {
        out.push(match graded_multiplicity_series(g, &chi) {
            Ok(s) => Check::new(
                name,
                s == product && s.total() == total,
                json!({ "molien": s.coeffs(), "product": product.coeffs(), "total": s.total() }),
            ),
            Err(e) => Check::error(name, &e),
        });
    }
    out
}

fn run_group(spec: GroupSpec, kinds: &[CheckKind], cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    let (g, h) = load_group(spec, cfg.cache_dir.as_deref())?;
    let mut rec = Recorder {
        group: spec.code(),
        timings: cfg.timings,
        out: &mut records,
    };
    let needs_cov = kinds.iter().any(|k| {
        matches!(
            k,
            CheckKind::Solomon | CheckKind::Constants | CheckKind::Freeness | CheckKind::Structure | CheckKind::J2Invariance | CheckKind::LittleAdjoint
        )
    });
    let params = dunkl_params(&g, cfg.c_long.as_ref(), cfg.c_short.as_ref())?;
    let unit = params == DunklParams::unit(&g);
    let cov = if needs_cov { Some(Covariants::build(&g, &h, params)?) } else { None };
    let mut table = None;
    for &kind in kinds {
        let t = Instant::now();
        let checks = match kind {
            CheckKind::Differentials => square_zero_check(&g, cfg.seed, SQUARE_ZERO_SAMPLES, RANDOM_MULTIPLICITIES)?,
            CheckKind::Molien => series_checks(&g),
            CheckKind::Structure => {
                let cov = cov.as_ref().unwrap();
                let mut v = cov.p_checks();
                v.extend(cov.generator_checks());
                v.push(cov.eigenvalue_check());
                v
            }
            CheckKind::Solomon => vec![cov.as_ref().unwrap().solomon_check()],
            CheckKind::Constants => {
                let cov = cov.as_ref().unwrap();
                let mut v = cov.orthogonality_checks();
                let tab = cov.constants_table()?;
                v.push(tab.check());
                if unit {
                    let k11 = tab.k[0][0].clone();
                    let ok = k11.as_ref().is_some_and(|k| *k == Scalar::int(2));
                    v.push(Check::new("k11_equals_2", ok, json!({ "k11": k11.map(|k| k.to_json()) })));
                }
                table = Some(tab);
                v
            }
            CheckKind::Freeness => {
                let cov = cov.as_ref().unwrap();
                if table.is_none() {
                    table = Some(cov.constants_table()?);
                }
                let mut v = vec![cov.freeness_check()];
                v.extend(cov.pr_structure_check(table.as_ref().unwrap()));
                v
            }
            CheckKind::J2Invariance => vec![cov.as_ref().unwrap().j2_invariance_check(cfg.seed)],
            CheckKind::LittleAdjoint => little_adjoint_suite(&g, &h, &cov.as_ref().unwrap().p),
            CheckKind::Reeder | CheckKind::LieBridge => {
                let ty = lie_type_for(spec).expect("validated");
                let bridge = LieBridge::build(ty, &g, &h)?;
                let mut v = Vec::new();
                for m in catalogue_modules(ty) {
                    let label = format!("{ty}:{}", m.name());
                    if kind == CheckKind::Reeder {
                        v.push(match bridge.lie_covariant_series(m) {
                            Ok(s) => reeder_series_check(&g, &m.zero_weight_character(&g), &s, &label),
                            Err(e) => Check::error(format!("reeder_series[{label}]"), &e),
                        });
                    } else {
                        v.push(bridge.phi_injectivity_test(m));
                    }
                }
                if kind == CheckKind::LieBridge {
                    v.splice(0..0, [bridge.tau_formula_check(), bridge.weyl_denominator_check(), bridge.tau_harmonic_injectivity()]);
                }
                v
            }
        };
        rec.push(kind, checks, t);
    }
    Ok(records)
}

/// Runs the planned checks, groups in parallel, and assembles the report
/// in configuration order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let plan = cfg.plan()?;
    let results: Vec<Result<Vec<CheckRecord>>> = std::thread::scope(|s| {
        let handles: Vec<_> = plan
            .iter()
            .map(|(spec, kinds)| {
                let spec = *spec;
                s.spawn(move || {
                    std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run_group(spec, kinds, cfg)))
                        .unwrap_or_else(|_| Err(Error::Internal(format!("{spec}: check panicked"))))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker joined")).collect()
    });
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    let mut summary = Summary::default();
    for r in &records {
        match r.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Finding => summary.finding += 1,
        }
    }
    Ok(SuiteReport {
        schema_version: REPORT_SCHEMA_VERSION,
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.to_json(),
        records,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(groups: &[&str], checks: &str) -> SuiteConfig {
        SuiteConfig {
            groups: groups.iter().map(|g| g.parse().unwrap()).collect(),
            checks: CheckKind::parse_list(checks).unwrap(),
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn parse_checks() {
        assert_eq!(CheckKind::parse_list("all").unwrap(), Selection::All);
        let Selection::Only(s) = CheckKind::parse_list("j2-invariance, lie_bridge").unwrap() else { panic!() };
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![CheckKind::J2Invariance, CheckKind::LieBridge]);
        assert!(CheckKind::parse_list("bogus").is_err());
    }

    #[test]
    fn plan_rejects_invalid() {
        assert!(matches!(cfg(&["A2"], "little-adjoint").plan(), Err(Error::Usage(_))));
        assert!(matches!(cfg(&["H4"], "molien").plan(), Err(Error::LongRunRefused(_))));
        let plan = cfg(&["A2"], "all").plan().unwrap();
        assert!(!plan[0].1.contains(&CheckKind::LittleAdjoint));
        assert!(plan[0].1.contains(&CheckKind::Reeder));
    }

    #[test]
    fn b2_all_pass() {
        let rep = run_suite(&cfg(&["B2"], "all")).unwrap();
        for r in &rep.records {
            assert_ne!(r.status, Status::Fail, "{r:?}");
        }
        assert!(rep.summary.finding >= 1);
        assert!(rep.records.iter().any(|r| r.kind == CheckKind::LittleAdjoint));
    }

    #[test]
    fn long_short_mapping() {
        let g = ReflectionGroup::build("B3".parse().unwrap()).unwrap();
        let p = dunkl_params(&g, Some(&Rat::from_int(2)), Some(&Rat::from_int(3))).unwrap();
        for (k, cls) in g.reflection_classes().iter().enumerate() {
            let norm = g.reflections()[cls[0]].norm.clone();
            let expect = if norm == Scalar::int(2) { 2 } else { 3 };
            assert_eq!(p.c[k], Scalar::int(expect));
        }
        let a = ReflectionGroup::build("A2".parse().unwrap()).unwrap();
        assert!(dunkl_params(&a, Some(&Rat::from_int(2)), Some(&Rat::from_int(3))).is_err());
    }
}
