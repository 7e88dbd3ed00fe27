mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use refcov::algebra::Rat;
use refcov::cache::{self, CacheOutcome, CACHE_DIR_ENV};
use refcov::covariant::Covariants;
use refcov::group::{ClassFunction, GroupSpec};
use refcov::molien::graded_multiplicity_series;
use refcov::suite::{dunkl_params, load_group, run_suite, CheckKind, SuiteConfig};
use refcov::Error;

use config::{Emit, FileConfig};

const DEFAULT_CACHE_DIR: &str = ".refcov-cache";

#[derive(Parser)]
#[command(name = "refcov", version, about = "Exact checks for covariants in coinvariant algebras of reflection groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification checks and print a report.
    Verify(VerifyArgs),
    /// Print the graded multiplicity series of a character in ΛV ⊗ H.
    Series(SeriesArgs),
    /// Print the constants k_ij of E(u_i, f_j) = k_ij p_s.
    Constants(ConstantsArgs),
    /// Build, list or remove cached group data.
    Cache(CacheArgs),
}

#[derive(Args)]
struct CacheDirArg {
    /// Cache directory [default: $REFCOV_CACHE_DIR or ./.refcov-cache].
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Group codes, comma-separated or repeated (A1..A4, B2..B4, I2(m), G2, F4, H3, H4).
    #[arg(long, short)]
    group: Vec<String>,
    /// Checks to run: `all` or a comma-separated subset.
    #[arg(long)]
    checks: Option<String>,
    /// Multiplicity on the reflections of longer roots (e.g. 3/2).
    #[arg(long, allow_hyphen_values = true)]
    c_long: Option<String>,
    /// Multiplicity on the reflections of shorter roots.
    #[arg(long, allow_hyphen_values = true)]
    c_short: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    /// Allow groups excluded from the default suite (H4).
    #[arg(long)]
    allow_long: bool,
    /// Add per-check timings to the report.
    #[arg(long)]
    timings: bool,
    /// TOML config file; flags win on conflict.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    cache: CacheDirArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Character {
    Trivial,
    Sign,
    Reflection,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, short)]
    group: String,
    #[arg(long = "char", value_enum, default_value = "reflection")]
    character: Character,
    #[arg(long)]
    allow_long: bool,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long, short)]
    group: String,
    #[arg(long, allow_hyphen_values = true)]
    c_long: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c_short: Option<String>,
    #[arg(long)]
    allow_long: bool,
    #[command(flatten)]
    cache: CacheDirArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum CacheAction {
    Build,
    Inspect,
    Purge,
}

#[derive(Args)]
struct CacheArgs {
    #[arg(value_enum)]
    action: CacheAction,
    /// Groups to build or purge (all cached groups when omitted for purge).
    #[arg(long, short)]
    group: Vec<String>,
    #[arg(long)]
    allow_long: bool,
    /// Cache directory [default: $REFCOV_CACHE_DIR or ./.refcov-cache].
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_)
        | Error::UnknownGroup(_)
        | Error::LongRunRefused(_)
        | Error::WrongField { .. }
        | Error::RepeatedDegrees(_)
        | Error::NoLengthClasses(_)
        | Error::DegenerateMultiplicity => 2,
        _ => 3,
    }
}

fn parse_groups(items: &[String]) -> Result<Vec<GroupSpec>, Error> {
    let mut out = Vec::new();
    for item in items {
        for code in split_codes(item) {
            let spec: GroupSpec = code.parse()?;
            if !out.contains(&spec) {
                out.push(spec);
            }
        }
    }
    Ok(out)
}

/// Splits on commas outside parentheses, so `I2(5),B2` works.
fn split_codes(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter().map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

fn parse_rat(flag: &str, s: &str) -> Result<Rat, Error> {
    s.parse().map_err(|_| usage(format!("{flag}: `{s}` is not a rational number")))
}

fn one_group(code: &str, allow_long: bool) -> Result<GroupSpec, Error> {
    let spec: GroupSpec = code.parse()?;
    if spec.is_long_run() && !allow_long {
        return Err(Error::LongRunRefused(spec.code()));
    }
    Ok(spec)
}

fn resolve_cache_dir(flag: Option<PathBuf>, file: Option<PathBuf>) -> PathBuf {
    flag.or(file)
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<u8, Error> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let group_items = if args.group.is_empty() { file.groups.items() } else { args.group.clone() };
    let groups = parse_groups(&group_items)?;
    let check_items = match &args.checks {
        Some(c) => c.clone(),
        None => {
            let v = file.checks.items();
            if v.is_empty() {
                "all".to_string()
            } else {
                v.join(",")
            }
        }
    };
    let checks = CheckKind::parse_list(&check_items)?;
    let c_long = args.c_long.as_ref().or(file.c_long.as_ref()).map(|s| parse_rat("--c-long", s)).transpose()?;
    let c_short = args.c_short.as_ref().or(file.c_short.as_ref()).map(|s| parse_rat("--c-short", s)).transpose()?;
    let cache_dir = (!args.cache.no_cache).then(|| resolve_cache_dir(args.cache.cache_dir.clone(), file.cache_dir.clone()));
    let cfg = SuiteConfig {
        groups,
        checks,
        c_long,
        c_short,
        seed: args.seed.or(file.seed).unwrap_or(0),
        cache_dir,
        allow_long: args.allow_long || file.allow_long.unwrap_or(false),
        timings: args.timings || file.timings.unwrap_or(false),
    };
    let emit = args.emit.or(file.emit).unwrap_or(Emit::Json);
    let report = run_suite(&cfg)?;
    let text = match emit {
        Emit::Json => report.to_json_string(),
        Emit::Text => report.to_text(),
    };
    write_out(args.output.as_deref(), &text)?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn series(args: SeriesArgs) -> Result<u8, Error> {
    let spec = one_group(&args.group, args.allow_long)?;
    let g = refcov::group::ReflectionGroup::build(spec)?;
    let (name, chi) = match args.character {
        Character::Trivial => ("trivial", ClassFunction::trivial(&g)),
        Character::Sign => ("sign", ClassFunction::sign(&g)),
        Character::Reflection => ("reflection", ClassFunction::reflection(&g)),
    };
    let s = graded_multiplicity_series(&g, &chi)?;
    let out = json!({ "group": spec.code(), "character": name, "offset": 0, "coefficients": s.coeffs() });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(0)
}

fn constants(args: ConstantsArgs) -> Result<u8, Error> {
    let spec = one_group(&args.group, args.allow_long)?;
    if spec.has_repeated_degrees() {
        return Err(Error::RepeatedDegrees(spec.code()));
    }
    let c_long = args.c_long.as_deref().map(|s| parse_rat("--c-long", s)).transpose()?;
    let c_short = args.c_short.as_deref().map(|s| parse_rat("--c-short", s)).transpose()?;
    let dir = (!args.cache.no_cache).then(|| resolve_cache_dir(args.cache.cache_dir, None));
    let (g, h) = load_group(spec, dir.as_deref())?;
    let params = dunkl_params(&g, c_long.as_ref(), c_short.as_ref())?;
    let c: Vec<_> = params.c.iter().map(|x| x.to_json()).collect();
    let cov = Covariants::build(&g, &h, params)?;
    let table = cov.constants_table()?;
    let out = json!({
        "group": spec.code(),
        "degrees": g.degrees(),
        "c": c,
        "constants": table.to_json(),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(if table.failures.is_empty() { 0 } else { 1 })
}

fn cache_cmd(args: CacheArgs) -> Result<u8, Error> {
    let dir = resolve_cache_dir(args.cache_dir, None);
    match args.action {
        CacheAction::Build => {
            let groups = parse_groups(&args.group)?;
            if groups.is_empty() {
                return Err(usage("cache build needs --group"));
            }
            for spec in groups {
                if spec.is_long_run() && !args.allow_long {
                    return Err(Error::LongRunRefused(spec.code()));
                }
                let (g, _, outcome) = cache::load_or_build(&dir, spec)?;
                let what = match outcome {
                    CacheOutcome::Loaded => "up to date".to_string(),
                    CacheOutcome::Created => "built".to_string(),
                    CacheOutcome::Rebuilt(why) => format!("rebuilt ({why})"),
                };
                println!(
                    "{}: {what}, {} elements, {} roots -> {}",
                    spec,
                    g.order(),
                    g.num_reflections(),
                    cache::cache_path(&dir, spec).display()
                );
            }
        }
        CacheAction::Inspect => {
            let entries = cache::inspect(&dir)?;
            println!("{}", serde_json::to_string_pretty(&json!({ "cache_dir": dir, "entries": entries }))?);
        }
        CacheAction::Purge => {
            let groups = parse_groups(&args.group)?;
            let n = if groups.is_empty() {
                cache::purge(&dir, None)?
            } else {
                groups.into_iter().map(|g| cache::purge(&dir, Some(g))).sum::<Result<usize, Error>>()?
            };
            println!("removed {n} file(s) from {}", dir.display());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Series(a) => series(a),
        Command::Constants(a) => constants(a),
        Command::Cache(a) => cache_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("refcov: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use refcov::suite::Selection;

    #[test]
    fn split_respects_parentheses() {
        assert_eq!(split_codes("I2(5), B2,A3"), vec!["I2(5)", "B2", "A3"]);
    }

    #[test]
    fn usage_errors_map_to_two() {
        assert_eq!(exit_code(&Error::LongRunRefused("H4".into())), 2);
        assert_eq!(exit_code(&Error::Internal("x".into())), 3);
    }

    #[test]
    fn selection_from_list() {
        assert_eq!(CheckKind::parse_list("all").unwrap(), Selection::All);
    }
}
