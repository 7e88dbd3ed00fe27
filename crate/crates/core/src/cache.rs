//! Versioned on-disk group data: roots, elements, degrees, basic invariants
//! and the coinvariant reduction tables.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::linalg::SparseRow;
use crate::algebra::{FieldId, Monomial, Polynomial, Rat, Scalar};
use crate::coinvariants::CoinvariantBasis;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupType, ReflectionGroup};

pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "REFCOV_CACHE_DIR";

type Term = (Vec<u16>, Value);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupCacheFile {
    pub format_version: u32,
    pub type_code: String,
    pub group_type: GroupType,
    pub field: FieldId,
    pub rank: usize,
    pub order: usize,
    pub degrees: Vec<u32>,
    pub gram: Vec<Vec<Value>>,
    pub positive_roots: Vec<Vec<Value>>,
    pub elements: Vec<Vec<Vec<Value>>>,
    pub invariants: Vec<Vec<Term>>,
    pub standard_monomials: Vec<Vec<Vec<u16>>>,
    /// `reduction[d][i][u]`: coordinates of `x_i · standard[d-1][u]` in H_d.
    pub reduction: Vec<Vec<Vec<Vec<(usize, Value)>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CacheEntry {
    pub file: String,
    pub type_code: String,
    pub field: String,
    pub format_version: u32,
    pub order: usize,
    pub roots: usize,
    pub bytes: u64,
}

/// What happened when a group was requested from the cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheOutcome {
    Loaded,
    Created,
    /// Rebuilt, with the reason the old file was rejected.
    Rebuilt(String),
}

pub fn scalar_from_json(field: FieldId, v: &Value) -> Result<Scalar> {
    let bad = || Error::Internal(format!("malformed scalar {v}"));
    let parse = |x: &Value| -> Result<Rat> { x.as_str().ok_or_else(bad)?.parse().map_err(|_| bad()) };
    match v {
        Value::String(_) => Ok(Scalar::from_rat(field, parse(v)?)),
        Value::Array(xs) if xs.len() == field.degree() => Ok(Scalar::from_coords(field, xs.iter().map(parse).collect::<Result<_>>()?)),
        _ => Err(bad()),
    }
}

fn row_to_json(v: &[Scalar]) -> Vec<Value> {
    v.iter().map(Scalar::to_json).collect()
}

fn poly_to_json(p: &Polynomial) -> Vec<Term> {
    p.terms().map(|(m, c)| (m.exponents().to_vec(), c.to_json())).collect()
}

fn poly_from_json(nvars: usize, field: FieldId, terms: &[Term]) -> Result<Polynomial> {
    let mut p = Polynomial::zero(nvars, field);
    for (e, c) in terms {
        if e.len() != nvars {
            return Err(Error::Internal("invariant term has the wrong number of variables".into()));
        }
        p.add_term(Monomial::from_exponents(e), scalar_from_json(field, c)?);
    }
    Ok(p)
}

pub fn file_name(spec: GroupSpec) -> String {
    let code: String = spec.code().chars().filter(char::is_ascii_alphanumeric).collect();
    format!("{code}-{:?}-v{CACHE_FORMAT_VERSION}.json", spec.field).to_ascii_lowercase()
}

pub fn cache_path(dir: &Path, spec: GroupSpec) -> PathBuf {
    dir.join(file_name(spec))
}

impl GroupCacheFile {
    pub fn from_group(g: &ReflectionGroup, h: &CoinvariantBasis) -> Result<Self> {
        let spec = g.spec().ok_or_else(|| Error::Internal("only catalogue groups are cached".into()))?;
        let (standard, image) = h.parts();
        Ok(GroupCacheFile {
            format_version: CACHE_FORMAT_VERSION,
            type_code: spec.code(),
            group_type: spec.ty,
            field: spec.field,
            rank: g.rank(),
            order: g.order(),
            degrees: g.degrees().to_vec(),
            gram: g.gram().iter().map(|r| row_to_json(r)).collect(),
            positive_roots: g.positive_roots().iter().map(|r| row_to_json(r)).collect(),
            elements: g.elements().iter().map(|m| m.iter().map(|r| row_to_json(r)).collect()).collect(),
            invariants: g.basic_invariants()?.iter().map(poly_to_json).collect(),
            standard_monomials: standard.iter().map(|v| v.iter().map(|m| m.exponents().to_vec()).collect()).collect(),
            reduction: image
                .iter()
                .map(|per_var| {
                    per_var
                        .iter()
                        .map(|rows| rows.iter().map(|r| r.iter().map(|(k, c)| (*k, c.to_json())).collect()).collect())
                        .collect()
                })
                .collect(),
        })
    }

    /// Rebuilds the group and installs the stored invariants and tables,
    /// after checking them against a fresh enumeration.
    pub fn restore(&self, spec: GroupSpec) -> Result<(ReflectionGroup, CoinvariantBasis)> {
        if self.format_version != CACHE_FORMAT_VERSION {
            return Err(Error::Internal(format!("format version {} (expected {CACHE_FORMAT_VERSION})", self.format_version)));
        }
        if self.group_type != spec.ty || self.field != spec.field {
            return Err(Error::Internal(format!("file describes {} over {:?}", self.type_code, self.field)));
        }
        let g = ReflectionGroup::build(spec)?;
        let n = g.rank();
        if self.order != g.order() || self.degrees != g.degrees() || self.positive_roots.len() != g.num_reflections() {
            return Err(Error::Internal("stored group data differ from the catalogue".into()));
        }
        let psi = self.invariants.iter().map(|t| poly_from_json(n, spec.field, t)).collect::<Result<Vec<_>>>()?;
        let degrees_ok = psi.iter().map(Polynomial::degree).eq(g.degrees().iter().map(|&d| Some(d)));
        let invariant_ok = psi.iter().all(|p| g.simple_reflections().iter().all(|&s| &g.act_poly(s, p) == p));
        if !degrees_ok || !invariant_ok {
            return Err(Error::Internal("stored invariants are not invariant of the right degrees".into()));
        }
        let standard = self.standard_monomials.iter().map(|v| v.iter().map(|e| Monomial::from_exponents(e)).collect()).collect();
        let image = self
            .reduction
            .iter()
            .map(|per_var| {
                per_var
                    .iter()
                    .map(|rows| {
                        rows.iter()
                            .map(|r| r.iter().map(|(k, c)| Ok((*k, scalar_from_json(spec.field, c)?))).collect::<Result<SparseRow>>())
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let h = CoinvariantBasis::from_parts(n, spec.field, &psi, standard, image)?;
        Ok((g.with_invariants(psi), h))
    }
}

fn write_atomic(path: &Path, data: &GroupCacheFile) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(data)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Older-format files for the same group.
fn stale_files(dir: &Path, spec: GroupSpec) -> Vec<PathBuf> {
    let current = file_name(spec);
    let prefix = current.rsplit_once("-v").map_or(current.clone(), |(p, _)| format!("{p}-v"));
    fs::read_dir(dir)
        .into_iter()
        .flatten()
        .flatten()
        .map(|e| e.path())
        .filter(|p| {
            p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with(&prefix) && n.ends_with(".json") && n != current)
        })
        .collect()
}

/// Loads a group from `dir`, building and writing the file when it is
/// absent, unreadable or from another format version.
pub fn load_or_build(dir: &Path, spec: GroupSpec) -> Result<(ReflectionGroup, CoinvariantBasis, CacheOutcome)> {
    let path = cache_path(dir, spec);
    let mut reason = None;
    for old in stale_files(dir, spec) {
        reason = Some(format!("removed {} (format version mismatch)", old.display()));
        fs::remove_file(old)?;
    }
    if path.exists() {
        let restored = fs::read(&path)
            .map_err(Error::from)
            .and_then(|b| serde_json::from_slice::<GroupCacheFile>(&b).map_err(Error::from))
            .and_then(|f| f.restore(spec));
        match restored {
            Ok((g, h)) => return Ok((g, h, CacheOutcome::Loaded)),
            Err(e) => reason = Some(format!("{}: {e}", path.display())),
        }
    }
    let g = ReflectionGroup::build(spec)?;
    let h = CoinvariantBasis::build(&g)?;
    fs::create_dir_all(dir)?;
    write_atomic(&path, &GroupCacheFile::from_group(&g, &h)?)?;
    let outcome = match reason {
        Some(r) => CacheOutcome::Rebuilt(r),
        None => CacheOutcome::Created,
    };
    Ok((g, h, outcome))
}

pub fn inspect(dir: &Path) -> Result<Vec<CacheEntry>> {
    let mut out = Vec::new();
    let Ok(rd) = fs::read_dir(dir) else {
        return Ok(out);
    };
    for e in rd.flatten() {
        let path = e.path();
        if path.extension().and_then(|x| x.to_str()) != Some("json") {
            continue;
        }
        let bytes = e.metadata()?.len();
        let Ok(f) = fs::read(&path).map_err(Error::from).and_then(|b| serde_json::from_slice::<GroupCacheFile>(&b).map_err(Error::from)) else {
            continue;
        };
        out.push(CacheEntry {
            file: path.file_name().unwrap().to_string_lossy().into_owned(),
            type_code: f.type_code,
            field: f.field.name().to_string(),
            format_version: f.format_version,
            order: f.order,
            roots: f.positive_roots.len(),
            bytes,
        });
    }
    out.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(out)
}

/// Removes cache files (all of them when `spec` is `None`); returns the count.
pub fn purge(dir: &Path, spec: Option<GroupSpec>) -> Result<usize> {
    let mut n = 0;
    for entry in inspect(dir)? {
        if spec.is_none_or(|s| s.code() == entry.type_code) {
            fs::remove_file(dir.join(&entry.file))?;
            n += 1;
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("refcov-cache-unit-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn a2_roundtrip() {
        let dir = tmp("a2");
        let spec: GroupSpec = "A2".parse().unwrap();
        let (_, h0, o) = load_or_build(&dir, spec).unwrap();
        assert_eq!(o, CacheOutcome::Created);
        let entries = inspect(&dir).unwrap();
        assert_eq!((entries.len(), entries[0].order, entries[0].roots), (1, 6, 3));
        let (g, h, o) = load_or_build(&dir, spec).unwrap();
        assert_eq!(o, CacheOutcome::Loaded);
        assert_eq!(h.dims(), h0.dims());
        let x = Polynomial::var(2, FieldId::Rational, 0);
        assert_eq!(h.normal_form(&x.pow(3)), h0.normal_form(&x.pow(3)));
        assert_eq!(g.basic_invariants().unwrap().len(), 2);
        assert_eq!(purge(&dir, None).unwrap(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn extension_field_roundtrip() {
        let dir = tmp("i25");
        let spec: GroupSpec = "I2(5)".parse().unwrap();
        let (g0, _, _) = load_or_build(&dir, spec).unwrap();
        let (g, _, o) = load_or_build(&dir, spec).unwrap();
        assert_eq!(o, CacheOutcome::Loaded);
        assert_eq!(g.basic_invariants().unwrap(), g0.basic_invariants().unwrap());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn version_mismatch_rebuilds() {
        let dir = tmp("ver");
        let spec: GroupSpec = "B2".parse().unwrap();
        load_or_build(&dir, spec).unwrap();
        let path = cache_path(&dir, spec);
        let mut f: GroupCacheFile = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        f.format_version = 0;
        fs::write(&path, serde_json::to_vec(&f).unwrap()).unwrap();
        let (_, _, o) = load_or_build(&dir, spec).unwrap();
        assert!(matches!(o, CacheOutcome::Rebuilt(_)));
        let (_, _, o) = load_or_build(&dir, spec).unwrap();
        assert_eq!(o, CacheOutcome::Loaded);
        fs::remove_dir_all(&dir).unwrap();
    }
}
