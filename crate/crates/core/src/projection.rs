//! The squarefreed iterated resultant and Han's projection operator.
//!
//! One elimination step replaces `F` by `Res(s, ds/dv, v)` where `s` is the
//! squarefree part of `F`; when `s` does not involve `v` the input is returned
//! unchanged. Folding the step over an order gives the iterated resultant.
//! Han's projection over an order `[y1, .., ym]` is the gcd over `i` of one more
//! step in `yi` applied to the projection over the order with `yi` removed.
//!
//! Results are memoized in a [`ProjCache`], optionally persisted to disk.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::euclid::{gcd_all, primitive_part, sqrfree_part, NormalizedPoly};
use crate::poly::{Poly, VarTable};
use crate::resultant::resultant;

/// Ordered list of distinct variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjOrder(Vec<String>);

impl ProjOrder {
    pub fn new<I, S>(vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        Ok(ProjOrder(vars))
    }

    /// Parses a comma separated list such as `x,y,z`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('[').trim_end_matches(']');
        if text.trim().is_empty() {
            return Ok(ProjOrder(Vec::new()));
        }
        Self::new(text.split(',').map(|s| s.trim().to_string()))
    }

    pub fn vars(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, v: &str) -> Option<usize> {
        self.0.iter().position(|x| x == v)
    }

    /// The order with entry `i` deleted.
    pub fn without(&self, i: usize) -> ProjOrder {
        let mut v = self.0.clone();
        v.remove(i);
        ProjOrder(v)
    }

    /// Checks that every variable of the order is known to `table`.
    pub fn check_against(&self, table: &VarTable) -> Result<()> {
        for v in &self.0 {
            if table.index_of(v).is_none() {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ProjOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpTag {
    BprojStep,
    Hproj,
}

impl OpTag {
    pub fn as_str(self) -> &'static str {
        match self {
            OpTag::BprojStep => "bproj-step",
            OpTag::Hproj => "hproj",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjCacheKey {
    pub tag: OpTag,
    /// Hex SHA-256 of the canonical text of the input polynomial.
    pub content_hash: String,
    /// The eliminated variable or the comma separated order.
    pub arg: String,
}

impl ProjCacheKey {
    pub fn new(tag: OpTag, input: &Poly, arg: impl Into<String>) -> Self {
        let digest = Sha256::digest(input.canonical_string().as_bytes());
        ProjCacheKey {
            tag,
            content_hash: hex::encode(digest),
            arg: arg.into(),
        }
    }

    pub fn file_stem(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.tag.as_str().as_bytes());
        h.update([0u8]);
        h.update(self.content_hash.as_bytes());
        h.update([0u8]);
        h.update(self.arg.as_bytes());
        hex::encode(h.finalize())
    }
}

impl fmt::Display for ProjCacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.tag.as_str(), &self.content_hash[..12], self.arg)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub disk_hits: u64,
    pub misses: u64,
    pub verified: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiskStats {
    pub entries: Vec<(String, usize)>,
    pub bytes: u64,
    pub index_lines: usize,
}

const INDEX_FILE: &str = "index.tsv";

/// Memo table for projection results, optionally backed by a directory:
/// `<dir>/<op-tag>/<hex>.poly` holds the canonical text of one result and
/// `<dir>/index.tsv` maps keys to files.
#[derive(Debug, Default)]
pub struct ProjCache {
    memory: Mutex<HashMap<ProjCacheKey, Poly>>,
    touched: Mutex<HashSet<ProjCacheKey>>,
    stats: Mutex<CacheStats>,
    index_lock: Mutex<()>,
    dir: Option<PathBuf>,
    verify: bool,
}

impl ProjCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn on_disk(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ProjCache {
            dir: Some(dir),
            ..Self::default()
        })
    }

    /// Recompute on every hit and fail if the stored value differs.
    pub fn with_verification(mut self, on: bool) -> Self {
        self.verify = on;
        self
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn stats(&self) -> CacheStats {
        self.stats.lock().unwrap().clone()
    }

    /// Number of distinct keys with the given tag requested so far.
    pub fn touched(&self, tag: OpTag) -> usize {
        self.touched.lock().unwrap().iter().filter(|k| k.tag == tag).count()
    }

    fn entry_path(&self, key: &ProjCacheKey) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(key.tag.as_str()).join(format!("{}.poly", key.file_stem())))
    }

    fn load(&self, key: &ProjCacheKey, vars: &VarTable) -> Result<Option<Poly>> {
        let Some(path) = self.entry_path(key) else {
            return Ok(None);
        };
        match fs::read_to_string(&path) {
            Ok(text) => Ok(Some(Poly::parse(text.trim(), Some(vars))?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn store(&self, key: &ProjCacheKey, value: &Poly) -> Result<()> {
        let Some(path) = self.entry_path(key) else {
            return Ok(());
        };
        let dir = path.parent().unwrap();
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".{}.{}.{:?}.tmp",
            key.file_stem(),
            std::process::id(),
            std::thread::current().id()
        ));
        fs::write(&tmp, format!("{}\n", value.canonical_string()))?;
        fs::rename(&tmp, &path)?;
        let _guard = self.index_lock.lock().unwrap();
        let mut index = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.dir.as_ref().unwrap().join(INDEX_FILE))?;
        let rel = format!("{}/{}.poly", key.tag.as_str(), key.file_stem());
        index.write_all(format!("{}\t{}\t{}\t{}\n", key.tag.as_str(), key.content_hash, key.arg, rel).as_bytes())?;
        Ok(())
    }

    /// Returns the cached value for `key`, computing and storing it on a miss.
    pub fn get_or_compute<F>(&self, key: ProjCacheKey, vars: &VarTable, compute: F) -> Result<Poly>
    where
        F: FnOnce() -> Result<Poly>,
    {
        self.touched.lock().unwrap().insert(key.clone());
        let cached = self.memory.lock().unwrap().get(&key).cloned();
        let (cached, from_disk) = match cached {
            Some(v) => (Some(v), false),
            None => (self.load(&key, vars)?, true),
        };
        if let Some(v) = cached {
            {
                let mut s = self.stats.lock().unwrap();
                s.hits += 1;
                if from_disk {
                    s.disk_hits += 1;
                }
            }
            if self.verify {
                let fresh = compute()?;
                if fresh.canonical_string() != v.canonical_string() {
                    return Err(Error::CacheMismatch(key.to_string()));
                }
                self.stats.lock().unwrap().verified += 1;
            }
            if from_disk {
                self.memory.lock().unwrap().insert(key, v.clone());
            }
            return Ok(v);
        }
        self.stats.lock().unwrap().misses += 1;
        let value = compute()?;
        self.store(&key, &value)?;
        self.memory.lock().unwrap().insert(key, value.clone());
        Ok(value)
    }

    /// Removes every cache file under `dir`.
    pub fn clear_dir(dir: &Path) -> Result<()> {
        for tag in [OpTag::BprojStep, OpTag::Hproj] {
            let d = dir.join(tag.as_str());
            if d.exists() {
                fs::remove_dir_all(&d)?;
            }
        }
        let index = dir.join(INDEX_FILE);
        if index.exists() {
            fs::remove_file(index)?;
        }
        Ok(())
    }

    pub fn disk_stats(dir: &Path) -> Result<DiskStats> {
        let mut stats = DiskStats::default();
        for tag in [OpTag::BprojStep, OpTag::Hproj] {
            let d = dir.join(tag.as_str());
            let mut count = 0;
            if d.exists() {
                for entry in fs::read_dir(&d)? {
                    let entry = entry?;
                    if entry.path().extension().is_some_and(|e| e == "poly") {
                        count += 1;
                        stats.bytes += entry.metadata()?.len();
                    }
                }
            }
            stats.entries.push((tag.as_str().to_string(), count));
        }
        let index = dir.join(INDEX_FILE);
        if index.exists() {
            stats.index_lines = fs::read_to_string(index)?.lines().count();
        }
        Ok(stats)
    }
}

/// Projection operators sharing one memo cache.
#[derive(Debug, Default)]
pub struct Projector {
    cache: ProjCache,
}

impl Projector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(cache: ProjCache) -> Self {
        Projector { cache }
    }

    pub fn cache(&self) -> &ProjCache {
        &self.cache
    }

    /// One elimination step in `v`.
    pub fn bproj_step(&self, f: &Poly, v: &str) -> Result<Poly> {
        let key = ProjCacheKey::new(OpTag::BprojStep, f, v);
        self.cache.get_or_compute(key, f.vars(), || bproj_step_uncached(f, v))
    }

    /// Left fold of [`Projector::bproj_step`] along `order`.
    pub fn bproj(&self, f: &Poly, order: &ProjOrder) -> Result<Poly> {
        let mut cur = f.clone();
        for (k, v) in order.vars().iter().enumerate() {
            if k > 0 && !cur.is_zero() {
                cur = primitive_part(&cur)?.into_inner();
            }
            cur = self.bproj_step(&cur, v)?;
        }
        Ok(cur)
    }

    /// The branch of Han's projection that eliminates `v` last.
    pub fn hproj_branch(&self, f: &Poly, order: &ProjOrder, v: &str) -> Result<Poly> {
        let i = order
            .position(v)
            .ok_or_else(|| Error::VariableNotInOrder(v.to_string()))?;
        let sub = self.hproj(f, &order.without(i))?;
        self.bproj_step(&sub, v)
    }

    /// Han's projection: normalized gcd of all branches.
    pub fn hproj(&self, f: &Poly, order: &ProjOrder) -> Result<NormalizedPoly> {
        if f.is_zero() {
            return Ok(gcd_all([f]));
        }
        if order.is_empty() {
            return primitive_part(f);
        }
        let key = ProjCacheKey::new(OpTag::Hproj, f, order.vars().join(","));
        let value = self.cache.get_or_compute(key, f.vars(), || {
            let branches = order
                .vars()
                .par_iter()
                .map(|v| self.hproj_branch(f, order, v))
                .collect::<Result<Vec<_>>>()?;
            Ok(gcd_all(branches.iter()).into_inner())
        })?;
        primitive_part(&value)
    }
}

fn bproj_step_uncached(f: &Poly, v: &str) -> Result<Poly> {
    let s = sqrfree_part(f);
    if s.degree(v).unwrap_or(0) == 0 {
        return Ok(f.clone());
    }
    let ds = s.derivative(v)?;
    resultant(&s, &ds, v)
}

pub fn bproj_step(f: &Poly, v: &str) -> Result<Poly> {
    Projector::new().bproj_step(f, v)
}

pub fn bproj(f: &Poly, order: &ProjOrder) -> Result<Poly> {
    Projector::new().bproj(f, order)
}

pub fn hproj_branch(f: &Poly, order: &ProjOrder, v: &str) -> Result<Poly> {
    Projector::new().hproj_branch(f, order, v)
}

pub fn hproj(f: &Poly, order: &ProjOrder) -> Result<NormalizedPoly> {
    Projector::new().hproj(f, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tbl() -> VarTable {
        VarTable::new(["x", "y", "z", "a", "b", "c", "d", "e", "f", "k"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, Some(&tbl())).unwrap()
    }

    #[test]
    fn single_steps() {
        assert_eq!(bproj_step(&p("x^2 - 1"), "x").unwrap(), p("-4"));
        let f = p("x - 1").pow(2) * p("x + 2");
        assert_eq!(bproj_step(&f, "x").unwrap(), p("-9"));
        assert_eq!(bproj_step(&p("y^2 + 1"), "x").unwrap(), p("y^2 + 1"));
    }

    #[test]
    fn folds() {
        let f = p("x^2 - y^2");
        assert_eq!(bproj(&f, &ProjOrder::new::<_, &str>([]).unwrap()).unwrap(), f);
        assert_eq!(bproj(&f, &ProjOrder::parse("x").unwrap()).unwrap(), p("-4*y^2"));
    }

    #[test]
    fn branch_recursion() {
        let f = p("x^2*y + y^3 - x*y + 2");
        let o1 = ProjOrder::parse("x").unwrap();
        assert_eq!(hproj_branch(&f, &o1, "x").unwrap(), bproj_step(&f, "x").unwrap());
        let o2 = ProjOrder::parse("x1,x2").unwrap();
        assert!(matches!(hproj_branch(&f, &o2, "x"), Err(Error::VariableNotInOrder(_))));
        let o = ProjOrder::parse("x,y").unwrap();
        let left = hproj_branch(&f, &o, "x").unwrap();
        let inner = hproj(&f, &ProjOrder::parse("y").unwrap()).unwrap();
        assert_eq!(left, bproj_step(&inner, "x").unwrap());
    }

    #[test]
    fn ternary_quadratic_example() {
        let f = p("a*x^2 + b*x*y + c*y^2 + d*x*z + e*y*z + f*z^2");
        let h = hproj(&f, &ProjOrder::parse("x,y,z").unwrap()).unwrap();
        let expect = p("4*a*c*f - a*e^2 - b^2*f + b*d*e - c*d^2");
        assert!(h.as_poly() == &expect || h.as_poly() == &-&expect, "{h}");
    }

    #[test]
    fn remark_polynomial_projects_to_one() {
        let f = p("x*y + y^2 + x*z + y*z + k*z^2");
        let order = ProjOrder::parse("x,y,z").unwrap();
        assert!(hproj(&f, &order).unwrap().is_one());
    }

    #[test]
    fn empty_order_is_primitive_part() {
        let f = p("-6*x^2 + 4*y");
        assert_eq!(
            hproj(&f, &ProjOrder::parse("").unwrap()).unwrap(),
            primitive_part(&f).unwrap()
        );
    }

    #[test]
    fn memo_touches_every_suborder_once() {
        let f = p("a*x^2 + b*x*y + c*y^2 + d*x*z + e*y*z + f*z^2");
        let pr = Projector::new();
        pr.hproj(&f, &ProjOrder::parse("x,y,z").unwrap()).unwrap();
        assert_eq!(pr.cache().touched(OpTag::Hproj), 7);
    }

    #[test]
    fn disk_cache_round_trip_and_verification() {
        let dir = tempfile::tempdir().unwrap();
        let f = p("x^3 - 3*x*y + y^2 + z");
        let order = ProjOrder::parse("x,y").unwrap();
        let first = {
            let pr = Projector::with_cache(ProjCache::on_disk(dir.path()).unwrap());
            pr.hproj(&f, &order).unwrap()
        };
        let stats = ProjCache::disk_stats(dir.path()).unwrap();
        assert!(stats.index_lines > 0);
        let pr = Projector::with_cache(ProjCache::on_disk(dir.path()).unwrap().with_verification(true));
        let second = pr.hproj(&f, &order).unwrap();
        assert_eq!(first, second);
        assert!(pr.cache().stats().disk_hits > 0);
        assert!(pr.cache().stats().verified > 0);

        // corrupt one stored entry: verification must catch it
        let key = ProjCacheKey::new(OpTag::Hproj, &f, "x,y");
        let path = dir.path().join("hproj").join(format!("{}.poly", key.file_stem()));
        fs::write(&path, "x + 12345\n").unwrap();
        let pr = Projector::with_cache(ProjCache::on_disk(dir.path()).unwrap().with_verification(true));
        assert!(matches!(pr.hproj(&f, &order), Err(Error::CacheMismatch(_))));

        ProjCache::clear_dir(dir.path()).unwrap();
        let cleared = ProjCache::disk_stats(dir.path()).unwrap();
        assert_eq!(cleared.bytes, 0);
    }
}
