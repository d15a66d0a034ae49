//! On-disk cache of minimized curved complexes `FY(β)` as canonical JSON.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};
use ykr::algebra::{Mono, PolyMat};
use ykr::braid::BraidWord;
use ykr::soergel::Bimodule;
use ykr::yify::{curved_gaussian_eliminate, fy_crossing, tensor_y, YComplex};

/// Embedded in every entry; entries with another version are recomputed.
pub const PIPELINE_VERSION: &str = concat!("fy-", env!("CARGO_PKG_VERSION"), "-1");

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "YKR_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    braid: String,
    n: usize,
    w: Vec<usize>,
    k_min: i32,
    chain: Vec<Bimodule>,
    delta: Vec<DeltaEntry>,
}

#[derive(Serialize, Deserialize)]
struct DeltaEntry {
    y: Vec<u32>,
    k: i32,
    map: PolyMat,
}

impl Entry {
    fn of(key: &str, y: &YComplex) -> Entry {
        Entry {
            version: PIPELINE_VERSION.to_string(),
            braid: key.to_string(),
            n: y.n,
            w: y.w.clone(),
            k_min: y.k_min,
            chain: y.chain.clone(),
            delta: y.delta.iter().map(|((m, k), f)| DeltaEntry { y: m.exps(y.n), k: *k, map: f.clone() }).collect(),
        }
    }

    fn complex(self) -> YComplex {
        YComplex {
            n: self.n,
            w: self.w,
            k_min: self.k_min,
            chain: self.chain,
            delta: self.delta.into_iter().map(|d| ((Mono::from_exps(&d.y), d.k), d.map)).collect(),
        }
    }
}

/// Counters reported by `--stats`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub hits: usize,
    pub misses: usize,
    pub stale: usize,
    pub corrupt: usize,
    pub stored: usize,
    /// Tensor-and-eliminate steps actually performed.
    pub tensor_steps: usize,
}

impl Stats {
    pub fn lines(&self) -> String {
        format!(
            "cache hits: {}\ncache misses: {}\ncache stale: {}\ncache corrupt: {}\ncache stored: {}\ntensor steps: {}\n",
            self.hits, self.misses, self.stale, self.corrupt, self.stored, self.tensor_steps
        )
    }
}

/// A cache rooted at an optional directory; `None` disables caching.
pub struct Cache {
    pub dir: Option<PathBuf>,
    pub stats: Stats,
}

/// File-name-safe, injective encoding of a canonical braid text.
pub fn file_name(key: &str) -> String {
    let mut s = String::from("fy-");
    for b in key.bytes() {
        if b.is_ascii_alphanumeric() {
            s.push(b as char);
        } else {
            s.push_str(&format!("_{b:02x}"));
        }
    }
    s.push_str(".json");
    s
}

fn build(b: &BraidWord, stats: &mut Stats) -> YComplex {
    let mut c = YComplex::unit(b.n);
    for &(i, s) in &b.letters {
        c = curved_gaussian_eliminate(&tensor_y(&c, &fy_crossing(b.n, i, s)).expect("same strand count"));
        stats.tensor_steps += 1;
    }
    c
}

enum Load {
    Hit(YComplex),
    Missing,
    Stale,
    Corrupt(String),
}

fn load(path: &Path, key: &str) -> Load {
    let Ok(text) = fs::read_to_string(path) else { return Load::Missing };
    let entry: Entry = match serde_json::from_str(&text) {
        Ok(e) => e,
        Err(e) => return Load::Corrupt(e.to_string()),
    };
    if entry.version != PIPELINE_VERSION {
        return Load::Stale;
    }
    if entry.braid != key {
        return Load::Corrupt(format!("entry is for {:?}", entry.braid));
    }
    let y = entry.complex();
    match y.validate() {
        Ok(()) => Load::Hit(y),
        Err(e) => Load::Corrupt(e),
    }
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache { dir, stats: Stats::default() }
    }

    /// Directory from the flag, else from the environment.
    pub fn resolve_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
        flag.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    /// `FY(β)`, loaded when a valid entry exists, otherwise built and stored.
    pub fn fy(&mut self, b: &BraidWord) -> YComplex {
        let key = b.to_string();
        let Some(dir) = self.dir.clone() else {
            self.stats.misses += 1;
            return build(b, &mut self.stats);
        };
        let path = dir.join(file_name(&key));
        match load(&path, &key) {
            Load::Hit(y) => {
                self.stats.hits += 1;
                return y;
            }
            Load::Missing => self.stats.misses += 1,
            Load::Stale => self.stats.stale += 1,
            Load::Corrupt(why) => {
                self.stats.corrupt += 1;
                eprintln!("warning: cache entry {} is invalid ({why}); recomputing", path.display());
            }
        }
        let y = build(b, &mut self.stats);
        match store(&dir, &path, &key, &y) {
            Ok(()) => self.stats.stored += 1,
            Err(e) => eprintln!("warning: cannot write cache entry {}: {e}", path.display()),
        }
        y
    }
}

fn store(dir: &Path, path: &Path, key: &str, y: &YComplex) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let text = serde_json::to_string(&Entry::of(key, y)).expect("complex serializes");
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, text)?;
    fs::rename(tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ykr::braid::parse_braid;
    use ykr::yify::fy;

    fn tempdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("ykr-cache-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn round_trip_is_identical() {
        let dir = tempdir("rt");
        let b = parse_braid("FT(2,3)").unwrap();
        let mut c = Cache::new(Some(dir.clone()));
        let first = c.fy(&b);
        assert_eq!(c.stats.stored, 1);
        let mut c2 = Cache::new(Some(dir.clone()));
        let second = c2.fy(&b);
        assert_eq!(c2.stats.hits, 1);
        assert_eq!(c2.stats.tensor_steps, 0);
        assert_eq!(first, second);
        assert_eq!(second, fy(&b));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn corrupt_entry_is_recomputed() {
        let dir = tempdir("bad");
        let b = parse_braid("s1^2").unwrap();
        Cache::new(Some(dir.clone())).fy(&b);
        let path = dir.join(file_name(&b.to_string()));
        let text = fs::read_to_string(&path).unwrap();
        // Flip a matrix entry so the curvature identity fails.
        let broken = text.replacen("\"1/1\"", "\"7/1\"", 1);
        assert_ne!(text, broken);
        fs::write(&path, broken).unwrap();
        let mut c = Cache::new(Some(dir.clone()));
        let y = c.fy(&b);
        assert_eq!(c.stats.corrupt, 1);
        assert_eq!(y, fy(&b));
        fs::write(&path, "not json").unwrap();
        let mut c = Cache::new(Some(dir.clone()));
        c.fy(&b);
        assert_eq!(c.stats.corrupt, 1);
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn file_names_are_injective() {
        assert_ne!(file_name("@2 s1^2"), file_name("@2 s1_2"));
        assert_eq!(file_name("@1"), "fy-_401.json");
    }
}
