//! Cache of generated point files, keyed by generator and parameters.
//!
//! Each entry is a point file plus a `.meta` sidecar of `key=value` lines
//! (`generator`, `params`, `format`, `count`, `sha256`).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use sha2::{Digest, Sha256};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "ZETADIM_CACHE_DIR";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Cache directory: flag, then environment, then config, then the user cache.
pub fn cache_dir(flag: Option<PathBuf>, config: Option<&str>) -> PathBuf {
    if let Some(p) = flag {
        return p;
    }
    if let Some(p) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    if let Some(p) = config {
        return PathBuf::from(p);
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(std::env::temp_dir);
    base.join("zetadim")
}

/// Sidecar metadata of a point file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meta {
    pub generator: String,
    pub params: String,
    pub format: String,
    pub count: usize,
    pub sha256: String,
}

impl Meta {
    pub fn render(&self) -> String {
        format!(
            "generator={}\nparams={}\nformat={}\ncount={}\nsha256={}\n",
            self.generator, self.params, self.format, self.count, self.sha256
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let kv: BTreeMap<&str, &str> = text
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .filter_map(|l| l.split_once('='))
            .collect();
        let get = |k: &str| kv.get(k).map(|v| v.to_string()).ok_or_else(|| anyhow!("metadata lacks `{k}`"));
        Ok(Meta {
            generator: get("generator")?,
            params: get("params")?,
            format: get("format")?,
            count: get("count")?.parse().context("metadata count")?,
            sha256: get("sha256")?,
        })
    }
}

pub fn sidecar_path(file: &Path) -> PathBuf {
    let mut name = file.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

pub struct Cache {
    pub dir: PathBuf,
}

pub enum Lookup {
    Hit(Vec<u8>, Meta),
    Miss,
    /// An entry exists but its checksum does not match its metadata.
    Corrupt,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    fn key(generator: &str, params: &str, format: &str) -> String {
        sha256_hex(format!("{generator}|{params}|{format}").as_bytes())[..24].to_string()
    }

    fn entry(&self, generator: &str, params: &str, format: &str) -> PathBuf {
        self.dir.join(format!("{}-{}.{format}", generator, Self::key(generator, params, format)))
    }

    pub fn lookup(&self, generator: &str, params: &str, format: &str) -> Lookup {
        let path = self.entry(generator, params, format);
        let (Ok(bytes), Ok(meta_text)) = (fs::read(&path), fs::read_to_string(sidecar_path(&path))) else {
            return Lookup::Miss;
        };
        match Meta::parse(&meta_text) {
            Ok(meta) if meta.sha256 == sha256_hex(&bytes) && meta.params == params => Lookup::Hit(bytes, meta),
            _ => Lookup::Corrupt,
        }
    }

    pub fn store(&self, bytes: &[u8], meta: &Meta) -> Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating cache {}", self.dir.display()))?;
        let path = self.entry(&meta.generator, &meta.params, &meta.format);
        fs::write(&path, bytes)?;
        fs::write(sidecar_path(&path), meta.render())?;
        Ok(())
    }

    /// Metadata of every entry, sorted by file name.
    pub fn list(&self) -> Result<Vec<(PathBuf, Meta)>> {
        let mut out = Vec::new();
        let Ok(entries) = fs::read_dir(&self.dir) else { return Ok(out) };
        for e in entries {
            let path = e?.path();
            if path.extension().and_then(|x| x.to_str()) == Some("meta") {
                if let Ok(meta) = Meta::parse(&fs::read_to_string(&path)?) {
                    out.push((path.with_extension(""), meta));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Removes every entry; returns how many point files were deleted.
    pub fn clear(&self) -> Result<usize> {
        let entries = self.list()?;
        for (path, _) in &entries {
            fs::remove_file(path).ok();
            fs::remove_file(sidecar_path(path)).ok();
        }
        Ok(entries.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn store_lookup_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().to_path_buf());
        let bytes = b"2\n3\n5\n".to_vec();
        let meta = Meta {
            generator: "primes".into(),
            params: "limit=5".into(),
            format: "csv".into(),
            count: 3,
            sha256: sha256_hex(&bytes),
        };
        assert!(matches!(cache.lookup("primes", "limit=5", "csv"), Lookup::Miss));
        cache.store(&bytes, &meta).unwrap();
        match cache.lookup("primes", "limit=5", "csv") {
            Lookup::Hit(b, m) => {
                assert_eq!(b, bytes);
                assert_eq!(m, meta);
            }
            _ => panic!("expected a hit"),
        }
        let (path, _) = &cache.list().unwrap()[0];
        fs::write(path, b"2\n3\n").unwrap();
        assert!(matches!(cache.lookup("primes", "limit=5", "csv"), Lookup::Corrupt));
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.list().unwrap().is_empty());
    }

    #[test]
    fn meta_round_trip() {
        let m = Meta { generator: "g".into(), params: "a=1,b=2".into(), format: "jsonl".into(), count: 4, sha256: "00".into() };
        assert_eq!(Meta::parse(&m.render()).unwrap(), m);
    }
}
