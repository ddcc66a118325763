//! Results cache keyed by the SHA-256 of the resolved config and the version.

use std::path::PathBuf;

use sha2::{Digest, Sha256};

pub const VERSION: &str = concat!("heightgap-cli/", env!("CARGO_PKG_VERSION"));

pub fn key(resolved_toml: &str) -> String {
    let mut h = Sha256::new();
    h.update(resolved_toml.as_bytes());
    h.update(b"\n");
    h.update(VERSION.as_bytes());
    format!("{:x}", h.finalize())
}

pub fn dir() -> PathBuf {
    if let Some(d) = std::env::var_os("HEIGHTGAP_CACHE_DIR") {
        return PathBuf::from(d);
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(d).join("heightgap");
    }
    if let Some(h) = std::env::var_os("HOME") {
        return PathBuf::from(h).join(".cache").join("heightgap");
    }
    PathBuf::from(".heightgap-cache")
}

pub struct Entry {
    pub json: String,
    pub csv: Option<String>,
    pub code: i32,
}

pub fn load(key: &str) -> Option<Entry> {
    let d = dir();
    let json = std::fs::read_to_string(d.join(format!("{key}.json"))).ok()?;
    let code = std::fs::read_to_string(d.join(format!("{key}.code"))).ok()?.trim().parse().ok()?;
    let csv = std::fs::read_to_string(d.join(format!("{key}.csv"))).ok();
    Some(Entry { json, csv, code })
}

pub fn store(key: &str, e: &Entry) -> std::io::Result<()> {
    let d = dir();
    std::fs::create_dir_all(&d)?;
    if let Some(c) = &e.csv {
        std::fs::write(d.join(format!("{key}.csv")), c)?;
    }
    std::fs::write(d.join(format!("{key}.json")), &e.json)?;
    // written last: its presence marks a complete entry
    std::fs::write(d.join(format!("{key}.code")), e.code.to_string())
}
