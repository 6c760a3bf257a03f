//! Checked-in expected outputs under `tests/golden`. Setting
//! `EVENTODIST_BLESS=1` rewrites them from the current build.

use std::fs;
use std::path::PathBuf;

pub const BLESS_ENV: &str = "EVENTODIST_BLESS";

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

/// Byte comparison against `tests/golden/<name>`.
pub fn check(name: &str, actual: &[u8]) -> Result<(), String> {
    let path = dir().join(name);
    if std::env::var_os(BLESS_ENV).is_some() {
        fs::write(&path, actual).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(());
    }
    let expected = fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!(
            "{name} differs from golden:\n--- expected\n{}\n--- actual\n{}",
            String::from_utf8_lossy(&expected),
            String::from_utf8_lossy(actual)
        ))
    }
}
