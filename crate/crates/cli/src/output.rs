//! Buffered outputs written atomically together with a run manifest.

use std::fs;
use std::path::Path;

use heatctl_core::uncertainty::UniversalConstants;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// All files of one run, held in memory until every computation succeeded.
#[derive(Default)]
pub struct Bundle {
    files: Vec<(String, Vec<u8>)>,
}

impl Bundle {
    pub fn csv<R: Serialize>(&mut self, name: &str, rows: &[R]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| CliError::runtime(format!("{name}: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::runtime(format!("{name}: {e}")))?;
        self.files.push((name.to_string(), bytes));
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::runtime(format!("{name}: {e}")))?;
        bytes.push(b'\n');
        self.files.push((name.to_string(), bytes));
        Ok(())
    }

    /// A table whose columns are only known at run time.
    pub fn table(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::runtime(format!("{name}: {e}"));
        w.write_record(header).map_err(err)?;
        for r in rows {
            w.write_record(r).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::runtime(format!("{name}: {e}")))?;
        self.files.push((name.to_string(), bytes));
        Ok(())
    }

    fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Writes every file to a temporary name inside `dir`, then renames them
    /// all into place.
    fn commit(self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
        let pid = std::process::id();
        let mut staged = Vec::new();
        for (name, bytes) in &self.files {
            let tmp = dir.join(format!(".{name}.{pid}.tmp"));
            if let Err(e) = fs::write(&tmp, bytes) {
                for (t, _) in &staged {
                    let _ = fs::remove_file(t);
                }
                return Err(CliError::runtime(format!("cannot write {}: {e}", tmp.display())));
            }
            staged.push((tmp, dir.join(name)));
        }
        for (tmp, dest) in staged {
            fs::rename(&tmp, &dest)
                .map_err(|e| CliError::runtime(format!("cannot rename into {}: {e}", dest.display())))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    schema: u32,
    config_sha256: String,
    seed: u64,
    constants: &'a UniversalConstants,
    outputs: Vec<String>,
    summary: serde_json::Value,
}

/// Run metadata recorded in `manifest.json`.
pub struct RunInfo<'a> {
    pub command: &'a str,
    pub schema: u32,
    pub canonical_config: &'a str,
    pub seed: u64,
    pub constants: &'a UniversalConstants,
}

pub fn config_hash(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn finish(mut bundle: Bundle, info: RunInfo<'_>, summary: serde_json::Value, dir: &Path) -> Result<(), CliError> {
    let mut outputs = bundle.names();
    outputs.push("manifest.json".into());
    let manifest = Manifest {
        tool: "heatctl",
        version: env!("CARGO_PKG_VERSION"),
        command: info.command,
        schema: info.schema,
        config_sha256: config_hash(info.canonical_config),
        seed: info.seed,
        constants: info.constants,
        outputs,
        summary,
    };
    bundle.json("manifest.json", &manifest)?;
    bundle.commit(dir)
}
