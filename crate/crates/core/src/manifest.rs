//! Run manifest: config snapshot, tool version and SHA-256 digests of every
//! input and output file, so a run directory can be checked and reproduced.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::engine::SimulationConfig;
use crate::{config, Error, Result};

pub const MANIFEST_FILE: &str = "manifest.txt";

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingArtifact(path.to_path_buf())
        } else {
            Error::io(path, e)
        }
    })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigestEntry {
    pub label: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub tool_version: String,
    pub created_utc: String,
    pub master_seed: u64,
    pub workers: usize,
    pub config_text: String,
    pub inputs: Vec<DigestEntry>,
    /// Paths relative to the run directory.
    pub outputs: Vec<DigestEntry>,
}

impl RunManifest {
    pub fn build(config: &SimulationConfig, run_dir: &Path, outputs: &[PathBuf]) -> Result<Self> {
        let inputs = config::input_files(config)
            .into_iter()
            .map(|(label, path)| {
                Ok(DigestEntry { label: label.into(), sha256: sha256_file(&path)?, path: path.display().to_string() })
            })
            .collect::<Result<_>>()?;
        let outputs = outputs
            .iter()
            .map(|p| {
                let rel = p.strip_prefix(run_dir).unwrap_or(p).display().to_string();
                Ok(DigestEntry { label: rel.clone(), path: rel, sha256: sha256_file(p)? })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            created_utc: chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            master_seed: config.master_seed,
            workers: config.workers,
            config_text: config::to_text(config),
            inputs,
            outputs,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# lsa-sim run manifest\n");
        let _ = writeln!(s, "tool_version = {}", self.tool_version);
        let _ = writeln!(s, "created_utc = {}", self.created_utc);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(s, "workers = {}", self.workers);
        s.push_str("[config]\n");
        s.push_str(&self.config_text);
        s.push_str("[inputs]\n");
        for e in &self.inputs {
            let _ = writeln!(s, "{} = {} {}", e.label, e.sha256, e.path);
        }
        s.push_str("[outputs]\n");
        for e in &self.outputs {
            let _ = writeln!(s, "{} = {}", e.path, e.sha256);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Config(format!("manifest: {m}"));
        let mut section = "";
        let mut header = std::collections::BTreeMap::new();
        let mut config_text = String::new();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for line in text.lines() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = match name {
                    "config" => "config",
                    "inputs" => "inputs",
                    "outputs" => "outputs",
                    other => return Err(bad(format!("unknown section `{other}`"))),
                };
                continue;
            }
            if section == "config" {
                config_text.push_str(line);
                config_text.push('\n');
                continue;
            }
            let (k, v) = line.split_once(" = ").ok_or_else(|| bad(format!("malformed line `{line}`")))?;
            match section {
                "" => {
                    header.insert(k.to_string(), v.to_string());
                }
                "inputs" => {
                    let (sha, path) = v.split_once(' ').ok_or_else(|| bad(format!("malformed input `{line}`")))?;
                    inputs.push(DigestEntry { label: k.into(), path: path.into(), sha256: sha.into() });
                }
                _ => outputs.push(DigestEntry { label: k.into(), path: k.into(), sha256: v.into() }),
            }
        }
        let field = |k: &str| header.get(k).cloned().ok_or_else(|| bad(format!("missing `{k}`")));
        Ok(Self {
            tool_version: field("tool_version")?,
            created_utc: field("created_utc")?,
            master_seed: field("master_seed")?.parse().map_err(|_| bad("bad master_seed".into()))?,
            workers: field("workers")?.parse().map_err(|_| bad("bad workers".into()))?,
            config_text,
            inputs,
            outputs,
        })
    }

    pub fn read(run_dir: &Path) -> Result<Self> {
        let path = run_dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::MissingArtifact(path.clone())
            } else {
                Error::io(&path, e)
            }
        })?;
        Self::parse(&text)
    }

    pub fn write(&self, run_dir: &Path) -> Result<PathBuf> {
        let path = run_dir.join(MANIFEST_FILE);
        fs::write(&path, self.to_text()).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// The recorded configuration.
    pub fn config(&self) -> Result<SimulationConfig> {
        let mut c = config::parse(&self.config_text, Path::new("/"))?;
        c.workers = self.workers;
        Ok(c)
    }

    /// Recompute every digest and compare with the recorded ones.
    pub fn verify(&self, run_dir: &Path) -> Result<()> {
        self.config()?;
        let inputs = self.inputs.iter().map(|e| (e, PathBuf::from(&e.path)));
        let outputs = self.outputs.iter().map(|e| (e, run_dir.join(&e.path)));
        for (entry, path) in inputs.chain(outputs) {
            let found = sha256_file(&path)?;
            if found != entry.sha256 {
                return Err(Error::DigestMismatch { path: entry.path.clone(), expected: entry.sha256.clone(), found });
            }
        }
        Ok(())
    }
}
