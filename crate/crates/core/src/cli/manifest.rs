use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Record of one CLI run: resolved settings, input and output digests.
///
/// `args` is a complete argument list (without the program name) that
/// reproduces the run; all defaults are spelled out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub args: Vec<String>,
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

pub fn file_digest(path: &Path) -> Result<FileDigest> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

impl RunManifest {
    pub fn default_path(out: &Path) -> PathBuf {
        let mut name = out.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub(crate) fn build(
        command: &str,
        args: Vec<String>,
        config: serde_json::Value,
        inputs: &[&Path],
        output: Option<&Path>,
    ) -> Result<Self> {
        Ok(RunManifest {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            command: command.to_owned(),
            args,
            config,
            inputs: inputs.iter().map(|p| file_digest(p)).collect::<Result<_>>()?,
            outputs: output.map(file_digest).transpose()?.into_iter().collect(),
        })
    }

    pub(crate) fn record_stdout(&mut self, text: &str) {
        self.outputs.push(FileDigest {
            path: "<stdout>".into(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        });
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut json = serde_json::to_string_pretty(self).expect("manifest serializes");
        json.push('\n');
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| {
            Error::in_file(
                path,
                Error::Parse {
                    line: e.line(),
                    message: e.to_string(),
                },
            )
        })
    }
}
