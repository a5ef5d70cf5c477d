//! Output plumbing: versioned JSON documents, CSV tables, run manifests.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use zerofree::quadrature::QuadratureSpec;
use zerofree::{DET_FLOOR_REL, HARNACK_FACTOR, SMALL_Z_CONSTANT};

use crate::CliError;

pub const MANIFEST_SCHEMA: &str = "zerofree.manifest.v1";

/// `{"schema": .., <key>: <body>}`.
pub struct Doc<'a, T> {
    pub schema: &'a str,
    pub key: &'a str,
    pub body: &'a T,
}

impl<T: Serialize> Serialize for Doc<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("schema", self.schema)?;
        map.serialize_entry(self.key, self.body)?;
        map.end()
    }
}

pub fn to_json<T: Serialize>(schema: &str, key: &str, body: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&Doc { schema, key, body })
        .map_err(|e| CliError::Io(format!("cannot serialize output: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
pub struct Constants {
    pub small_z_constant: f64,
    pub harnack_factor: f64,
    pub det_floor_rel: f64,
}

#[derive(Serialize)]
pub struct RunManifest<'a> {
    pub schema: &'static str,
    pub command: &'a str,
    /// Arguments after the program name, without `--out` and `--manifest`;
    /// replaying them reproduces every output file.
    pub args: &'a [String],
    pub constants: Constants,
    pub quadrature: QuadratureSpec,
    pub version: &'static str,
    pub outputs: Vec<String>,
    pub timestamp: u64,
}

#[derive(serde::Deserialize)]
pub struct StoredManifest {
    pub schema: String,
    pub args: Vec<String>,
}

/// Collects the files of one run and writes them, plus the manifest, to the
/// output directory. Without a directory, documents go to stdout.
pub struct Sink {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> Result<Self, CliError> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).map_err(|e| CliError::Io(format!("cannot create {}: {e}", d.display())))?;
        }
        Ok(Sink { dir, written: Vec::new() })
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    /// Writes `contents` to `<dir>/<name>`, or prints it when there is no
    /// output directory and `echo` is set.
    pub fn emit(&mut self, name: &str, contents: &str, echo: bool) -> Result<(), CliError> {
        match &self.dir {
            Some(d) => {
                write_file(&d.join(name), contents)?;
                self.written.push(name.to_string());
            }
            None if echo => print!("{contents}"),
            None => {}
        }
        Ok(())
    }

    pub fn finish(self, command: &str, args: &[String], q: &QuadratureSpec) -> Result<(), CliError> {
        let Some(d) = self.dir else {
            return Ok(());
        };
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|t| t.as_secs()).unwrap_or(0);
        let manifest = RunManifest {
            schema: MANIFEST_SCHEMA,
            command,
            args,
            constants: Constants {
                small_z_constant: SMALL_Z_CONSTANT,
                harnack_factor: HARNACK_FACTOR,
                det_floor_rel: DET_FLOOR_REL,
            },
            quadrature: *q,
            version: env!("CARGO_PKG_VERSION"),
            outputs: self.written,
            timestamp,
        };
        let mut s = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::Io(format!("cannot serialize manifest: {e}")))?;
        s.push('\n');
        write_file(&d.join("manifest.json"), &s)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn csv_string<F>(header: &[&str], fill: F) -> Result<String, CliError>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(format!("cannot write CSV: {e}"));
    w.write_record(header).map_err(io)?;
    fill(&mut w).map_err(io)?;
    let bytes = w.into_inner().map_err(|e| CliError::Io(format!("cannot write CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}
