//! Versioned JSON persistence with atomic writes.
//!
//! Every file is an envelope `{"kind", "version", "data"}`; loading checks
//! kind and version before touching the payload.

use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::SvmModel;
use crate::identification::{Gallery, Report};
use crate::workbench::{DatasetManifest, RunConfig};

pub trait Persist: Serialize + DeserializeOwned {
    const KIND: &'static str;
    const VERSION: u32;
}

impl Persist for Gallery {
    const KIND: &'static str = "gallery";
    const VERSION: u32 = 1;
}

impl Persist for SvmModel {
    const KIND: &'static str = "svm_model";
    const VERSION: u32 = 1;
}

impl Persist for Report {
    const KIND: &'static str = "report";
    const VERSION: u32 = 1;
}

impl Persist for RunConfig {
    const KIND: &'static str = "run_config";
    const VERSION: u32 = 1;
}

impl Persist for DatasetManifest {
    const KIND: &'static str = "dataset_manifest";
    const VERSION: u32 = 1;
}

#[derive(Serialize)]
struct EnvelopeOut<'a, T> {
    kind: &'a str,
    version: u32,
    data: &'a T,
}

#[derive(Deserialize)]
struct Header {
    kind: String,
    version: u32,
}

#[derive(Deserialize)]
struct EnvelopeIn<T> {
    data: T,
}

/// Write `bytes` to a sibling temp file, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn to_bytes<T: Persist>(obj: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&EnvelopeOut {
        kind: T::KIND,
        version: T::VERSION,
        data: obj,
    })
    .expect("persistable types serialize infallibly");
    out.push(b'\n');
    out
}

pub fn from_bytes<T: Persist>(bytes: &[u8], path: &Path) -> Result<T> {
    let parse_err = |e: serde_json::Error| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    };
    let header: Header = serde_json::from_slice(bytes).map_err(parse_err)?;
    if header.kind != T::KIND {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            column: 1,
            msg: format!("expected a {} file, found kind `{}`", T::KIND, header.kind),
        });
    }
    if header.version != T::VERSION {
        return Err(Error::SchemaVersionMismatch {
            kind: T::KIND.to_string(),
            found: header.version,
            expected: T::VERSION,
        });
    }
    let env: EnvelopeIn<T> = serde_json::from_slice(bytes).map_err(parse_err)?;
    Ok(env.data)
}

pub fn save<T: Persist>(obj: &T, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &to_bytes(obj))
}

pub fn load<T: Persist>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    from_bytes(&bytes, path)
}
