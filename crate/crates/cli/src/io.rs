//! CSV and JSON artifacts. Every CSV starts with `#` comment lines carrying
//! the config hash and one hash per code.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use surfcoh_core::sweep::PointResult;
use surfcoh_core::SurfaceCode;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn json_hash<T: Serialize>(value: &T) -> Result<String> {
    Ok(sha256_hex(&serde_json::to_vec(value)?))
}

pub fn code_hash(code: &SurfaceCode) -> Result<String> {
    json_hash(code)
}

/// Header comment lines for a CSV artifact.
pub struct Provenance {
    pub config_hash: String,
    pub codes: Vec<(String, usize, String)>,
}

impl Provenance {
    fn write_to(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "# config_sha256={}", self.config_hash)?;
        for (family, size, hash) in &self.codes {
            writeln!(w, "# code family={family} size={size} sha256={hash}")?;
        }
        Ok(())
    }
}

pub fn write_csv<T: Serialize>(path: &Path, prov: &Provenance, rows: &[T]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    prov.write_to(&mut w)?;
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_results(path: &Path) -> Result<Vec<PointResult>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let mut out = Vec::new();
    for r in rdr.deserialize() {
        out.push(r.with_context(|| format!("malformed row in {}", path.display()))?);
    }
    Ok(out)
}

/// The `# ...` header lines of a CSV file.
pub fn read_header(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut lines = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if !line.starts_with('#') {
            break;
        }
        lines.push(line);
    }
    Ok(lines)
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("cannot write {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

pub fn read_code(path: &Path) -> Result<SurfaceCode> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("{} is not a code JSON", path.display()))?)
}
