//! File formats: shadow JSON-lines, observable amplitude / matrix text files
//! and per-basis circuit exports.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::mub::MubFamily;
use crate::shadow::{ShadowMeta, ShadowSet, SnapshotRecord};
use crate::sim::{DensityOp, StateVector, C64};

#[derive(Serialize, Deserialize)]
struct RecordLine {
    j: u64,
    b: String,
}

/// Header line, then one `{"j":…,"b":"…"}` line per record.
pub fn write_shadow_jsonl<W: Write>(shadow: &ShadowSet, mut w: W) -> Result<()> {
    serde_json::to_writer(&mut w, &shadow.meta)?;
    w.write_all(b"\n")?;
    for r in &shadow.records {
        serde_json::to_writer(&mut w, &RecordLine { j: r.rotation, b: r.outcome.to_string() })?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_shadow_jsonl<R: BufRead>(r: R) -> Result<ShadowSet> {
    let mut lines = r.lines();
    let header = lines.next().ok_or(Error::EmptyShadow)??;
    let meta: ShadowMeta = serde_json::from_str(&header)?;
    let mut records = Vec::with_capacity(meta.shots);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RecordLine = serde_json::from_str(&line)?;
        let outcome: BitVector = rec.b.parse()?;
        if outcome.len() != meta.n {
            return Err(Error::DimensionMismatch { expected: meta.n, found: outcome.len() });
        }
        records.push(SnapshotRecord { ensemble: meta.ensemble, rotation: rec.j, outcome });
    }
    if records.len() != meta.shots {
        return Err(Error::Parse(format!(
            "header declares N = {} but file holds {} records",
            meta.shots,
            records.len()
        )));
    }
    Ok(ShadowSet { meta, records })
}

pub fn save_shadow(shadow: &ShadowSet, path: &Path) -> Result<()> {
    let f = fs::File::create(path)?;
    write_shadow_jsonl(shadow, std::io::BufWriter::new(f))
}

pub fn load_shadow(path: &Path) -> Result<ShadowSet> {
    read_shadow_jsonl(std::io::BufReader::new(fs::File::open(path)?))
}

fn parse_f64(tok: &str) -> Result<f64> {
    tok.parse().map_err(|_| Error::Parse(format!("not a number: {tok:?}")))
}

fn data_lines<R: BufRead>(r: R) -> impl Iterator<Item = std::io::Result<String>> {
    r.lines().filter(|l| match l {
        Ok(s) => {
            let t = s.trim();
            !t.is_empty() && !t.starts_with('#')
        }
        Err(_) => true,
    })
}

/// One `re im` pair per line, 2ⁿ lines in lexicographic basis order.
pub fn read_amplitudes<R: BufRead>(r: R) -> Result<StateVector> {
    let mut amps = Vec::new();
    for line in data_lines(r) {
        let line = line?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse(format!("expected `re im`, got {line:?}")));
        }
        amps.push(C64::new(parse_f64(toks[0])?, parse_f64(toks[1])?));
    }
    StateVector::new(amps)
}

pub fn write_amplitudes<W: Write>(state: &StateVector, mut w: W) -> Result<()> {
    for a in state.amps() {
        writeln!(w, "{:e} {:e}", a.re, a.im)?;
    }
    Ok(())
}

/// 2ⁿ rows, each holding 2ⁿ `re im` pairs.
pub fn read_dense_matrix<R: BufRead>(r: R) -> Result<DensityOp> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for line in data_lines(r) {
        let line = line?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !toks.len().is_multiple_of(2) {
            return Err(Error::Parse("matrix row has an odd number of reals".into()));
        }
        let row = toks
            .chunks(2)
            .map(|c| Ok(C64::new(parse_f64(c[0])?, parse_f64(c[1])?)))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let d = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: bad.len() });
    }
    DensityOp::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitFormat {
    Text,
    Qasm,
}

impl std::str::FromStr for CircuitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" | "txt" => Ok(Self::Text),
            "qasm" => Ok(Self::Qasm),
            _ => Err(Error::Parse(format!("unknown circuit format {s:?}"))),
        }
    }
}

/// Writes `basis_<j>.txt|qasm` for every j ≥ 1 and a `basis_<0>.identity`
/// marker for the computational basis. Returns the written paths.
pub fn write_circuits(fam: &MubFamily, dir: &Path, format: CircuitFormat) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let width = fam.num_bases().to_string().len();
    let mut paths = Vec::with_capacity(fam.num_bases());
    let marker = dir.join(format!("basis_{:0width$}.identity", 0));
    fs::write(&marker, "# basis 0: computational basis, no rotation\n")?;
    paths.push(marker);
    for j in 1..fam.num_bases() {
        let c = fam.emit_circuit(j)?;
        let (ext, body) = match format {
            CircuitFormat::Text => ("txt", c.to_text()),
            CircuitFormat::Qasm => ("qasm", c.to_qasm()),
        };
        let path = dir.join(format!("basis_{j:0width$}.{ext}"));
        fs::write(&path, body)?;
        paths.push(path);
    }
    Ok(paths)
}
