//! Run output: `diagnostics.csv` plus one snapshot file per output step.
//!
//! 1-D snapshots are CSV with an `x` column followed by the state fields.
//! 2-D snapshots are binary: the magic bytes `EPDF`, four little-endian
//! `u64` (dim, nx, ny, field count), then each field as row-major
//! little-endian `f64` with `x` as the slow axis.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use epdiff_core::integrate::{DiagnosticsRecord, RunObserver, Snapshot};

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const DIAGNOSTICS_HEADER: &str = "step,t,hamiltonian,mass,momentum_x,momentum_y,max_speed,l2_m";
pub const MAGIC: &[u8; 4] = b"EPDF";

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// One `diagnostics.csv` row; undefined quantities are left blank.
pub fn diagnostics_row(r: &DiagnosticsRecord) -> String {
    format!(
        "{},{},{:e},{},{},{},{:e},{:e}",
        r.step,
        r.t,
        r.hamiltonian,
        opt(r.mass),
        opt(r.momentum.first().copied()),
        opt(r.momentum.get(1).copied()),
        r.max_speed,
        r.l2_m,
    )
}

pub fn snapshot_path(dir: &Path, snapshot: &Snapshot) -> PathBuf {
    let dim = snapshot.fields.first().map_or(1, |(_, f)| f.grid().dim());
    let ext = if dim == 1 { "csv" } else { "bin" };
    dir.join(format!("snapshot_{:06}.{ext}", snapshot.step))
}

pub fn write_snapshot_csv(w: &mut impl Write, snapshot: &Snapshot) -> io::Result<()> {
    let names: Vec<&str> = snapshot.fields.iter().map(|(n, _)| *n).collect();
    writeln!(w, "x,{}", names.join(","))?;
    let Some((_, first)) = snapshot.fields.first() else {
        return Ok(());
    };
    for (i, x) in first.grid().axis_coordinates(0).iter().enumerate() {
        write!(w, "{x}")?;
        for (_, f) in &snapshot.fields {
            write!(w, ",{:e}", f.values()[i])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_snapshot_bin(w: &mut impl Write, snapshot: &Snapshot) -> io::Result<()> {
    let grid = snapshot
        .fields
        .first()
        .map(|(_, f)| f.grid().clone())
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "snapshot without fields"))?;
    let sizes = grid.sizes();
    let header = [
        grid.dim(),
        sizes[0],
        sizes.get(1).copied().unwrap_or(1),
        snapshot.fields.len(),
    ];
    w.write_all(MAGIC)?;
    for v in header {
        w.write_all(&(v as u64).to_le_bytes())?;
    }
    for (_, f) in &snapshot.fields {
        for v in f.values() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Contents of a binary snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct BinarySnapshot {
    pub dim: usize,
    pub nx: usize,
    pub ny: usize,
    pub fields: Vec<Vec<f64>>,
}

pub fn read_snapshot_bin(r: &mut impl Read) -> io::Result<BinarySnapshot> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("not an EPDF snapshot"));
    }
    let mut word = [0u8; 8];
    let mut header = [0usize; 4];
    for h in &mut header {
        r.read_exact(&mut word)?;
        *h = usize::try_from(u64::from_le_bytes(word))
            .map_err(|_| bad("header value out of range"))?;
    }
    let [dim, nx, ny, count] = header;
    let points = nx
        .checked_mul(ny)
        .ok_or_else(|| bad("grid size overflows"))?;
    let mut fields = Vec::with_capacity(count);
    for _ in 0..count {
        let mut values = Vec::with_capacity(points);
        for _ in 0..points {
            r.read_exact(&mut word)?;
            values.push(f64::from_le_bytes(word));
        }
        fields.push(values);
    }
    Ok(BinarySnapshot {
        dim,
        nx,
        ny,
        fields,
    })
}

/// Observer that writes the run output into a directory.
///
/// The first I/O error stops further writing and is returned by
/// [`OutputWriter::finish`].
pub struct OutputWriter {
    dir: PathBuf,
    diagnostics: BufWriter<File>,
    snapshots: Vec<PathBuf>,
    error: Option<io::Error>,
}

impl OutputWriter {
    pub fn create(dir: &Path) -> io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let mut diagnostics = BufWriter::new(File::create(dir.join(DIAGNOSTICS_FILE))?);
        writeln!(diagnostics, "{DIAGNOSTICS_HEADER}")?;
        Ok(Self {
            dir: dir.to_path_buf(),
            diagnostics,
            snapshots: Vec::new(),
            error: None,
        })
    }

    /// Flushes and reports the snapshot files written.
    pub fn finish(mut self) -> io::Result<Vec<PathBuf>> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.diagnostics.flush()?;
        Ok(self.snapshots)
    }

    fn guard(&mut self, f: impl FnOnce(&mut Self) -> io::Result<()>) {
        if self.error.is_none() {
            if let Err(e) = f(self) {
                self.error = Some(e);
            }
        }
    }
}

impl RunObserver for OutputWriter {
    fn record(&mut self, record: &DiagnosticsRecord) {
        self.guard(|w| {
            writeln!(w.diagnostics, "{}", diagnostics_row(record))?;
            // Keep the file current so an aborted run leaves its history behind.
            w.diagnostics.flush()
        });
    }

    fn snapshot(&mut self, snapshot: &Snapshot) {
        self.guard(|w| {
            let path = snapshot_path(&w.dir, snapshot);
            let mut file = BufWriter::new(File::create(&path)?);
            if path.extension().is_some_and(|e| e == "csv") {
                write_snapshot_csv(&mut file, snapshot)?;
            } else {
                write_snapshot_bin(&mut file, snapshot)?;
            }
            file.flush()?;
            w.snapshots.push(path);
            Ok(())
        });
    }
}
