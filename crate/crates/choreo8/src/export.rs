//! Deterministic CSV/JSON artifact writing: fixed 12-significant-digit
//! formatting, '.' decimal separator, mandatory header row, atomic
//! temp-file-plus-rename writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::integrate::Trajectory;

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("row length {got} does not match header length {want}")]
    RaggedRow { got: usize, want: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Integrate(#[from] crate::integrate::IntegrateError),
}

/// Formats with 12 significant digits, locale-independent.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000e0".into();
    }
    format!("{x:.11e}")
}

/// A rectangular numeric table with named columns.
#[derive(Debug, Clone)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<(), ExportError> {
        if row.len() != self.header.len() {
            return Err(ExportError::RaggedRow {
                got: row.len(),
                want: self.header.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_string(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_sig(x)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write_atomic(&self, path: &Path) -> Result<(), ExportError> {
        write_atomic(path, self.to_string().as_bytes())
    }
}

/// Writes bytes to `path` via a temp file in the same directory plus rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ExportError> {
    let io_err = |source| ExportError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut tmp = path.to_path_buf();
    let mut name = tmp.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    tmp.set_file_name(name);
    {
        let mut f = fs::File::create(&tmp).map_err(io_err)?;
        f.write_all(bytes).map_err(io_err)?;
        f.sync_all().map_err(io_err)?;
    }
    fs::rename(&tmp, path).map_err(io_err)
}

/// Serializes `value` as pretty JSON and writes it atomically.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<(), ExportError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

/// Samples a trajectory on a uniform grid into the 13-column layout
/// tau_deg, x1, y1, ..., vx3, vy3.
pub fn trajectory_csv(
    traj: &Trajectory,
    grid_step_deg: f64,
    tau_end_deg: f64,
) -> Result<Csv, ExportError> {
    let mut csv = Csv::new(&[
        "tau_deg", "x1", "y1", "x2", "y2", "x3", "y3", "vx1", "vy1", "vx2", "vy2", "vx3", "vy3",
    ]);
    let n = (tau_end_deg / grid_step_deg).round() as usize;
    for k in 0..=n {
        let deg = grid_step_deg * k as f64;
        let s = traj.state_at(traj.tau_start() + deg.to_radians())?;
        let mut row = Vec::with_capacity(13);
        row.push(deg);
        for r in &s.r {
            row.push(r.x);
            row.push(r.y);
        }
        for v in &s.v {
            row.push(v.x);
            row.push(v.y);
        }
        csv.push(row)?;
    }
    Ok(csv)
}

/// Samples a catalog curve into the t, x, y, r, theta_deg layout.
pub fn curve_csv(
    spec: &crate::curves::CurveSpec,
    sample_count: usize,
) -> Result<Csv, crate::curves::CurveError> {
    let mut csv = Csv::new(&["t", "x", "y", "r", "theta_deg"]);
    for k in 0..=sample_count {
        let t = 2.0 * std::f64::consts::PI * k as f64 / sample_count as f64;
        let p = crate::curves::eval_parametric(spec, t)?;
        csv.rows
            .push(vec![t, p.point.x, p.point.y, p.r, p.theta_deg()]);
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_twelve_significant_digits() {
        assert_eq!(format_sig(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_sig(-12345.6789), "-1.23456789000e4");
        assert_eq!(format_sig(0.0), "0.00000000000e0");
        assert!(!format_sig(1234.5).contains(','));
    }

    #[test]
    fn csv_roundtrip_and_determinism() {
        let mut c = Csv::new(&["a", "b"]);
        c.push(vec![1.5, -2.0]).unwrap();
        assert!(c.push(vec![1.0]).is_err());
        let s1 = c.to_string();
        let s2 = c.to_string();
        assert_eq!(s1, s2);
        assert!(s1.starts_with("a,b\n"));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = std::env::temp_dir().join("choreo8-export-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        write_atomic(&path, b"one\n").unwrap();
        write_atomic(&path, b"two\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two\n");
        assert!(!path.with_file_name("out.csv.tmp").exists());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn trajectory_csv_shape() {
        let traj = crate::integrate::integrate(
            &crate::dynamics::canonical_initial_state(),
            2.0 * std::f64::consts::PI,
            1e-10,
        )
        .unwrap();
        let csv = trajectory_csv(&traj, 30.0, 360.0).unwrap();
        assert_eq!(csv.rows.len(), 13);
        assert_eq!(csv.header.len(), 13);
    }
}
