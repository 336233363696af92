//! Field snapshots: flat little-endian `f64` data with a JSON sidecar, and
//! CSV export of time slices.

use std::io::Write;
use std::path::{Path, PathBuf};

use halfspace::core::{Domain, HalfSpaceGrid, VectorField};
use ndarray::Array3;
use serde::{Deserialize, Serialize};

use crate::config::GridConfig;
use crate::error::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Sidecar {
    pub format: String,
    pub endianness: String,
    /// `[component, tangential, vertical, time]`, row-major.
    pub shape: [usize; 4],
    pub axes: [String; 4],
    pub components: Vec<String>,
    pub domain: Domain,
    pub grid: GridConfig,
}

fn sidecar_path(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

fn grid_config(grid: &HalfSpaceGrid) -> Result<GridConfig, CliError> {
    let v = serde_json::to_value(grid).map_err(CliError::runtime)?;
    serde_json::from_value(v).map_err(CliError::runtime)
}

/// Writes `path` (data) and `path` with a `.json` extension (sidecar).
pub fn write_vector(u: &VectorField, path: &Path) -> Result<Sidecar, CliError> {
    let grid = u.grid();
    let (m, nz, nt) = u.comp(0).dim();
    let sidecar = Sidecar {
        format: "f64".into(),
        endianness: "little".into(),
        shape: [u.comps().len(), m, nz, nt],
        axes: ["component".into(), "tangential".into(), "vertical".into(), "time".into()],
        components: (1..=u.comps().len()).map(|i| format!("u{i}")).collect(),
        domain: u.domain(),
        grid: grid_config(grid)?,
    };
    let mut bytes = Vec::with_capacity(8 * sidecar.shape.iter().product::<usize>());
    for c in u.comps() {
        for v in c.iter() {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    std::fs::write(path, bytes)?;
    std::fs::write(
        sidecar_path(path),
        serde_json::to_string_pretty(&sidecar).map_err(CliError::runtime)? + "\n",
    )?;
    Ok(sidecar)
}

pub fn read_vector(path: &Path) -> Result<VectorField, CliError> {
    let side = sidecar_path(path);
    let text = std::fs::read_to_string(&side)
        .map_err(|e| CliError::Config(format!("cannot read sidecar {}: {e}", side.display())))?;
    let sc: Sidecar = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad sidecar: {e}")))?;
    if sc.format != "f64" || sc.endianness != "little" {
        return Err(CliError::Config(format!("unsupported snapshot format {} {}", sc.format, sc.endianness)));
    }
    let grid = sc.grid.build()?;
    let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let [nc, m, nz, nt] = sc.shape;
    let len = m * nz * nt;
    if bytes.len() != 8 * nc * len {
        return Err(CliError::Config(format!(
            "snapshot holds {} bytes, sidecar shape needs {}",
            bytes.len(),
            8 * nc * len
        )));
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("chunks of 8")))
        .collect();
    let comps = values
        .chunks_exact(len)
        .map(|c| Array3::from_shape_vec((m, nz, nt), c.to_vec()).map_err(CliError::runtime))
        .collect::<Result<Vec<_>, _>>()?;
    VectorField::new(grid, sc.domain, comps).map_err(CliError::config)
}

/// One time slice as CSV: coordinates then components.
pub fn write_slice_csv(u: &VectorField, k: usize, path: &Path) -> Result<(), CliError> {
    let grid = u.grid();
    let n = grid.n();
    let z = u.domain().vertical_nodes(grid);
    let mut w = csv::Writer::from_path(path).map_err(CliError::runtime)?;
    let mut header: Vec<String> = (1..n).map(|i| format!("x{i}")).collect();
    header.push(format!("x{n}"));
    header.extend((1..=n).map(|i| format!("u{i}")));
    w.write_record(&header).map_err(CliError::runtime)?;
    for m in 0..grid.tan_len() {
        let p = grid.tan_point(m);
        for (j, zj) in z.iter().enumerate() {
            let mut row: Vec<String> = p[..n - 1].iter().map(|v| v.to_string()).collect();
            row.push(zj.to_string());
            row.extend(u.comps().iter().map(|c| c[[m, j, k]].to_string()));
            w.write_record(&row).map_err(CliError::runtime)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Two-column CSV of named values.
pub fn write_pairs_csv<'a>(path: &Path, header: [&str; 2], rows: impl IntoIterator<Item = (&'a str, f64)>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(CliError::runtime)?;
    w.write_record(header).map_err(CliError::runtime)?;
    for (k, v) in rows {
        w.write_record([k, &v.to_string()]).map_err(CliError::runtime)?;
    }
    w.flush()?;
    Ok(())
}

/// Serializes a table of records with a header row.
pub fn write_records<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(CliError::runtime)?;
    for r in rows {
        w.serialize(r).map_err(CliError::runtime)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(serde_json::to_string_pretty(value).map_err(CliError::runtime)?.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let grid = HalfSpaceGrid::uniform(2, 8, 2.0, 5, 0.5, 3).unwrap();
        let u = VectorField::from_fn(&grid, Domain::HalfSpace, |x, t| [x[0] + t, x[1] * t, 0.0]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("u.bin");
        let sc = write_vector(&u, &p).unwrap();
        assert_eq!(sc.shape, [2, 8, 5, 4]);
        let back = read_vector(&p).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn rejects_truncated_data() {
        let grid = HalfSpaceGrid::uniform(2, 8, 2.0, 5, 0.5, 3).unwrap();
        let u = VectorField::zeros(&grid, Domain::HalfSpace);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("u.bin");
        write_vector(&u, &p).unwrap();
        std::fs::write(&p, [0u8; 16]).unwrap();
        assert!(matches!(read_vector(&p), Err(CliError::Config(_))));
    }
}
