//! Field output: `x,rho,v,p,E` CSV for 1D gas dynamics, and raw
//! little-endian binary64 arrays with a JSON sidecar for any field.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{Axis, ConservationLaw, Euler1D};

use super::{Field, Grid};

/// Writes one row per cell with the cell center and primitive variables.
pub fn write_csv_1d<W: Write>(grid: &Grid, field: &Field<3>, law: &Euler1D, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["x", "rho", "v", "p", "E"])?;
    for i in 0..field.nx() {
        let u = field.at(i, 0);
        let x = grid.center(Axis::X, i as isize);
        wtr.write_record([
            x.to_string(),
            u[0].to_string(),
            (u[1] / u[0]).to_string(),
            law.pressure(u).to_string(),
            u[2].to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Describes a `.bin` file: `ny` rows of `nx` cells, x fastest, each cell
/// holding `components.len()` little-endian binary64 values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub dims: usize,
    pub nx: usize,
    pub ny: usize,
    pub lower: [f64; 2],
    pub upper: [f64; 2],
    pub time: f64,
    pub gamma: Option<f64>,
    pub components: Vec<String>,
    pub dtype: String,
    pub layout: String,
    pub data_file: String,
}

const DTYPE: &str = "float64-le";
const LAYOUT: &str = "row-major: y slowest, then x, then component";

/// Writes `<dir>/<stem>.bin` and `<dir>/<stem>.json`; returns both paths.
pub fn write_binary<L: ConservationLaw<N>, const N: usize>(
    dir: &Path,
    stem: &str,
    grid: &Grid,
    field: &Field<N>,
    time: f64,
    law: &L,
) -> Result<(PathBuf, PathBuf)> {
    let bin = dir.join(format!("{stem}.bin"));
    let json = dir.join(format!("{stem}.json"));
    let mut w = BufWriter::new(File::create(&bin)?);
    for (_, v) in field.interior() {
        for x in v {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.flush()?;
    let sidecar = Sidecar {
        dims: grid.dims(),
        nx: field.nx(),
        ny: field.ny(),
        lower: grid.lower(),
        upper: grid.upper(),
        time,
        gamma: law.gamma(),
        components: law
            .component_names()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        dtype: DTYPE.into(),
        layout: LAYOUT.into(),
        data_file: format!("{stem}.bin"),
    };
    serde_json::to_writer_pretty(BufWriter::new(File::create(&json)?), &sidecar)?;
    Ok((bin, json))
}

/// Reads a sidecar and its data file back as a flat vector.
pub fn read_binary(json: &Path) -> Result<(Sidecar, Vec<f64>)> {
    let sidecar: Sidecar = serde_json::from_reader(BufReader::new(File::open(json)?))?;
    if sidecar.dtype != DTYPE {
        return Err(Error::Parse(format!(
            "unsupported dtype {:?}",
            sidecar.dtype
        )));
    }
    let bin = json.with_file_name(&sidecar.data_file);
    let mut bytes = Vec::new();
    BufReader::new(File::open(bin)?).read_to_end(&mut bytes)?;
    let expected = sidecar.nx * sidecar.ny * sidecar.components.len() * 8;
    if bytes.len() != expected {
        return Err(Error::Parse(format!(
            "data file holds {} bytes, sidecar implies {expected}",
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok((sidecar, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::Euler2D;

    #[test]
    fn csv_has_header_and_one_row_per_cell() {
        let grid = Grid::new_1d(5, 0.0, 1.0).unwrap();
        let field = Field::from_fn(&grid, 2, |_| [1.0, 0.0, 2.5]);
        let mut buf = Vec::new();
        write_csv_1d(&grid, &field, &Euler1D::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,rho,v,p,E");
        assert_eq!(lines.len(), 6);
        let row: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
        for (got, want) in row.iter().zip([0.1, 1.0, 0.0, 1.0, 2.5]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn binary_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid::new_2d(3, 2, [0.0, 0.0], [3.0, 2.0]).unwrap();
        let field = Field::from_fn(&grid, 2, |x| [x[0], x[1], -x[0], 1.0]);
        let (_, json) =
            write_binary(dir.path(), "snap", &grid, &field, 0.25, &Euler2D::default()).unwrap();
        let (meta, values) = read_binary(&json).unwrap();
        assert_eq!((meta.nx, meta.ny, meta.time), (3, 2, 0.25));
        assert_eq!(meta.components, ["rho", "momx", "momy", "E"]);
        assert_eq!(&values[..4], &[0.5, 0.5, -0.5, 1.0]);
        assert_eq!(values.len(), 24);
    }
}
