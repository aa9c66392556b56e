//! CSV, legacy VTK and JSON writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use gncdg_core::{MeshKind, Simulation};
use serde::Serialize;

use crate::error::{AppError, Result};
use crate::gauges::GaugeSeries;

/// Shortest text that parses back to the same double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let csv_err = |source| AppError::Csv { path: path.to_path_buf(), source };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(|&v| fmt_f64(v))).map_err(csv_err)?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let csv_err = |source| AppError::Csv { path: path.to_path_buf(), source };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| AppError::io(path, std::io::Error::new(std::io::ErrorKind::InvalidData, e))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// One row per sample time: `t`, `t + offset`, then one column per gauge.
/// Nothing is written for an empty gauge list.
pub fn write_gauges(path: &Path, series: &[GaugeSeries], time_offset: f64) -> Result<bool> {
    let Some(first) = series.first() else { return Ok(false) };
    let mut header = vec!["t".to_string(), "t_shifted".to_string()];
    header.extend(series.iter().map(GaugeSeries::label));
    let rows: Vec<Vec<f64>> = first
        .times
        .iter()
        .enumerate()
        .map(|(n, &t)| {
            let mut row = vec![t, t + time_offset];
            row.extend(series.iter().map(|g| g.eta[n]));
            row
        })
        .collect();
    write_csv(path, &header, &rows)?;
    Ok(true)
}

/// Legacy ASCII structured grid with point data at the primal cell centres.
pub fn write_vtk(path: &Path, sim: &Simulation, title: &str) -> Result<()> {
    let io = |e| AppError::io(path, e);
    let grid = sim.grid(MeshKind::Primal);
    let (nx, ny) = (grid.nx, grid.ny);
    let mut pts = Vec::with_capacity(nx * ny);
    // VTK wants x fastest
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            pts.push(grid.center(i, j));
        }
    }
    let mut fields: [Vec<f64>; 5] = Default::default();
    for &(x, y) in &pts {
        let num = |source| AppError::Numerical { step: sim.steps, t: sim.t, source };
        let h = sim.depth_at(x, y).map_err(num)?;
        let eta = sim.surface_at(x, y).map_err(num)?;
        let (u, v) = sim.velocity_at(x, y).map_err(num)?;
        for (f, val) in fields.iter_mut().zip([h, eta, u, v, eta - h]) {
            f.push(val);
        }
    }
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "# vtk DataFile Version 3.0").map_err(io)?;
    writeln!(w, "{}", title.lines().next().unwrap_or("")).map_err(io)?;
    writeln!(w, "ASCII\nDATASET STRUCTURED_GRID\nDIMENSIONS {nx} {ny} 1\nPOINTS {} double", nx * ny).map_err(io)?;
    for (x, y) in &pts {
        writeln!(w, "{} {} 0", fmt_f64(*x), fmt_f64(*y)).map_err(io)?;
    }
    writeln!(w, "POINT_DATA {}", nx * ny).map_err(io)?;
    for (name, f) in ["h", "eta", "u", "v", "b"].iter().zip(&fields) {
        writeln!(w, "SCALARS {name} double 1\nLOOKUP_TABLE default").map_err(io)?;
        for v in f {
            writeln!(w, "{}", fmt_f64(*v)).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("summary types serialize");
    std::fs::write(path, text + "\n").map_err(|e| AppError::io(path, e))
}
