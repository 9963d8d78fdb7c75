//! Snapshot files. 1-D snapshots are CSV; 2-D snapshots are a `.meta` text
//! file plus one raw little-endian `f64` array per field.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::{Dim, Field};
use crate::state::{GAM, PI, PRES, RHO, VX, VY};

pub const CSV_HEADER: &str = "x,rho,u,p,Gamma,Pi";

/// Primitive arrays of the interior cells, x index fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub dim: Dim,
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub time: f64,
    pub scheme: String,
    pub config_hash: String,
    pub fields: Vec<(String, Vec<f64>)>,
}

impl Snapshot {
    /// Primitive fields `rho, u, [v,] p, Gamma, Pi` of `field`.
    pub fn from_field(field: &Field, time: f64, scheme: &str, config_hash: &str) -> Self {
        let g = &field.grid;
        let slots: &[(&str, usize)] = match g.dim {
            Dim::One => &[("rho", RHO), ("u", VX), ("p", PRES), ("Gamma", GAM), ("Pi", PI)],
            Dim::Two => &[("rho", RHO), ("u", VX), ("v", VY), ("p", PRES), ("Gamma", GAM), ("Pi", PI)],
        };
        Self {
            dim: g.dim,
            nx: g.nx,
            ny: g.ny,
            x0: g.x0,
            y0: g.y0,
            dx: g.dx,
            dy: g.dy,
            time,
            scheme: scheme.to_string(),
            config_hash: config_hash.to_string(),
            fields: slots.iter().map(|&(n, c)| (n.to_string(), field.primitive_component(c))).collect(),
        }
    }

    pub fn field(&self, name: &str) -> Option<&[f64]> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn push_field(&mut self, name: &str, data: Vec<f64>) {
        assert_eq!(data.len(), self.nx * self.ny, "field size does not match the grid");
        self.fields.push((name.to_string(), data));
    }

    pub fn x_centres(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x0 + (i as f64 + 0.5) * self.dx).collect()
    }

    pub fn cell_area(&self) -> f64 {
        match self.dim {
            Dim::One => self.dx,
            Dim::Two => self.dx * self.dy,
        }
    }
}

fn format_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Format { path: path.to_path_buf(), message: message.into() }
}

/// CSV with the fixed header; every value in `{:.16e}` (17 significant
/// digits), which reproduces the double exactly.
pub fn csv_text(s: &Snapshot) -> String {
    let cols: Vec<&[f64]> = ["rho", "u", "p", "Gamma", "Pi"]
        .iter()
        .map(|n| s.field(n).expect("1-D snapshot lacks a CSV column"))
        .collect();
    let mut out = String::with_capacity(s.nx * 6 * 24);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, x) in s.x_centres().into_iter().enumerate() {
        let _ = write!(out, "{x:.16e}");
        for c in &cols {
            let _ = write!(out, ",{:.16e}", c[i]);
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(s: &Snapshot, path: &Path) -> Result<()> {
    fs::write(path, csv_text(s)).map_err(|e| Error::io(path, e))
}

/// Reads a CSV snapshot. Time, scheme and hash are not stored in CSV and
/// come back empty; the mesh is recovered from the `x` column.
pub fn read_csv(path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text).map_err(|m| format_err(path, m))
}

fn parse_csv(text: &str) -> std::result::Result<Snapshot, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    if header.trim() != CSV_HEADER {
        return Err(format!("header `{header}` is not `{CSV_HEADER}`"));
    }
    let names: Vec<&str> = CSV_HEADER.split(',').collect();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<&str> = line.split(',').collect();
        if vals.len() != names.len() {
            return Err(format!("row {} has {} columns, expected {}", k + 1, vals.len(), names.len()));
        }
        for (c, v) in vals.iter().enumerate() {
            cols[c].push(v.trim().parse().map_err(|_| format!("row {}: bad number `{v}`", k + 1))?);
        }
    }
    let x = &cols[0];
    let nx = x.len();
    if nx == 0 {
        return Err("no rows".into());
    }
    let dx = if nx > 1 { (x[nx - 1] - x[0]) / (nx - 1) as f64 } else { 1.0 };
    Ok(Snapshot {
        dim: Dim::One,
        nx,
        ny: 1,
        x0: x[0] - 0.5 * dx,
        y0: 0.0,
        dx,
        dy: 1.0,
        time: f64::NAN,
        scheme: String::new(),
        config_hash: String::new(),
        fields: names[1..].iter().zip(cols.into_iter().skip(1)).map(|(n, v)| (n.to_string(), v)).collect(),
    })
}

/// Binary array file belonging to field `name` of the snapshot whose
/// metadata lives at `meta`.
pub fn field_path(meta: &Path, name: &str) -> PathBuf {
    meta.with_extension(format!("{name}.bin"))
}

pub fn meta_text(s: &Snapshot) -> String {
    let names: Vec<&str> = s.fields.iter().map(|(n, _)| n.as_str()).collect();
    format!(
        "nx: {}\nny: {}\nx0: {:?}\ny0: {:?}\ndx: {:?}\ndy: {:?}\ntime: {:?}\nfields: {}\nendianness: little\nscheme: {}\nconfig_hash: {}\n",
        s.nx,
        s.ny,
        s.x0,
        s.y0,
        s.dx,
        s.dy,
        s.time,
        names.join(","),
        s.scheme,
        s.config_hash
    )
}

/// Writes `meta` (conventionally `*.meta`) and `<stem>.<field>.bin` next to
/// it for every field.
pub fn write_grid_binary(s: &Snapshot, meta: &Path) -> Result<()> {
    fs::write(meta, meta_text(s)).map_err(|e| Error::io(meta, e))?;
    for (name, data) in &s.fields {
        let path = field_path(meta, name);
        let bytes: Vec<u8> = data.iter().flat_map(|v| v.to_le_bytes()).collect();
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

pub fn read_grid_binary(meta: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(meta).map_err(|e| Error::io(meta, e))?;
    let mut kv = std::collections::HashMap::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (k, v) = line.split_once(':').ok_or_else(|| format_err(meta, format!("bad line `{line}`")))?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get = |k: &str| kv.get(k).ok_or_else(|| format_err(meta, format!("missing `{k}`")));
    let num = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| format_err(meta, format!("bad `{k}`"))) };
    let count = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| format_err(meta, format!("bad `{k}`"))) };
    let endianness = get("endianness")?;
    if endianness != "little" {
        return Err(format_err(meta, format!("unsupported endianness `{endianness}`")));
    }
    let (nx, ny) = (count("nx")?, count("ny")?);
    let mut fields = Vec::new();
    for name in get("fields")?.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        let path = field_path(meta, name);
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        if bytes.len() != 8 * nx * ny {
            return Err(format_err(&path, format!("{} bytes, expected {}", bytes.len(), 8 * nx * ny)));
        }
        let data = bytes.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect();
        fields.push((name.to_string(), data));
    }
    Ok(Snapshot {
        dim: if ny > 1 { Dim::Two } else { Dim::One },
        nx,
        ny,
        x0: num("x0")?,
        y0: num("y0")?,
        dx: num("dx")?,
        dy: num("dy")?,
        time: num("time")?,
        scheme: kv.get("scheme").cloned().unwrap_or_default(),
        config_hash: kv.get("config_hash").cloned().unwrap_or_default(),
        fields,
    })
}
