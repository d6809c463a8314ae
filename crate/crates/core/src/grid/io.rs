//! The `ALPG1` grid file: an ASCII header `ALPG1 n`, one line `m_i N_i L_i`
//! per axis, then `prod N_i` little-endian `f64` pairs `(re, im)` in storage
//! order.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{GridFunction, TorusGrid};
use crate::error::{Error, Result};
use crate::geometry::Weight;

const MAGIC: &str = "ALPG1";

pub fn write_grid_function<W: Write>(mut w: W, u: &GridFunction) -> Result<()> {
    let g = u.grid();
    writeln!(w, "{MAGIC} {}", g.dim())?;
    for axis in 0..g.dim() {
        // `{:?}` prints the shortest string that round-trips exactly
        writeln!(w, "{:?} {} {:?}", g.weight().components()[axis], g.sizes()[axis], g.periods()[axis])?;
    }
    let mut buf = Vec::with_capacity(16 * u.values().len());
    for z in u.values() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_grid_function<R: Read>(r: R) -> Result<GridFunction> {
    let mut r = BufReader::new(r);
    let mut line = String::new();
    r.read_line(&mut line)?;
    let mut head = line.split_whitespace();
    if head.next() != Some(MAGIC) {
        return Err(Error::Format("missing ALPG1 magic".into()));
    }
    let n: usize = head
        .next()
        .and_then(|t| t.parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Format("bad dimension in header".into()))?;
    let mut m = Vec::with_capacity(n);
    let mut sizes = Vec::with_capacity(n);
    let mut periods = Vec::with_capacity(n);
    for axis in 0..n {
        line.clear();
        r.read_line(&mut line)?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Format(format!("axis line {} needs `m N L`", axis + 1)));
        }
        let parse_f = |s: &str| s.parse::<f64>().map_err(|_| Error::Format(format!("bad number `{s}`")));
        m.push(parse_f(fields[0])?);
        sizes.push(fields[1].parse::<usize>().map_err(|_| Error::Format(format!("bad size `{}`", fields[1])))?);
        periods.push(parse_f(fields[2])?);
    }
    let grid = TorusGrid::new(Weight::new(m)?, sizes, periods)?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != 16 * grid.len() {
        return Err(Error::Format(format!("expected {} payload bytes, found {}", 16 * grid.len(), bytes.len())));
    }
    let data = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    GridFunction::new(grid, data)
}

pub fn save(path: impl AsRef<Path>, u: &GridFunction) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_grid_function(&mut w, u)?;
    w.flush()?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<GridFunction> {
    read_grid_function(std::fs::File::open(path)?)
}
