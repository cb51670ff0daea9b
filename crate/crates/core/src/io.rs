//! Field and noise dumps.
//!
//! Binary layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic, `SHELFLD1` (field) or `SHELNSE1` (noise) |
//! | 8     | width `f64` |
//! | 8     | nx `u64` |
//! | 8     | dt `f64` |
//! | 8     | nt `u64` |
//! | 8     | t_start `f64` |
//! | 8 * k | values `f64`, time-major |
//!
//! with `k = (nt + 1) nx` for fields (slices at `t_0 .. t_nt`) and `k = nt nx`
//! for noise (one row per step). The CSV variant starts with one comment
//! line `# <kind> width=.. nx=.. dt=.. nt=.. t_start=..` followed by the
//! header `t,x,value` and one row per lattice value in the same order.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec, NoiseField};

const FIELD_MAGIC: &[u8; 8] = b"SHELFLD1";
const NOISE_MAGIC: &[u8; 8] = b"SHELNSE1";

fn write_header(out: &mut impl Write, magic: &[u8; 8], g: &GridSpec) -> std::io::Result<()> {
    out.write_all(magic)?;
    out.write_all(&g.width().to_le_bytes())?;
    out.write_all(&(g.nx() as u64).to_le_bytes())?;
    out.write_all(&g.dt().to_le_bytes())?;
    out.write_all(&(g.nt() as u64).to_le_bytes())?;
    out.write_all(&g.t_start().to_le_bytes())
}

fn read_word(input: &mut impl Read) -> Result<[u8; 8]> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    Ok(b)
}

fn read_header(input: &mut impl Read, magic: &[u8; 8]) -> Result<GridSpec> {
    let m = read_word(input)?;
    if &m != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&m),
            String::from_utf8_lossy(magic)
        )));
    }
    let width = f64::from_le_bytes(read_word(input)?);
    let nx = u64::from_le_bytes(read_word(input)?) as usize;
    let dt = f64::from_le_bytes(read_word(input)?);
    let nt = u64::from_le_bytes(read_word(input)?) as usize;
    let t_start = f64::from_le_bytes(read_word(input)?);
    GridSpec::from_step(width, nx, t_start, dt, nt)
}

fn write_values(out: &mut impl Write, values: &[f64]) -> std::io::Result<()> {
    for v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_values(input: &mut impl Read, count: usize) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; count * 8];
    input.read_exact(&mut bytes)?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

pub fn write_field(field: &Field, mut out: impl Write) -> Result<()> {
    write_header(&mut out, FIELD_MAGIC, field.grid())?;
    write_values(&mut out, field.values())?;
    Ok(())
}

pub fn read_field(mut input: impl Read) -> Result<Field> {
    let grid = read_header(&mut input, FIELD_MAGIC)?;
    let values = read_values(&mut input, (grid.nt() + 1) * grid.nx())?;
    Field::from_values(grid, values)
}

pub fn write_noise(noise: &NoiseField, mut out: impl Write) -> Result<()> {
    write_header(&mut out, NOISE_MAGIC, noise.grid())?;
    write_values(&mut out, noise.cells())?;
    Ok(())
}

pub fn read_noise(mut input: impl Read) -> Result<NoiseField> {
    let grid = read_header(&mut input, NOISE_MAGIC)?;
    let cells = read_values(&mut input, grid.nt() * grid.nx())?;
    NoiseField::from_values(grid, cells)
}

fn write_csv(kind: &str, g: &GridSpec, values: &[f64], mut out: impl Write) -> Result<()> {
    writeln!(
        out,
        "# {kind} width={} nx={} dt={} nt={} t_start={}",
        g.width(),
        g.nx(),
        g.dt(),
        g.nt(),
        g.t_start()
    )?;
    writeln!(out, "t,x,value")?;
    for (n, row) in values.chunks_exact(g.nx()).enumerate() {
        let t = g.t(n);
        for (j, v) in row.iter().enumerate() {
            writeln!(out, "{t},{},{v}", g.x(j))?;
        }
    }
    Ok(())
}

fn read_csv(kind: &str, input: impl BufRead) -> Result<(GridSpec, Vec<f64>)> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty dump".into()))??;
    let mut fields = header
        .strip_prefix("# ")
        .ok_or_else(|| Error::Format("missing header line".into()))?
        .split_whitespace();
    if fields.next() != Some(kind) {
        return Err(Error::Format(format!("expected a {kind} dump")));
    }
    let mut get = |name: &str| -> Result<f64> {
        let item = fields
            .next()
            .ok_or_else(|| Error::Format(format!("header lacks {name}")))?;
        let value = item
            .strip_prefix(name)
            .and_then(|s| s.strip_prefix('='))
            .ok_or_else(|| Error::Format(format!("expected {name}=.., got {item}")))?;
        value
            .parse()
            .map_err(|_| Error::Format(format!("{name} is not a number: {value}")))
    };
    let width = get("width")?;
    let nx = get("nx")? as usize;
    let dt = get("dt")?;
    let nt = get("nt")? as usize;
    let t_start = get("t_start")?;
    let grid = GridSpec::from_step(width, nx, t_start, dt, nt)?;
    match lines.next() {
        Some(Ok(l)) if l == "t,x,value" => {}
        _ => return Err(Error::Format("missing column header".into())),
    }
    let mut values = Vec::new();
    for line in lines {
        let line = line?;
        let v = line
            .rsplit(',')
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("bad row: {line}")))?;
        values.push(v);
    }
    Ok((grid, values))
}

pub fn write_field_csv(field: &Field, out: impl Write) -> Result<()> {
    write_csv("field", field.grid(), field.values(), out)
}

pub fn read_field_csv(input: impl BufRead) -> Result<Field> {
    let (grid, values) = read_csv("field", input)?;
    Field::from_values(grid, values)
}

pub fn write_noise_csv(noise: &NoiseField, out: impl Write) -> Result<()> {
    write_csv("noise", noise.grid(), noise.cells(), out)
}

pub fn read_noise_csv(input: impl BufRead) -> Result<NoiseField> {
    let (grid, cells) = read_csv("noise", input)?;
    NoiseField::from_values(grid, cells)
}

/// Pretty JSON of any serializable report (diagnostics sidecars, summaries).
pub fn write_json<T: serde::Serialize>(value: &T, mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Format(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::sample_white_noise;

    fn grid() -> GridSpec {
        GridSpec::from_step(4.0, 16, -1.0, 1.0 / 64.0, 8).unwrap()
    }

    #[test]
    fn binary_round_trip() {
        let f = Field::from_fn(grid(), |t, x| (x * 1.3).sin() / 3.0 + t).unwrap();
        let mut buf = Vec::new();
        write_field(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 48 + 8 * 9 * 16);
        assert_eq!(read_field(buf.as_slice()).unwrap(), f);
        let noise = sample_white_noise(&grid(), 5);
        let mut buf = Vec::new();
        write_noise(&noise, &mut buf).unwrap();
        assert_eq!(read_noise(buf.as_slice()).unwrap(), noise);
        assert!(read_field(buf.as_slice()).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = Field::from_fn(grid(), |t, x| (x * 1.3).sin() / 3.0 + t).unwrap();
        let mut buf = Vec::new();
        write_field_csv(&f, &mut buf).unwrap();
        assert_eq!(read_field_csv(buf.as_slice()).unwrap(), f);
        let noise = sample_white_noise(&grid(), 5);
        let mut buf = Vec::new();
        write_noise_csv(&noise, &mut buf).unwrap();
        assert_eq!(read_noise_csv(buf.as_slice()).unwrap(), noise);
    }

    #[test]
    fn truncated_input_is_an_error() {
        let f = Field::zeros(grid());
        let mut buf = Vec::new();
        write_field(&f, &mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(read_field(buf.as_slice()).is_err());
    }
}
