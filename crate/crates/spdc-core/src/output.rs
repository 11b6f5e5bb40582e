//! Output formats: text and binary grid files, marginal files, grayscale
//! heatmaps and the run manifest.
//!
//! The text grid format is line-oriented and diff-friendly: a `key = value`
//! header naming both axes (name, unit, min, max, count), an `order`
//! declaration, then one value per line in scientific notation with 17
//! significant digits (lossless f64 round-trip). Complex grids write
//! `re im` on each line. The optional binary variant is a fixed 64-byte
//! header (magic, kind, counts, axis ranges; names are not carried) followed
//! by little-endian f64 values in the same row-major order.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::mathkit::{Axis, ComplexGrid2D, Grid2D, RealGrid2D};
use crate::observables::Marginal;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("grid file line {line}: {message}")]
    Format { line: usize, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    }
}

const MAGIC: &[u8; 8] = b"SPDCGRD1";

/// Values a grid file can carry.
pub trait GridValue: Copy {
    const KIND: &'static str;
    const KIND_CODE: u32;
    fn write_line(&self, out: &mut String);
    fn parse_line(tokens: &[&str]) -> Option<Self>;
    fn write_bytes(&self, out: &mut Vec<u8>);
    fn read_bytes(bytes: &mut impl Iterator<Item = f64>) -> Option<Self>;
}

impl GridValue for f64 {
    const KIND: &'static str = "real";
    const KIND_CODE: u32 = 0;

    fn write_line(&self, out: &mut String) {
        let _ = writeln!(out, "{self:.16e}");
    }

    fn parse_line(tokens: &[&str]) -> Option<Self> {
        match tokens {
            [v] => v.parse().ok(),
            _ => None,
        }
    }

    fn write_bytes(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }

    fn read_bytes(bytes: &mut impl Iterator<Item = f64>) -> Option<Self> {
        bytes.next()
    }
}

impl GridValue for Complex64 {
    const KIND: &'static str = "complex";
    const KIND_CODE: u32 = 1;

    fn write_line(&self, out: &mut String) {
        let _ = writeln!(out, "{:.16e} {:.16e}", self.re, self.im);
    }

    fn parse_line(tokens: &[&str]) -> Option<Self> {
        match tokens {
            [re, im] => Some(Complex64::new(re.parse().ok()?, im.parse().ok()?)),
            _ => None,
        }
    }

    fn write_bytes(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.re.to_le_bytes());
        out.extend_from_slice(&self.im.to_le_bytes());
    }

    fn read_bytes(bytes: &mut impl Iterator<Item = f64>) -> Option<Self> {
        Some(Complex64::new(bytes.next()?, bytes.next()?))
    }
}

/// Render a grid in the text format.
pub fn grid_to_text<T: GridValue>(grid: &Grid2D<T>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# spdc grid format v1");
    let _ = writeln!(s, "kind = {}", T::KIND);
    for (tag, ax) in [("axis1", &grid.axis1), ("axis2", &grid.axis2)] {
        let _ = writeln!(s, "{tag}_name = {}", ax.name);
        let _ = writeln!(s, "{tag}_unit = {}", ax.unit);
        let _ = writeln!(s, "{tag}_min = {:.16e}", ax.min());
        let _ = writeln!(s, "{tag}_max = {:.16e}", ax.max());
        let _ = writeln!(s, "{tag}_count = {}", ax.count());
    }
    let _ = writeln!(s, "order = row-major axis1-slowest");
    let _ = writeln!(s, "data:");
    for v in grid.values() {
        v.write_line(&mut s);
    }
    s
}

/// Parse the text format back into a grid.
pub fn grid_from_text<T: GridValue>(text: &str) -> Result<Grid2D<T>, OutputError> {
    let mut header = std::collections::HashMap::new();
    let mut values = Vec::new();
    let mut in_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if !in_data {
            let body = raw.trim();
            if body.starts_with('#') || body.is_empty() {
                continue;
            }
            if body == "data:" {
                in_data = true;
                continue;
            }
            let (k, v) = body.split_once('=').ok_or(OutputError::Format {
                line,
                message: format!("expected `key = value`, got {body:?}"),
            })?;
            header.insert(k.trim().to_string(), v.trim().to_string());
        } else {
            let tokens: Vec<&str> = raw.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            values.push(T::parse_line(&tokens).ok_or(OutputError::Format {
                line,
                message: format!("bad {} value line {raw:?}", T::KIND),
            })?);
        }
    }
    let get = |k: &str| {
        header.get(k).cloned().ok_or(OutputError::Format {
            line: 0,
            message: format!("missing header key {k:?}"),
        })
    };
    if get("kind")? != T::KIND {
        return Err(OutputError::Format {
            line: 0,
            message: format!("expected kind {}, file says {}", T::KIND, get("kind")?),
        });
    }
    let parse_f = |k: &str| -> Result<f64, OutputError> {
        get(k)?.parse().map_err(|e| OutputError::Format {
            line: 0,
            message: format!("bad number for {k:?}: {e}"),
        })
    };
    let parse_n = |k: &str| -> Result<usize, OutputError> {
        get(k)?.parse().map_err(|e| OutputError::Format {
            line: 0,
            message: format!("bad count for {k:?}: {e}"),
        })
    };
    let mk_axis = |tag: &str| -> Result<Axis, OutputError> {
        Axis::new(
            get(&format!("{tag}_name"))?,
            get(&format!("{tag}_unit"))?,
            parse_f(&format!("{tag}_min"))?,
            parse_f(&format!("{tag}_max"))?,
            parse_n(&format!("{tag}_count"))?,
        )
        .map_err(|e| OutputError::Format {
            line: 0,
            message: format!("{e}"),
        })
    };
    let axis1 = mk_axis("axis1")?;
    let axis2 = mk_axis("axis2")?;
    if values.len() != axis1.count() * axis2.count() {
        return Err(OutputError::Format {
            line: 0,
            message: format!(
                "expected {} values, found {}",
                axis1.count() * axis2.count(),
                values.len()
            ),
        });
    }
    Ok(Grid2D::from_values(axis1, axis2, values))
}

/// Render a grid in the binary format (64-byte header + LE f64 values).
pub fn grid_to_binary<T: GridValue>(grid: &Grid2D<T>) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + grid.values().len() * 16);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&T::KIND_CODE.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&(grid.axis1.count() as u64).to_le_bytes());
    out.extend_from_slice(&(grid.axis2.count() as u64).to_le_bytes());
    for v in [
        grid.axis1.min(),
        grid.axis1.max(),
        grid.axis2.min(),
        grid.axis2.max(),
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    debug_assert_eq!(out.len(), 64);
    for v in grid.values() {
        v.write_bytes(&mut out);
    }
    out
}

/// Parse the binary format. Axis names are not carried by it; the caller's
/// labels are applied.
pub fn grid_from_binary<T: GridValue>(
    bytes: &[u8],
    names: [(&str, &str); 2],
) -> Result<Grid2D<T>, OutputError> {
    let fail = |message: String| OutputError::Format { line: 0, message };
    if bytes.len() < 64 || &bytes[..8] != MAGIC {
        return Err(fail("not a binary grid file".into()));
    }
    let kind = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if kind != T::KIND_CODE {
        return Err(fail(format!("expected kind {}, found code {kind}", T::KIND)));
    }
    let n1 = u64::from_le_bytes(bytes[16..24].try_into().unwrap()) as usize;
    let n2 = u64::from_le_bytes(bytes[24..32].try_into().unwrap()) as usize;
    let f = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let axis1 = Axis::new(names[0].0, names[0].1, f(32), f(40), n1)
        .map_err(|e| fail(format!("{e}")))?;
    let axis2 = Axis::new(names[1].0, names[1].1, f(48), f(56), n2)
        .map_err(|e| fail(format!("{e}")))?;
    let mut floats = bytes[64..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let mut values = Vec::with_capacity(n1 * n2);
    for _ in 0..n1 * n2 {
        values.push(T::read_bytes(&mut floats).ok_or_else(|| fail("truncated data".into()))?);
    }
    Ok(Grid2D::from_values(axis1, axis2, values))
}

/// One-value-per-line marginal file with the same header conventions.
pub fn marginal_to_text(m: &Marginal) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# spdc marginal format v1");
    let _ = writeln!(s, "axis_name = {}", m.axis.name);
    let _ = writeln!(s, "axis_unit = {}", m.axis.unit);
    let _ = writeln!(s, "axis_min = {:.16e}", m.axis.min());
    let _ = writeln!(s, "axis_max = {:.16e}", m.axis.max());
    let _ = writeln!(s, "axis_count = {}", m.axis.count());
    let _ = writeln!(s, "data:");
    for v in &m.values {
        let _ = writeln!(s, "{v:.16e}");
    }
    s
}

/// 8-bit grayscale PGM (P5), max-normalized linear intensity. Image columns
/// follow axis1 left to right, rows follow axis2 top (max) to bottom (min).
pub fn heatmap_pgm(grid: &RealGrid2D) -> Vec<u8> {
    let (w, h) = (grid.axis1.count(), grid.axis2.count());
    let max = grid.values().iter().cloned().fold(0.0f64, f64::max);
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h);
    for row in 0..h {
        let j = h - 1 - row;
        for i in 0..w {
            let v = if max > 0.0 {
                (grid.get(i, j) / max * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            };
            out.push(v);
        }
    }
    out
}

/// Magnitude heatmap of a complex grid.
pub fn heatmap_pgm_complex(grid: &ComplexGrid2D) -> Vec<u8> {
    heatmap_pgm(&grid.map(|v| v.norm()))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), OutputError> {
    let mut f = std::fs::File::create(path).map_err(io_err(path))?;
    f.write_all(bytes).map_err(io_err(path))?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<(), OutputError> {
    write_bytes(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_grid() -> RealGrid2D {
        let a1 = Axis::new("k_xs", "rad/um", -0.6, 0.6, 5).unwrap();
        let a2 = Axis::new("omega_i", "rad/fs", 0.45, 1.9, 4).unwrap();
        Grid2D::from_fn(a1, a2, |x, y| (x * 17.3).sin() * y.exp())
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let g = sample_grid();
        let back: RealGrid2D = grid_from_text(&grid_to_text(&g)).unwrap();
        assert_eq!(g.axis1, back.axis1);
        assert_eq!(g.axis2, back.axis2);
        for (a, b) in g.values().iter().zip(back.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn complex_text_round_trip_is_bit_exact() {
        let a1 = Axis::new("x_s", "um", -10.0, 10.0, 4).unwrap();
        let a2 = Axis::new("t_i", "fs", -5.0, 5.0, 3).unwrap();
        let g = Grid2D::from_fn(a1, a2, |x, t| Complex64::new(x * t, (x - t).cos()));
        let back: ComplexGrid2D = grid_from_text(&grid_to_text(&g)).unwrap();
        for (a, b) in g.values().iter().zip(back.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let g = sample_grid();
        let bytes = grid_to_binary(&g);
        assert_eq!(&bytes[..8], MAGIC);
        let back: RealGrid2D =
            grid_from_binary(&bytes, [("k_xs", "rad/um"), ("omega_i", "rad/fs")]).unwrap();
        for (a, b) in g.values().iter().zip(back.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn kind_mismatch_is_detected() {
        let g = sample_grid();
        let text = grid_to_text(&g);
        assert!(grid_from_text::<Complex64>(&text).is_err());
    }

    #[test]
    fn heatmap_has_pgm_header_and_full_scale() {
        let g = sample_grid();
        let pgm = heatmap_pgm(&g);
        assert!(pgm.starts_with(b"P5\n5 4\n255\n"));
        assert_eq!(pgm.len(), b"P5\n5 4\n255\n".len() + 20);
        assert!(pgm.iter().skip(11).any(|&b| b == 255));
    }

    proptest! {
        #[test]
        fn arbitrary_real_grids_round_trip(values in proptest::collection::vec(-1e12f64..1e12, 12)) {
            let a1 = Axis::new("a", "u", 0.0, 1.0, 4).unwrap();
            let a2 = Axis::new("b", "v", -2.0, 3.0, 3).unwrap();
            let g = Grid2D::from_values(a1, a2, values);
            let back: RealGrid2D = grid_from_text(&grid_to_text(&g)).unwrap();
            for (x, y) in g.values().iter().zip(back.values()) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
            let back: RealGrid2D = grid_from_binary(&grid_to_binary(&g), [("a", "u"), ("b", "v")]).unwrap();
            for (x, y) in g.values().iter().zip(back.values()) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
