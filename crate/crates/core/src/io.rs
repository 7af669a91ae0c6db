//! Byte-stable JSON and binary output.
//!
//! Every float is written as `{:.16e}` (17 significant digits), so equal
//! values always produce equal bytes. Complex numbers are `[re, im]` pairs.

use std::io::{self, Write};

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use crate::states::StateVector;
use crate::C64;

/// Fixed-precision float formatting; everything else is compact JSON.
#[derive(Debug, Clone, Copy, Default)]
pub struct FixedFloatFormatter;

impl Formatter for FixedFloatFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// `{:.16e}`, with non-finite values rejected upstream by the JSON writer.
pub fn format_float(value: f64) -> String {
    // normalize −0 so that sign noise never changes the bytes
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{v:.16e}")
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FixedFloatFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Row-major `[[re, im], …]` rows.
pub fn matrix_rows(m: &DMatrix<C64>) -> Vec<Vec<[f64; 2]>> {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn amplitudes(psi: &StateVector) -> Vec<[f64; 2]> {
    psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

/// Parses `[[[re, im], …], …]` or `[[re, …], …]` (real entries) into a
/// square matrix.
pub fn parse_matrix(text: &str) -> Result<DMatrix<C64>, String> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Real(f64),
        Pair([f64; 2]),
    }
    let rows: Vec<Vec<Entry>> = serde_json::from_str(text).map_err(|e| format!("matrix JSON: {e}"))?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(format!("matrix must be square and nonempty, got {n} rows"));
    }
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, e) in row.into_iter().enumerate() {
            m[(i, j)] = match e {
                Entry::Real(x) => C64::new(x, 0.0),
                Entry::Pair([a, b]) => C64::new(a, b),
            };
        }
    }
    if !m.iter().all(|z| z.is_finite()) {
        return Err("matrix has non-finite entries".into());
    }
    Ok(m)
}

pub const MATRIX_MAGIC: &[u8; 4] = b"MPSH";

/// `"MPSH"`, `u32` site count, then row-major `(re, im)` `f64` pairs, all
/// little-endian.
pub fn write_matrix_binary<W: Write>(mut w: W, n_sites: u32, m: &DMatrix<C64>) -> io::Result<()> {
    w.write_all(MATRIX_MAGIC)?;
    w.write_all(&n_sites.to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    w.flush()
}

pub fn read_matrix_binary(bytes: &[u8]) -> Result<(u32, DMatrix<C64>), String> {
    if bytes.len() < 8 || &bytes[..4] != MATRIX_MAGIC {
        return Err("missing MPSH header".into());
    }
    let n = u32::from_le_bytes(bytes[4..8].try_into().expect("four bytes"));
    let dim = 1usize
        .checked_shl(n)
        .filter(|_| n < 32)
        .ok_or_else(|| format!("site count {n} too large"))?;
    let body = &bytes[8..];
    if body.len() != dim * dim * 16 {
        return Err(format!("expected {} payload bytes, got {}", dim * dim * 16, body.len()));
    }
    let f = |k: usize| f64::from_le_bytes(body[8 * k..8 * k + 8].try_into().expect("eight bytes"));
    let m = DMatrix::from_fn(dim, dim, |i, j| {
        let k = 2 * (i * dim + j);
        C64::new(f(k), f(k + 1))
    });
    Ok((n, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(to_json_string(&1.0f64).unwrap(), "1.0000000000000000e0");
        assert_eq!(to_json_string(&-0.0f64).unwrap(), "0.0000000000000000e0");
        assert_eq!(
            to_json_string(&[0.1f64, 2.5e-300]).unwrap(),
            "[1.0000000000000001e-1,2.5000000000000000e-300]"
        );
        let back: f64 = serde_json::from_str(&to_json_string(&0.1f64).unwrap()).unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn binary_round_trip() {
        let m = DMatrix::from_fn(4, 4, |i, j| C64::new(i as f64, -(j as f64)));
        let mut buf = Vec::new();
        write_matrix_binary(&mut buf, 2, &m).unwrap();
        assert_eq!(&buf[..4], b"MPSH");
        assert_eq!(buf.len(), 8 + 16 * 16);
        let (n, back) = read_matrix_binary(&buf).unwrap();
        assert_eq!((n, back), (2, m));
    }

    #[test]
    fn matrix_parsing() {
        let m = parse_matrix("[[1,0],[0,[0,1]]]").unwrap();
        assert_eq!(m[(1, 1)], C64::new(0.0, 1.0));
        assert!(parse_matrix("[[1,0]]").is_err());
        assert!(parse_matrix("[]").is_err());
    }
}
