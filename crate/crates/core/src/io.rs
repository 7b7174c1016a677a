//! Grid-function containers.
//!
//! Binary layout (all little-endian):
//!
//! ```text
//! "AGF1"                magic, 4 bytes
//! n                     u64
//! shape[n]              u64 each
//! cell_sizes[n]         f64 each
//! origin[n]             f64 each
//! domain[n]             u8 each (0 = line, 1 = half-line)
//! values[Π shape]       f64 each, row-major
//! ```
//!
//! The CSV import takes rows `i_1,…,i_n,value` (lines starting with `#` are
//! comments); the shape is the bounding box of the listed indices and
//! unlisted cells are zero.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::grid::{AxisDomain, GridFunction};

pub const MAGIC: &[u8; 4] = b"AGF1";

pub fn write_agf<W: Write>(f: &GridFunction, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(f.dims() as u64).to_le_bytes())?;
    for &s in f.shape() {
        w.write_all(&(s as u64).to_le_bytes())?;
    }
    for &c in f.cell_sizes() {
        w.write_all(&c.to_le_bytes())?;
    }
    for &o in f.origin() {
        w.write_all(&o.to_le_bytes())?;
    }
    for d in f.domains() {
        w.write_all(&[match d {
            AxisDomain::Line => 0u8,
            AxisDomain::HalfLine => 1u8,
        }])?;
    }
    for &v in f.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn to_agf_bytes(f: &GridFunction) -> Vec<u8> {
    let mut buf = Vec::with_capacity(4 + 8 * (1 + 3 * f.dims() + f.len()) + f.dims());
    write_agf(f, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_agf<R: Read>(mut r: R) -> Result<GridFunction> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let n = read_u64(&mut r)? as usize;
    if n == 0 || n > 16 {
        return Err(Error::Format(format!("implausible dimension {n}")));
    }
    let shape = (0..n)
        .map(|_| read_u64(&mut r).map(|s| s as usize))
        .collect::<Result<Vec<_>>>()?;
    let cell_sizes = (0..n).map(|_| read_f64(&mut r)).collect::<Result<Vec<_>>>()?;
    let origin = (0..n).map(|_| read_f64(&mut r)).collect::<Result<Vec<_>>>()?;
    let mut dom = vec![0u8; n];
    r.read_exact(&mut dom)?;
    let domains = dom
        .iter()
        .map(|d| match d {
            0 => Ok(AxisDomain::Line),
            1 => Ok(AxisDomain::HalfLine),
            x => Err(Error::Format(format!("unknown axis domain tag {x}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let count = shape
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .ok_or_else(|| Error::Format("shape overflows".into()))?;
    let values = (0..count).map(|_| read_f64(&mut r)).collect::<Result<Vec<_>>>()?;
    let f = GridFunction::new(shape, cell_sizes, origin.clone(), values)?.with_domains(domains);
    if f.origin() != origin.as_slice() {
        return Err(Error::Format("half-line axes must have origin 0".into()));
    }
    Ok(f)
}

/// Reads `i_1,…,i_n,value` rows. Values are taken in absolute value.
pub fn read_csv_cells<R: BufRead>(
    r: R,
    cell_sizes: Vec<f64>,
    origin: Vec<f64>,
) -> Result<GridFunction> {
    let n = cell_sizes.len();
    let mut rows: Vec<(Vec<usize>, f64)> = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != n + 1 {
            return Err(Error::Format(format!(
                "line {}: expected {} fields, got {}",
                lineno + 1,
                n + 1,
                fields.len()
            )));
        }
        let idx = fields[..n]
            .iter()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Format(format!("line {}: bad index '{s}'", lineno + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        let v: f64 = fields[n]
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad value '{}'", lineno + 1, fields[n])))?;
        rows.push((idx, v));
    }
    if rows.is_empty() {
        return Err(Error::Format("no cells listed".into()));
    }
    let shape: Vec<usize> = (0..n)
        .map(|k| rows.iter().map(|(i, _)| i[k]).max().unwrap() + 1)
        .collect();
    let count: usize = shape.iter().product();
    let mut values = vec![0.0; count];
    let proto = GridFunction::new(shape.clone(), cell_sizes.clone(), origin.clone(), vec![0.0; count])?;
    for (idx, v) in rows {
        values[proto.linear_index(&idx)] = v;
    }
    GridFunction::from_signed(shape, cell_sizes, origin, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agf_round_trip() {
        let f = GridFunction::new(vec![2, 3], vec![0.5, 0.25], vec![-1.0, 2.0], (0..6).map(f64::from).collect())
            .unwrap()
            .with_domains(vec![AxisDomain::Line, AxisDomain::HalfLine]);
        let bytes = to_agf_bytes(&f);
        assert_eq!(&bytes[..4], b"AGF1");
        assert_eq!(read_agf(&bytes[..]).unwrap(), f);
    }

    #[test]
    fn agf_rejects_garbage() {
        assert!(read_agf(&b"XXXX\0\0\0\0"[..]).is_err());
        let f = GridFunction::new(vec![1], vec![1.0], vec![0.0], vec![1.0]).unwrap();
        let bytes = to_agf_bytes(&f);
        assert!(read_agf(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn csv_import() {
        let text = "# hand case\n0,0,1\n1,2,-3\n";
        let f = read_csv_cells(text.as_bytes(), vec![1.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(f.shape(), &[2, 3]);
        assert_eq!(f.get(&[1, 2]), 3.0);
        assert_eq!(f.get(&[0, 1]), 0.0);
        assert!(read_csv_cells("0,1\n".as_bytes(), vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
    }
}
