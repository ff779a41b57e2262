//! Binary cell table: the magic bytes `RZK1`, a `u32` ambient rank, a `u64`
//! cell count, then one record per cell of a `u32` support mask followed by a
//! `u64` sign mask. All integers are little-endian.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::complex::{CubeCell, CubicalComplex};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"RZK1";

pub fn write_binary_to(w: &mut impl Write, z: &CubicalComplex) -> Result<()> {
    if z.is_quotient() {
        return Err(Error::Unsupported("the binary table has no field for a sign group".into()));
    }
    if z.ambient_rank() > 32 {
        return Err(Error::Unsupported(format!(
            "ambient rank {} does not fit a 32-bit support mask",
            z.ambient_rank()
        )));
    }
    w.write_all(MAGIC)?;
    w.write_all(&(z.ambient_rank() as u32).to_le_bytes())?;
    w.write_all(&(z.cell_count() as u64).to_le_bytes())?;
    for c in z.all_cells() {
        w.write_all(&(c.support as u32).to_le_bytes())?;
        w.write_all(&c.signs.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary_from(r: &mut impl Read) -> Result<CubicalComplex> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Parse("missing RZK1 header".into()));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4)?;
    let rank = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b8)?;
    let count = u64::from_le_bytes(b8);
    let cap = crate::cell_budget();
    if count > cap {
        return Err(Error::BudgetExceeded {
            needed: count.to_string(),
            cap,
        });
    }
    let mut cells = Vec::with_capacity(count as usize);
    for _ in 0..count {
        r.read_exact(&mut b4)?;
        r.read_exact(&mut b8)?;
        cells.push(CubeCell::new(u32::from_le_bytes(b4) as u64, u64::from_le_bytes(b8)));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Parse("trailing bytes after the cell table".into()));
    }
    CubicalComplex::new(rank, cells)
}

pub fn write_binary(path: &Path, z: &CubicalComplex) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_binary_to(&mut w, z)?;
    w.flush()?;
    Ok(())
}

pub fn read_binary(path: &Path) -> Result<CubicalComplex> {
    read_binary_from(&mut BufReader::new(File::open(path)?))
}
