//! Flat binary field checkpoints.
//!
//! Layout, all little-endian:
//!
//! | offset | type     | content                            |
//! |--------|----------|------------------------------------|
//! | 0      | 4 bytes  | magic `KP2F`                       |
//! | 4      | u32      | format version (1)                 |
//! | 8      | u32      | nx                                 |
//! | 12     | u32      | ny                                 |
//! | 16     | f64      | lx                                 |
//! | 24     | f64      | ly                                 |
//! | 32     | u32      | flags, bit 0 set = spectral data   |
//! | 36     | nx·ny×8  | complex64 values (f32 re, f32 im)  |
//!
//! Values are row-major with x outermost. Spectral data is stored in FFT
//! order (see [`crate::grid`]).

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid2D, PhysicalField, SpectralField};

pub const MAGIC: &[u8; 4] = b"KP2F";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 36;
const FLAG_SPECTRAL: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Checkpoint {
    Physical(PhysicalField),
    Spectral(SpectralField),
}

impl Checkpoint {
    pub fn grid(&self) -> &Grid2D {
        match self {
            Checkpoint::Physical(f) => f.grid(),
            Checkpoint::Spectral(f) => f.grid(),
        }
    }

    fn values(&self) -> &[Complex64] {
        match self {
            Checkpoint::Physical(f) => f.values(),
            Checkpoint::Spectral(f) => f.coeffs(),
        }
    }
}

pub fn write<W: Write>(mut w: W, checkpoint: &Checkpoint) -> Result<()> {
    let g = checkpoint.grid();
    let flags = match checkpoint {
        Checkpoint::Spectral(_) => FLAG_SPECTRAL,
        Checkpoint::Physical(_) => 0,
    };
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * g.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(g.nx() as u32).to_le_bytes());
    buf.extend_from_slice(&(g.ny() as u32).to_le_bytes());
    buf.extend_from_slice(&g.lx().to_le_bytes());
    buf.extend_from_slice(&g.ly().to_le_bytes());
    buf.extend_from_slice(&flags.to_le_bytes());
    for v in checkpoint.values() {
        buf.extend_from_slice(&(v.re as f32).to_le_bytes());
        buf.extend_from_slice(&(v.im as f32).to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read<R: Read>(mut r: R) -> Result<Checkpoint> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|e| Error::Format(format!("truncated header: {e}")))?;
    if &header[0..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(header[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let grid = Grid2D::new(
        u32_at(8) as usize,
        u32_at(12) as usize,
        f64_at(16),
        f64_at(24),
    )?;
    let flags = u32_at(32);

    let mut body = vec![0u8; 8 * grid.len()];
    r.read_exact(&mut body)
        .map_err(|e| Error::Format(format!("truncated body: {e}")))?;
    let values: Vec<Complex64> = body
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes(c[0..4].try_into().unwrap());
            let im = f32::from_le_bytes(c[4..8].try_into().unwrap());
            Complex64::new(re as f64, im as f64)
        })
        .collect();

    Ok(if flags & FLAG_SPECTRAL != 0 {
        Checkpoint::Spectral(SpectralField::new(grid, values)?)
    } else {
        Checkpoint::Physical(PhysicalField::new(grid, values)?)
    })
}

pub fn save(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write(std::io::BufWriter::new(file), checkpoint)
}

pub fn load(path: &Path) -> Result<Checkpoint> {
    read(std::io::BufReader::new(std::fs::File::open(path)?))
}
