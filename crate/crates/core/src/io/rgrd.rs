use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"RGRD";
const VERSION: u16 = 1;
const HEADER: usize = 12;
pub const MAX_DIMS: usize = 8;

/// Dense row-major `f64` array, last index fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridArray {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl GridArray {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.len() > MAX_DIMS {
            return Err(Error::invalid(format!("grid needs 1..={MAX_DIMS} dimensions, got {}", dims.len())));
        }
        let len = dims.iter().try_fold(1usize, |a, &d| a.checked_mul(d));
        if len != Some(data.len()) {
            return Err(Error::invalid(format!("dims {dims:?} do not match {} values", data.len())));
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Bitwise equality, so NaN payloads compare equal to themselves.
    pub fn bit_eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.data.iter().zip(&other.data).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

pub fn encode_grid(a: &GridArray) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + 8 * (a.dims.len() + a.data.len()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&(a.dims.len() as u16).to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());
    for &d in &a.dims {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for v in &a.data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

pub fn decode_grid(bytes: &[u8]) -> Result<GridArray> {
    if bytes.len() < HEADER {
        return Err(Error::Format(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format(format!("bad magic {:?}", &bytes[..4])));
    }
    let version = u16_at(bytes, 4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let flags = u16_at(bytes, 6);
    if flags != 0 {
        return Err(Error::Format(format!("unknown flags {flags:#06x}")));
    }
    let ndim = u16_at(bytes, 8) as usize;
    if ndim == 0 || ndim > MAX_DIMS {
        return Err(Error::Format(format!("ndim {ndim} outside 1..={MAX_DIMS}")));
    }
    let dims_end = HEADER + 8 * ndim;
    if bytes.len() < dims_end {
        return Err(Error::Format("truncated dimension table".into()));
    }
    let dims: Vec<usize> = bytes[HEADER..dims_end]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()) as usize)
        .collect();
    let len = dims
        .iter()
        .try_fold(1usize, |a, &d| a.checked_mul(d))
        .ok_or_else(|| Error::Format(format!("dims {dims:?} overflow")))?;
    let payload = &bytes[dims_end..];
    if payload.len() != 8 * len {
        return Err(Error::Format(format!(
            "payload has {} bytes, dims {dims:?} need {}",
            payload.len(),
            8 * len
        )));
    }
    let data = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(GridArray { dims, data })
}

pub fn write_grid(path: impl AsRef<Path>, a: &GridArray) -> Result<()> {
    fs::write(path, encode_grid(a))?;
    Ok(())
}

pub fn read_grid(path: impl AsRef<Path>) -> Result<GridArray> {
    decode_grid(&fs::read(path)?)
}
