//! Binary library file.
//!
//! Little-endian layout:
//!
//! ```text
//! "MCXSLIB1"  u32 version=1  u32 n_nuclides
//!   per nuclide: u32 grid_len, f64 nu, grid_len f64 energies,
//!                grid_len f64 total, scatter, capture, fission
//! u32 n_materials
//!   per material: u32 n_entries, n_entries x (u32 nuclide_id, f64 density)
//! ```
//!
//! The generation seed is not part of the format; a library read back from
//! disk reports seed 0.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::library::{Library, Material};
use super::nuclide::NuclideXS;

pub const MAGIC: &[u8; 8] = b"MCXSLIB1";
pub const VERSION: u32 = 1;

pub fn encode_library(library: &Library) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(library.nuclides.len() as u32).to_le_bytes());
    for nuc in &library.nuclides {
        out.extend_from_slice(&(nuc.len() as u32).to_le_bytes());
        out.extend_from_slice(&nuc.nu.to_le_bytes());
        for channel in [
            &nuc.energy_grid,
            &nuc.total,
            &nuc.scatter,
            &nuc.capture,
            &nuc.fission,
        ] {
            for v in channel.iter() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    out.extend_from_slice(&(library.materials.len() as u32).to_le_bytes());
    for mat in &library.materials {
        out.extend_from_slice(&(mat.composition.len() as u32).to_le_bytes());
        for &(nid, density) in &mat.composition {
            out.extend_from_slice(&nid.to_le_bytes());
            out.extend_from_slice(&density.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format(format!("truncated at byte {}", self.pos)))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let raw = self.take(
            n.checked_mul(8)
                .ok_or_else(|| Error::Format("length overflow".into()))?,
        )?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

pub fn decode_library(bytes: &[u8]) -> Result<Library> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(8)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n_nuclides = r.u32()? as usize;
    let mut nuclides = Vec::with_capacity(n_nuclides.min(1 << 16));
    for _ in 0..n_nuclides {
        let len = r.u32()? as usize;
        let nu = r.f64()?;
        let energy_grid = r.f64s(len)?;
        let total = r.f64s(len)?;
        let scatter = r.f64s(len)?;
        let capture = r.f64s(len)?;
        let fission = r.f64s(len)?;
        nuclides.push(NuclideXS {
            energy_grid,
            total,
            scatter,
            capture,
            fission,
            nu,
        });
    }
    let n_materials = r.u32()? as usize;
    let mut materials = Vec::with_capacity(n_materials.min(1 << 16));
    for id in 0..n_materials {
        let n = r.u32()? as usize;
        let mut composition = Vec::with_capacity(n.min(1 << 16));
        for _ in 0..n {
            composition.push((r.u32()?, r.f64()?));
        }
        materials.push(Material {
            id: id as u32,
            composition,
        });
    }
    if r.pos != bytes.len() {
        return Err(Error::Format(format!(
            "{} trailing bytes",
            bytes.len() - r.pos
        )));
    }
    let lib = Library {
        nuclides,
        materials,
        generation_seed: 0,
    };
    lib.validate().map_err(|e| Error::Format(e.to_string()))?;
    Ok(lib)
}

pub fn write_library(library: &Library, path: &Path) -> Result<()> {
    fs::write(path, encode_library(library))?;
    Ok(())
}

pub fn read_library(path: &Path) -> Result<Library> {
    decode_library(&fs::read(path)?)
}

/// SHA-256 of the file encoding, hex formatted.
pub fn library_fingerprint(library: &Library) -> String {
    hex_digest(&encode_library(library))
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xslib::generate_synthetic_library;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let lib = generate_synthetic_library(2, 3, 1, 2, 0).unwrap();
        let bytes = encode_library(&lib);
        assert_eq!(&bytes[..8], b"MCXSLIB1");
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(bytes[16..20].try_into().unwrap()), 3);
        // 16 header + 2 x (4 + 8 + 5*3*8) + 4 + (4 + 2*12)
        assert_eq!(bytes.len(), 16 + 2 * (12 + 120) + 4 + 28);
    }

    #[test]
    fn rejects_corrupt_input() {
        let lib = generate_synthetic_library(2, 3, 1, 2, 0).unwrap();
        let bytes = encode_library(&lib);
        assert!(decode_library(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode_library(&bad).is_err());
        let mut extra = bytes;
        extra.push(0);
        assert!(decode_library(&extra).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn round_trip_is_bit_exact(n in 1usize..8, g in 2usize..30, m in 1usize..4, seed in 0u64..1000) {
            let k = n.min(3);
            let lib = generate_synthetic_library(n, g, m, k, seed).unwrap();
            let back = decode_library(&encode_library(&lib)).unwrap();
            prop_assert_eq!(encode_library(&back), encode_library(&lib));
            prop_assert_eq!(back.nuclides, lib.nuclides);
            prop_assert_eq!(back.materials, lib.materials);
        }
    }
}
