use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::library::Library;
use super::nuclide::MicroXS;
use super::union::UnionizedIndex;

/// Search strategy used to find the bounding grid interval.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Accel {
    #[default]
    Binary,
    DoubleIndex,
    Unionized,
}

impl Accel {
    pub const ALL: [Accel; 3] = [Accel::Binary, Accel::DoubleIndex, Accel::Unionized];
}

impl fmt::Display for Accel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Accel::Binary => "binary",
            Accel::DoubleIndex => "double_index",
            Accel::Unionized => "unionized",
        })
    }
}

impl FromStr for Accel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binary" => Ok(Accel::Binary),
            "double_index" => Ok(Accel::DoubleIndex),
            "unionized" => Ok(Accel::Unionized),
            other => Err(format!(
                "unknown lookup backend `{other}` (binary|double_index|unionized)"
            )),
        }
    }
}

/// Macroscopic cross sections (1/cm).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MacroXS {
    pub total: f64,
    pub scatter: f64,
    pub capture: f64,
    pub fission: f64,
    pub nu_fission: f64,
}

impl MacroXS {
    pub fn absorption(&self) -> f64 {
        self.capture + self.fission
    }

    #[inline]
    fn add(&mut self, p: &NuclidePartial) {
        self.total += p.total;
        self.scatter += p.scatter;
        self.capture += p.capture;
        self.fission += p.fission;
        self.nu_fission += p.nu_fission;
    }
}

/// One nuclide's density-weighted contribution to a macroscopic sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NuclidePartial {
    pub total: f64,
    pub scatter: f64,
    pub capture: f64,
    pub fission: f64,
    pub nu_fission: f64,
}

impl NuclidePartial {
    #[inline]
    pub fn new(density: f64, micro: MicroXS, nu: f64) -> Self {
        let fission = density * micro.fission;
        NuclidePartial {
            total: density * micro.total,
            scatter: density * micro.scatter,
            capture: density * micro.capture,
            fission,
            nu_fission: nu * fission,
        }
    }
}

/// Read-only view of a library plus the acceleration structure in use.
#[derive(Clone, Copy, Debug)]
pub struct XsTables<'a> {
    pub library: &'a Library,
    pub index: Option<&'a UnionizedIndex>,
    pub accel: Accel,
}

impl<'a> XsTables<'a> {
    pub fn new(
        library: &'a Library,
        accel: Accel,
        index: Option<&'a UnionizedIndex>,
    ) -> Result<Self> {
        if accel != Accel::Binary {
            let idx = index
                .ok_or_else(|| Error::Lookup(format!("backend {accel} needs a unionized index")))?;
            if idx.n_nuclides() != library.nuclides.len() {
                return Err(Error::Lookup(
                    "unionized index built for a different library".into(),
                ));
            }
        }
        Ok(XsTables {
            library,
            index,
            accel,
        })
    }

    #[inline]
    fn micro(&self, nuclide: usize, energy: f64, row: usize) -> MicroXS {
        let nuc = &self.library.nuclides[nuclide];
        match (self.accel, self.index) {
            (Accel::DoubleIndex, Some(idx)) => nuc.evaluate(idx.lower_index(row, nuclide), energy),
            (Accel::Unionized, Some(idx)) => idx
                .record(nuclide, idx.lower_index(row, nuclide))
                .evaluate(energy),
            _ => nuc.evaluate(nuc.interval(energy), energy),
        }
    }

    /// Σ_x = Σ_i N_i σ_x,i(E), accumulated in composition order. When
    /// `partials` is given it is overwritten with the per-nuclide terms.
    pub fn macro_xs(
        &self,
        material_id: u32,
        energy: f64,
        mut partials: Option<&mut Vec<NuclidePartial>>,
    ) -> Result<MacroXS> {
        if !energy.is_finite() || energy <= 0.0 {
            return Err(Error::InvalidEnergy(energy));
        }
        let material = self.library.material(material_id)?;
        let row = match self.index {
            Some(idx) if self.accel != Accel::Binary => idx.locate(energy),
            _ => 0,
        };
        if let Some(p) = partials.as_deref_mut() {
            p.clear();
        }
        let mut sum = MacroXS::default();
        for &(nid, density) in &material.composition {
            let nid = nid as usize;
            let micro = self.micro(nid, energy, row);
            let term = NuclidePartial::new(density, micro, self.library.nuclides[nid].nu);
            sum.add(&term);
            if let Some(p) = partials.as_deref_mut() {
                p.push(term);
            }
        }
        Ok(sum)
    }
}

/// One-shot macroscopic lookup returning the sums and the per-nuclide terms.
pub fn macro_lookup(
    library: &Library,
    material_id: u32,
    energy: f64,
    accel: Accel,
    index: Option<&UnionizedIndex>,
) -> Result<(MacroXS, Vec<NuclidePartial>)> {
    let tables = XsTables::new(library, accel, index)?;
    let mut partials = Vec::new();
    let sum = tables.macro_xs(material_id, energy, Some(&mut partials))?;
    Ok((sum, partials))
}
