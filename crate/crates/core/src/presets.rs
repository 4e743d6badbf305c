//! Ready-made problems: the depleted pincell benchmark, the analytic
//! infinite medium, and whatever a config file describes.

use crate::config::{GeometryParams, LibrarySource, Settings};
use crate::error::{Error, Result};
use crate::geometry::Pincell;
use crate::transport::Problem;
use crate::xslib::{pincell_library, read_library, Library, Material, NuclideXS};

/// Shape of the depleted pincell benchmark.
#[derive(Clone, Debug, PartialEq)]
pub struct PincellPreset {
    pub nuclides: usize,
    pub fuel_nuclides: usize,
    pub gridpoints: usize,
    pub n_axial: u32,
    pub library_seed: u64,
}

impl Default for PincellPreset {
    /// 251 nuclides in every fuel material, 100 distinct axial fuel regions.
    fn default() -> Self {
        PincellPreset {
            nuclides: 251,
            fuel_nuclides: 251,
            gridpoints: 200,
            n_axial: 100,
            library_seed: 1,
        }
    }
}

/// Depleted pincell with one fuel material per axial segment, all backends
/// ready (the unionized index is built).
pub fn depleted_pincell(preset: &PincellPreset) -> Result<Problem> {
    let lib = pincell_library(
        preset.nuclides,
        preset.gridpoints,
        preset.n_axial as usize,
        preset.fuel_nuclides,
        preset.library_seed,
    )?;
    let geometry = GeometryParams {
        n_axial: preset.n_axial,
        ..GeometryParams::default()
    }
    .build(preset.n_axial)?;
    Ok(Problem::new(lib, geometry)?.with_index())
}

/// Constant cross sections for the one-nuclide infinite medium.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfiniteMedium {
    pub scatter: f64,
    pub capture: f64,
    pub fission: f64,
    pub nu: f64,
    pub density: f64,
}

impl Default for InfiniteMedium {
    fn default() -> Self {
        InfiniteMedium {
            scatter: 2.0,
            capture: 0.5,
            fission: 0.5,
            nu: 2.43,
            density: 1.0,
        }
    }
}

impl InfiniteMedium {
    /// ν σf / (σc + σf).
    pub fn k_infinity(&self) -> f64 {
        self.nu * self.fission / (self.capture + self.fission)
    }
}

/// Reflective cell with a single axial segment where fuel and moderator
/// share the same one-nuclide material, so the cell is homogeneous.
pub fn infinite_medium(m: &InfiniteMedium) -> Result<Problem> {
    let nuc = NuclideXS::constant(m.scatter, m.capture, m.fission, m.nu)?;
    let mat = Material {
        id: 0,
        composition: vec![(0, m.density)],
    };
    let lib = Library::new(vec![nuc], vec![mat], 0)?;
    let g = GeometryParams::default();
    let geometry = Pincell::new(g.fuel_radius, g.pitch, g.height, 1, vec![0], 0)?;
    Ok(Problem::new(lib, geometry)?.with_index())
}

/// Builds the problem a config file describes. A generated library has one
/// fuel material per axial segment plus the moderator. A library read from
/// disk with M materials fills the slabs cyclically from materials
/// `0..M-1` and uses material `M-1` as moderator.
pub fn problem_from_settings(settings: &Settings) -> Result<Problem> {
    let (lib, n_fuel) = match settings.source() {
        LibrarySource::File(path) => {
            let lib = read_library(&path)?;
            if lib.materials.len() < 2 {
                return Err(Error::Config(format!(
                    "library {} needs at least one fuel material and a moderator",
                    path.display()
                )));
            }
            let n_fuel = lib.materials.len() as u32 - 1;
            (lib, n_fuel)
        }
        LibrarySource::Generate {
            nuclides,
            gridpoints,
            per_material,
            seed,
        } => {
            let n_fuel = settings.geometry.n_axial;
            let lib = pincell_library(
                nuclides,
                gridpoints,
                n_fuel as usize,
                per_material.min(nuclides),
                seed,
            )?;
            (lib, n_fuel)
        }
    };
    let geometry = settings.geometry.build(n_fuel)?;
    let mut problem = Problem::new(lib, geometry)?;
    if settings.run.accel != crate::xslib::Accel::Binary {
        problem.ensure_index();
    }
    Ok(problem)
}
