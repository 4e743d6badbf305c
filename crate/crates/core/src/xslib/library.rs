use crate::error::{Error, Result};
use crate::prng::RngState;

use super::nuclide::{NuclideXS, E_MAX, E_MIN};

/// Fission yield given to every fissionable synthetic nuclide.
pub const SYNTHETIC_NU: f64 = 2.43;
/// Fraction of synthetic nuclides that are fissionable.
pub const FISSIONABLE_FRACTION: f64 = 0.2;
/// Fission cross section floor for non-fissionable nuclides (barns).
pub const FISSION_FLOOR: f64 = 1e-6;

const XS_MIN: f64 = 0.1;
const XS_MAX: f64 = 20.0;
const DENSITY_MIN: f64 = 1e-4;
const DENSITY_MAX: f64 = 1e-1;
/// Number of smooth segments in each synthetic channel.
const KNOTS: usize = 6;
/// Atom densities of the three-nuclide moderator, loosely after light water
/// with a trace absorber.
const MODERATOR_DENSITIES: [f64; 3] = [6.68e-2, 3.34e-2, 1.0e-3];

#[derive(Clone, Debug, PartialEq)]
pub struct Material {
    pub id: u32,
    /// `(nuclide id, atom density in atoms/(barn cm))`, in summation order.
    pub composition: Vec<(u32, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Library {
    pub nuclides: Vec<NuclideXS>,
    pub materials: Vec<Material>,
    pub generation_seed: u64,
}

impl Library {
    pub fn new(
        nuclides: Vec<NuclideXS>,
        materials: Vec<Material>,
        generation_seed: u64,
    ) -> Result<Self> {
        let lib = Library {
            nuclides,
            materials,
            generation_seed,
        };
        lib.validate()?;
        Ok(lib)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nuclides.is_empty() {
            return Err(Error::Config("library has no nuclides".into()));
        }
        for nuc in &self.nuclides {
            nuc.validate()?;
        }
        for (idx, mat) in self.materials.iter().enumerate() {
            if mat.id as usize != idx {
                return Err(Error::Config(format!(
                    "material {} stored at index {idx}",
                    mat.id
                )));
            }
            let mut seen = vec![false; self.nuclides.len()];
            for &(nid, density) in &mat.composition {
                let slot = seen.get_mut(nid as usize).ok_or_else(|| {
                    Error::Config(format!("material {} references nuclide {nid}", mat.id))
                })?;
                if *slot {
                    return Err(Error::Config(format!(
                        "material {} lists nuclide {nid} twice",
                        mat.id
                    )));
                }
                *slot = true;
                if !(density > 0.0) || !density.is_finite() {
                    return Err(Error::Config(format!(
                        "material {} has density {density}",
                        mat.id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn material(&self, id: u32) -> Result<&Material> {
        self.materials
            .get(id as usize)
            .ok_or_else(|| Error::Lookup(format!("unknown material {id}")))
    }

    /// Largest composition length over all materials.
    pub fn max_composition(&self) -> usize {
        self.materials
            .iter()
            .map(|m| m.composition.len())
            .max()
            .unwrap_or(0)
    }
}

/// Builds a seeded synthetic library.
pub fn generate_synthetic_library(
    n_nuclides: usize,
    gridpoints_per_nuclide: usize,
    n_materials: usize,
    nuclides_per_material: usize,
    seed: u64,
) -> Result<Library> {
    if n_nuclides == 0 || n_materials == 0 || nuclides_per_material == 0 {
        return Err(Error::Config("library counts must be at least 1".into()));
    }
    if gridpoints_per_nuclide < 2 {
        return Err(Error::Config(
            "gridpoints per nuclide must be at least 2".into(),
        ));
    }
    if nuclides_per_material > n_nuclides {
        return Err(Error::Config(format!(
            "{nuclides_per_material} nuclides per material exceeds library size {n_nuclides}"
        )));
    }
    if n_nuclides > u32::MAX as usize || n_materials > u32::MAX as usize {
        return Err(Error::Config("library counts exceed u32".into()));
    }
    let mut rng = RngState::new(seed);
    let nuclides = (0..n_nuclides)
        .map(|_| synthetic_nuclide(&mut rng, gridpoints_per_nuclide))
        .collect::<Result<Vec<_>>>()?;
    let materials = (0..n_materials)
        .map(|id| synthetic_material(&mut rng, id as u32, n_nuclides, nuclides_per_material))
        .collect();
    Library::new(nuclides, materials, seed)
}

fn uniform_in(rng: &mut RngState, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.next_uniform()
}

fn synthetic_nuclide(rng: &mut RngState, points: usize) -> Result<NuclideXS> {
    let (l0, l1) = (E_MIN.ln(), E_MAX.ln());
    let h = (l1 - l0) / (points - 1) as f64;
    let mut grid = Vec::with_capacity(points);
    grid.push(E_MIN);
    for k in 1..points - 1 {
        let jitter = 0.8 * (rng.next_uniform() - 0.5);
        grid.push((l0 + (k as f64 + jitter) * h).exp());
    }
    grid.push(E_MAX);

    let fissionable = rng.next_uniform() < FISSIONABLE_FRACTION;
    let scatter = smooth_channel(rng, &grid);
    let capture = smooth_channel(rng, &grid);
    let (fission, nu) = if fissionable {
        (smooth_channel(rng, &grid), SYNTHETIC_NU)
    } else {
        (vec![FISSION_FLOOR; points], 0.0)
    };
    NuclideXS::from_partials(grid, scatter, capture, fission, nu)
}

/// Piecewise-linear-in-log-energy curve through random knot values.
fn smooth_channel(rng: &mut RngState, grid: &[f64]) -> Vec<f64> {
    let knots: Vec<f64> = (0..=KNOTS)
        .map(|_| uniform_in(rng, XS_MIN, XS_MAX))
        .collect();
    let (l0, l1) = (E_MIN.ln(), E_MAX.ln());
    grid.iter()
        .map(|e| {
            let x = ((e.ln() - l0) / (l1 - l0) * KNOTS as f64).clamp(0.0, KNOTS as f64);
            let k = (x.floor() as usize).min(KNOTS - 1);
            let f = x - k as f64;
            (knots[k] + f * (knots[k + 1] - knots[k])).clamp(XS_MIN, XS_MAX)
        })
        .collect()
}

fn synthetic_material(rng: &mut RngState, id: u32, n_nuclides: usize, count: usize) -> Material {
    // partial Fisher-Yates over the nuclide ids
    let mut pool: Vec<u32> = (0..n_nuclides as u32).collect();
    for i in 0..count {
        let j =
            i + ((rng.next_uniform() * (n_nuclides - i) as f64) as usize).min(n_nuclides - i - 1);
        pool.swap(i, j);
    }
    let mut chosen = pool[..count].to_vec();
    chosen.sort_unstable();
    let composition = chosen
        .into_iter()
        .map(|nid| (nid, uniform_in(rng, DENSITY_MIN, DENSITY_MAX)))
        .collect();
    Material { id, composition }
}

/// Library layout for the pincell problem: `n_fuel` fuel materials (one per
/// axial segment) followed by a three-nuclide moderator.
pub fn pincell_library(
    n_nuclides: usize,
    gridpoints: usize,
    n_fuel: usize,
    fuel_nuclides: usize,
    seed: u64,
) -> Result<Library> {
    let mut lib = generate_synthetic_library(n_nuclides, gridpoints, n_fuel, fuel_nuclides, seed)?;
    let mut picks: Vec<u32> = (0..n_nuclides as u32)
        .filter(|&i| !lib.nuclides[i as usize].is_fissionable())
        .take(MODERATOR_DENSITIES.len())
        .collect();
    let mut next = 0u32;
    while picks.len() < MODERATOR_DENSITIES.len().min(n_nuclides) {
        if !picks.contains(&next) {
            picks.push(next);
        }
        next += 1;
    }
    picks.sort_unstable();
    let composition = picks.into_iter().zip(MODERATOR_DENSITIES).collect();
    lib.materials.push(Material {
        id: n_fuel as u32,
        composition,
    });
    lib.validate()?;
    Ok(lib)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = generate_synthetic_library(20, 50, 4, 10, 9).unwrap();
        let b = generate_synthetic_library(20, 50, 4, 10, 9).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic_library(20, 50, 4, 10, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn full_fuel_material_has_all_nuclides() {
        let lib = generate_synthetic_library(251, 8, 1, 251, 1).unwrap();
        let ids: Vec<u32> = lib.materials[0].composition.iter().map(|c| c.0).collect();
        assert_eq!(ids, (0..251).collect::<Vec<_>>());
    }

    #[test]
    fn generated_nuclides_satisfy_invariants() {
        let lib = generate_synthetic_library(60, 40, 3, 5, 3).unwrap();
        let mut fissionable = 0;
        for nuc in &lib.nuclides {
            assert_eq!(nuc.energy_grid[0], E_MIN);
            assert_eq!(*nuc.energy_grid.last().unwrap(), E_MAX);
            assert!(nuc.energy_grid.windows(2).all(|w| w[0] < w[1]));
            for i in 0..nuc.len() {
                assert_eq!(
                    nuc.total[i],
                    nuc.scatter[i] + nuc.capture[i] + nuc.fission[i]
                );
                assert!((XS_MIN..=XS_MAX).contains(&nuc.scatter[i]));
            }
            if nuc.is_fissionable() {
                fissionable += 1;
                assert_eq!(nuc.nu, SYNTHETIC_NU);
            } else {
                assert!(nuc.fission.iter().all(|&f| f == FISSION_FLOOR));
                assert_eq!(nuc.nu, 0.0);
            }
        }
        assert!(fissionable > 0 && fissionable < 60);
        for mat in &lib.materials {
            assert!(mat.composition.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(mat
                .composition
                .iter()
                .all(|c| (DENSITY_MIN..=DENSITY_MAX).contains(&c.1)));
        }
    }

    #[test]
    fn invalid_counts_are_config_errors() {
        assert!(matches!(
            generate_synthetic_library(0, 10, 1, 1, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            generate_synthetic_library(5, 10, 1, 6, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            generate_synthetic_library(5, 1, 1, 1, 0),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            generate_synthetic_library(5, 10, 0, 1, 0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn pincell_layout_appends_moderator() {
        let lib = pincell_library(30, 20, 4, 30, 5).unwrap();
        assert_eq!(lib.materials.len(), 5);
        let moderator = &lib.materials[4];
        assert_eq!(moderator.composition.len(), 3);
        assert!(moderator
            .composition
            .iter()
            .all(|&(n, _)| !lib.nuclides[n as usize].is_fissionable()));
    }
}
