use crate::error::{Error, Result};

/// Lowest energy carried by any grid (eV).
pub const E_MIN: f64 = 1e-5;
/// Highest energy carried by any grid (eV).
pub const E_MAX: f64 = 2e7;

/// Pointwise microscopic data for one nuclide.
#[derive(Clone, Debug, PartialEq)]
pub struct NuclideXS {
    pub energy_grid: Vec<f64>,
    pub total: Vec<f64>,
    pub scatter: Vec<f64>,
    pub capture: Vec<f64>,
    pub fission: Vec<f64>,
    pub nu: f64,
}

/// Microscopic values of every channel at one energy (barns).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MicroXS {
    pub total: f64,
    pub scatter: f64,
    pub capture: f64,
    pub fission: f64,
}

impl NuclideXS {
    /// Builds a nuclide whose total is the exact sum of its partials.
    pub fn from_partials(
        energy_grid: Vec<f64>,
        scatter: Vec<f64>,
        capture: Vec<f64>,
        fission: Vec<f64>,
        nu: f64,
    ) -> Result<Self> {
        let total = scatter
            .iter()
            .zip(&capture)
            .zip(&fission)
            .map(|((s, c), f)| s + c + f)
            .collect();
        let nuc = NuclideXS {
            energy_grid,
            total,
            scatter,
            capture,
            fission,
            nu,
        };
        nuc.validate()?;
        Ok(nuc)
    }

    /// Energy-independent nuclide on the two-point grid [E_MIN, E_MAX].
    pub fn constant(scatter: f64, capture: f64, fission: f64, nu: f64) -> Result<Self> {
        Self::from_partials(
            vec![E_MIN, E_MAX],
            vec![scatter; 2],
            vec![capture; 2],
            vec![fission; 2],
            nu,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.energy_grid.len();
        if n < 2 {
            return Err(Error::Config(
                "energy grid needs at least two points".into(),
            ));
        }
        for ch in [&self.total, &self.scatter, &self.capture, &self.fission] {
            if ch.len() != n {
                return Err(Error::Config(
                    "channel length differs from grid length".into(),
                ));
            }
        }
        if !self.energy_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("energy grid not strictly increasing".into()));
        }
        if self.energy_grid[0] < E_MIN || self.energy_grid[n - 1] > E_MAX {
            return Err(Error::Config("energy grid outside [1e-5, 2e7] eV".into()));
        }
        let positive = |v: &[f64]| v.iter().all(|x| *x > 0.0 && x.is_finite());
        if !positive(&self.scatter) || !positive(&self.capture) || !positive(&self.fission) {
            return Err(Error::Config("cross sections must be positive".into()));
        }
        if !(self.nu >= 0.0) {
            return Err(Error::Config("nu must be non-negative".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.energy_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energy_grid.is_empty()
    }

    pub fn is_fissionable(&self) -> bool {
        self.nu > 0.0
    }

    /// Lower index of the interval used to evaluate `energy`, in `0..len-1`.
    #[inline]
    pub fn interval(&self, energy: f64) -> usize {
        let above = self.energy_grid.partition_point(|&g| g <= energy);
        above.saturating_sub(1).min(self.energy_grid.len() - 2)
    }

    #[inline]
    pub fn values_at(&self, i: usize) -> MicroXS {
        MicroXS {
            total: self.total[i],
            scatter: self.scatter[i],
            capture: self.capture[i],
            fission: self.fission[i],
        }
    }

    /// Evaluates the interval starting at `lower`.
    #[inline]
    pub fn evaluate(&self, lower: usize, energy: f64) -> MicroXS {
        evaluate_interval(
            energy,
            self.energy_grid[lower],
            self.energy_grid[lower + 1],
            self.values_at(lower),
            self.values_at(lower + 1),
        )
    }
}

/// Linear interpolation on one interval, clamped to its end values.
///
/// Every lookup backend funnels through here so that they agree bit for bit.
#[inline]
pub fn evaluate_interval(energy: f64, e0: f64, e1: f64, lo: MicroXS, hi: MicroXS) -> MicroXS {
    if energy <= e0 {
        return lo;
    }
    if energy >= e1 {
        return hi;
    }
    let f = (energy - e0) / (e1 - e0);
    MicroXS {
        total: lo.total + f * (hi.total - lo.total),
        scatter: lo.scatter + f * (hi.scatter - lo.scatter),
        capture: lo.capture + f * (hi.capture - lo.capture),
        fission: lo.fission + f * (hi.fission - lo.fission),
    }
}

/// Binary-search lookup of one nuclide.
pub fn micro_lookup(nuclide: &NuclideXS, energy: f64) -> Result<MicroXS> {
    if !energy.is_finite() || energy <= 0.0 {
        return Err(Error::InvalidEnergy(energy));
    }
    Ok(nuclide.evaluate(nuclide.interval(energy), energy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> NuclideXS {
        NuclideXS::from_partials(
            vec![1.0, 3.0],
            vec![2.0, 6.0],
            vec![1.0, 0.5],
            vec![0.25, 4.0],
            2.43,
        )
        .unwrap()
    }

    #[test]
    fn grid_point_returns_tabulated_values() {
        let nuc = two_point();
        assert_eq!(micro_lookup(&nuc, 1.0).unwrap(), nuc.values_at(0));
        assert_eq!(micro_lookup(&nuc, 3.0).unwrap(), nuc.values_at(1));
    }

    #[test]
    fn midpoint_is_arithmetic_mean() {
        let nuc = two_point();
        let got = micro_lookup(&nuc, 2.0).unwrap();
        // hand interpolation: halfway between the tabulated pairs
        let expect = [(2.0 + 6.0) / 2.0, (1.0 + 0.5) / 2.0, (0.25 + 4.0) / 2.0];
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(got.scatter, expect[0]) <= 1e-15);
        assert!(rel(got.capture, expect[1]) <= 1e-15);
        assert!(rel(got.fission, expect[2]) <= 1e-15);
        assert!(rel(got.total, (3.25 + 10.5) / 2.0) <= 1e-15);
    }

    #[test]
    fn clamps_outside_grid() {
        let nuc = two_point();
        assert_eq!(micro_lookup(&nuc, 1e-9).unwrap(), nuc.values_at(0));
        assert_eq!(micro_lookup(&nuc, 1e9).unwrap(), nuc.values_at(1));
    }

    #[test]
    fn rejects_non_finite_energy() {
        let nuc = two_point();
        assert!(matches!(
            micro_lookup(&nuc, f64::NAN),
            Err(Error::InvalidEnergy(_))
        ));
        assert!(matches!(
            micro_lookup(&nuc, f64::INFINITY),
            Err(Error::InvalidEnergy(_))
        ));
    }

    #[test]
    fn total_is_sum_of_partials() {
        let nuc = two_point();
        for i in 0..nuc.len() {
            assert_eq!(
                nuc.total[i],
                nuc.scatter[i] + nuc.capture[i] + nuc.fission[i]
            );
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(NuclideXS::from_partials(
            vec![2.0, 1.0],
            vec![1.0; 2],
            vec![1.0; 2],
            vec![1.0; 2],
            0.0
        )
        .is_err());
        assert!(NuclideXS::from_partials(vec![1.0], vec![1.0], vec![1.0], vec![1.0], 0.0).is_err());
        assert!(NuclideXS::from_partials(
            vec![1.0, 2.0],
            vec![0.0; 2],
            vec![1.0; 2],
            vec![1.0; 2],
            0.0
        )
        .is_err());
    }
}
