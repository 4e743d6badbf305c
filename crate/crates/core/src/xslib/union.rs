use super::library::Library;
use super::nuclide::{evaluate_interval, MicroXS, NuclideXS};

/// One grid interval with both end records stored side by side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalRecord {
    pub e0: f64,
    pub e1: f64,
    pub lo: MicroXS,
    pub hi: MicroXS,
}

impl IntervalRecord {
    #[inline]
    pub fn evaluate(&self, energy: f64) -> MicroXS {
        evaluate_interval(energy, self.e0, self.e1, self.lo, self.hi)
    }
}

/// Merged energy grid with, for every merged point, the bounding interval
/// of every nuclide.
///
/// Double indexing uses `union_grid` + `lower_index` and reads the nuclide
/// arrays; full unionization also reads the pre-merged `records`.
#[derive(Clone, Debug)]
pub struct UnionizedIndex {
    pub union_grid: Vec<f64>,
    n_nuclides: usize,
    /// Row-major `[union point][nuclide]`.
    map: Vec<u32>,
    records: Vec<Vec<IntervalRecord>>,
}

impl UnionizedIndex {
    pub fn n_nuclides(&self) -> usize {
        self.n_nuclides
    }

    /// Union-grid row bounding `energy`.
    #[inline]
    pub fn locate(&self, energy: f64) -> usize {
        self.union_grid
            .partition_point(|&g| g <= energy)
            .saturating_sub(1)
    }

    #[inline]
    pub fn lower_index(&self, row: usize, nuclide: usize) -> usize {
        self.map[row * self.n_nuclides + nuclide] as usize
    }

    #[inline]
    pub fn record(&self, nuclide: usize, lower: usize) -> &IntervalRecord {
        &self.records[nuclide][lower]
    }

    pub fn memory_bytes(&self) -> usize {
        self.union_grid.len() * 8
            + self.map.len() * 4
            + self
                .records
                .iter()
                .map(|r| r.len() * std::mem::size_of::<IntervalRecord>())
                .sum::<usize>()
    }
}

pub fn build_unionized_index(library: &Library) -> UnionizedIndex {
    let mut union_grid: Vec<f64> = library
        .nuclides
        .iter()
        .flat_map(|n| n.energy_grid.iter().copied())
        .collect();
    union_grid.sort_by(f64::total_cmp);
    union_grid.dedup();

    let n_nuclides = library.nuclides.len();
    let mut map = vec![0u32; union_grid.len() * n_nuclides];
    for (n, nuc) in library.nuclides.iter().enumerate() {
        let last = nuc.len() - 2;
        let mut i = 0usize;
        for (j, &u) in union_grid.iter().enumerate() {
            while i < last && nuc.energy_grid[i + 1] <= u {
                i += 1;
            }
            map[j * n_nuclides + n] = i as u32;
        }
    }
    let records = library.nuclides.iter().map(interval_records).collect();
    UnionizedIndex {
        union_grid,
        n_nuclides,
        map,
        records,
    }
}

fn interval_records(nuc: &NuclideXS) -> Vec<IntervalRecord> {
    (0..nuc.len() - 1)
        .map(|i| IntervalRecord {
            e0: nuc.energy_grid[i],
            e1: nuc.energy_grid[i + 1],
            lo: nuc.values_at(i),
            hi: nuc.values_at(i + 1),
        })
        .collect()
}
