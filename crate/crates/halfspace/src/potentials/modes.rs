use crate::core::HalfSpaceGrid;
use crate::transforms::fft::TanWaves;

/// Tangential modes grouped by `|ξ'|`, so radial tables are built once per value.
#[derive(Clone, Debug)]
pub(crate) struct RadialModes {
    pub waves: TanWaves,
    /// Distinct `|ξ'|`, ascending.
    pub ks: Vec<f64>,
    /// Index into `ks` per flattened mode.
    pub of_mode: Vec<usize>,
}

impl RadialModes {
    pub fn new(grid: &HalfSpaceGrid) -> Self {
        let waves = TanWaves::new(grid);
        let k2: Vec<f64> = (0..grid.tan_len())
            .map(|m| waves.k[m][0].powi(2) + waves.k[m][1].powi(2))
            .collect();
        let mut uniq = k2.clone();
        uniq.sort_by(f64::total_cmp);
        uniq.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
        let of_mode = k2
            .iter()
            .map(|v| {
                uniq.iter()
                    .position(|u| (u - v).abs() <= 1e-12 * u.abs().max(1.0))
                    .expect("mode present")
            })
            .collect();
        Self {
            waves,
            ks: uniq.into_iter().map(f64::sqrt).collect(),
            of_mode,
        }
    }

    pub fn k(&self, m: usize) -> f64 {
        self.ks[self.of_mode[m]]
    }
}
