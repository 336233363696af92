//! Discrete Fourier transforms along tangential and reflected vertical axes.

use std::cell::RefCell;
use std::f64::consts::PI;

use ndarray::{s, Array, Array2, Array3, Axis, Dimension, IxDyn};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::core::HalfSpaceGrid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place FFT along one axis. Forward is unnormalized, inverse divides by
/// the length.
pub(crate) fn fft_axis<D: Dimension>(a: &mut Array<Complex64, D>, axis: usize, inverse: bool) {
    let len = a.len_of(Axis(axis));
    if len <= 1 {
        return;
    }
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    });
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let scale = if inverse { 1.0 / len as f64 } else { 1.0 };
    for mut lane in a.lanes_mut(Axis(axis)) {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (v, b) in lane.iter_mut().zip(buf.iter()) {
            *v = *b * scale;
        }
    }
}

/// Applies the tangential transform to an array whose first axis is the
/// flattened tangential index.
fn tangential(grid: &HalfSpaceGrid, a: Array3<Complex64>, inverse: bool) -> Array3<Complex64> {
    let (m, nz, nt) = a.dim();
    if grid.n() == 2 {
        let mut a = a;
        fft_axis(&mut a, 0, inverse);
        a
    } else {
        let nn = grid.n_tan();
        let mut d = a
            .as_standard_layout()
            .into_owned()
            .into_shape_with_order(IxDyn(&[nn, nn, nz, nt]))
            .expect("tangential reshape");
        fft_axis(&mut d, 0, inverse);
        fft_axis(&mut d, 1, inverse);
        d.into_shape_with_order((m, nz, nt)).expect("tangential reshape back")
    }
}

fn complexify(a: &Array3<f64>) -> Array3<Complex64> {
    a.mapv(|v| Complex64::new(v, 0.0))
}

/// Tangential forward transform of `(tangential, vertical, time)` samples.
pub(crate) fn tan_forward(grid: &HalfSpaceGrid, a: &Array3<f64>) -> Array3<Complex64> {
    tangential(grid, complexify(a), false)
}

pub(crate) fn tan_inverse(grid: &HalfSpaceGrid, a: Array3<Complex64>) -> Array3<f64> {
    tangential(grid, a, true).mapv(|c| c.re)
}

/// Tangential forward transform of `(tangential, time)` boundary samples.
pub(crate) fn tan_forward2(grid: &HalfSpaceGrid, a: &Array2<f64>) -> Array2<Complex64> {
    let a3 = a.clone().insert_axis(Axis(1));
    tan_forward(grid, &a3).index_axis_move(Axis(1), 0)
}

pub(crate) fn tan_inverse2(grid: &HalfSpaceGrid, a: Array2<Complex64>) -> Array2<f64> {
    tan_inverse(grid, a.insert_axis(Axis(1))).index_axis_move(Axis(1), 0)
}

/// Full spatial transform of a whole-space array `(M, 2N_v−1, nt)`. The
/// vertical axis is periodic with period `2X`, so its last node (a copy of
/// the first) is dropped; the result has shape `(M, 2N_v−2, nt)`.
pub(crate) fn full_forward(grid: &HalfSpaceGrid, a: &Array3<f64>) -> Array3<Complex64> {
    let nz = a.len_of(Axis(1)) - 1;
    let mut c = complexify(&a.slice(s![.., ..nz, ..]).to_owned());
    fft_axis(&mut c, 1, false);
    tangential(grid, c, false)
}

pub(crate) fn full_inverse(grid: &HalfSpaceGrid, a: Array3<Complex64>) -> Array3<f64> {
    let mut c = tangential(grid, a, true);
    fft_axis(&mut c, 1, true);
    let (m, nz, nt) = c.dim();
    let mut out = Array3::zeros((m, nz + 1, nt));
    out.slice_mut(s![.., ..nz, ..]).assign(&c.mapv(|v| v.re));
    let first = out.slice(s![.., 0, ..]).to_owned();
    out.slice_mut(s![.., nz, ..]).assign(&first);
    out
}

/// Angular frequency of DFT index `i` on a length-`n` axis of period `p`.
pub(crate) fn freq(i: usize, n: usize, p: f64) -> f64 {
    let m = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
    2.0 * PI * m / p
}

/// As [`freq`], but zero on the Nyquist index of an even-length axis. Odd
/// symbols (derivatives, Riesz transforms) use this so that real fields
/// stay real.
pub(crate) fn freq_odd(i: usize, n: usize, p: f64) -> f64 {
    if n % 2 == 0 && i == n / 2 {
        0.0
    } else {
        freq(i, n, p)
    }
}

/// Tangential wavevectors per flattened mode; the second entry is zero for n = 2.
#[derive(Clone, Debug)]
pub(crate) struct TanWaves {
    pub k: Vec<[f64; 2]>,
    pub ko: Vec<[f64; 2]>,
}

impl TanWaves {
    pub fn new(grid: &HalfSpaceGrid) -> Self {
        let nn = grid.n_tan();
        let l = grid.period();
        let mut k = Vec::with_capacity(grid.tan_len());
        let mut ko = Vec::with_capacity(grid.tan_len());
        for idx in 0..grid.tan_len() {
            if grid.n() == 2 {
                k.push([freq(idx, nn, l), 0.0]);
                ko.push([freq_odd(idx, nn, l), 0.0]);
            } else {
                let (i1, i2) = (idx / nn, idx % nn);
                k.push([freq(i1, nn, l), freq(i2, nn, l)]);
                ko.push([freq_odd(i1, nn, l), freq_odd(i2, nn, l)]);
            }
        }
        Self { k, ko }
    }

    /// `|ξ'|` of mode `m`.
    pub fn norm(&self, m: usize) -> f64 {
        (self.k[m][0].powi(2) + self.k[m][1].powi(2)).sqrt()
    }
}

/// Vertical wavenumbers of the reflected axis, true and odd-zeroed.
pub(crate) fn vert_waves(grid: &HalfSpaceGrid) -> (Vec<f64>, Vec<f64>) {
    let nz = 2 * grid.n_vert() - 2;
    let p = 2.0 * grid.height();
    (
        (0..nz).map(|i| freq(i, nz, p)).collect(),
        (0..nz).map(|i| freq_odd(i, nz, p)).collect(),
    )
}

/// Full wavevectors `(ξ', ξ_n)` of a whole-space transform.
#[derive(Clone, Debug)]
pub(crate) struct FullWaves {
    pub n: usize,
    pub tan: TanWaves,
    pub kz: Vec<f64>,
    pub kzo: Vec<f64>,
}

impl FullWaves {
    pub fn new(grid: &HalfSpaceGrid) -> Self {
        let (kz, kzo) = vert_waves(grid);
        Self {
            n: grid.n(),
            tan: TanWaves::new(grid),
            kz,
            kzo,
        }
    }

    /// Odd-zeroed component `c` of the wavevector at `(m, v)`.
    pub fn odd(&self, m: usize, v: usize, c: usize) -> f64 {
        if c == self.n - 1 {
            self.kzo[v]
        } else {
            self.tan.ko[m][c]
        }
    }

    /// `|ξ|²` with the true frequencies.
    pub fn norm2(&self, m: usize, v: usize) -> f64 {
        self.tan.k[m][0].powi(2) + self.tan.k[m][1].powi(2) + self.kz[v].powi(2)
    }

    /// `|ξ̃|²` with the odd-zeroed frequencies.
    pub fn norm2_odd(&self, m: usize, v: usize) -> f64 {
        (0..self.n).map(|c| self.odd(m, v, c).powi(2)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_full_3d() {
        let g = HalfSpaceGrid::uniform(3, 4, 2.0, 5, 1.0, 2).unwrap();
        let a = Array3::from_shape_fn((16, 9, 3), |(i, j, k)| ((i * 7 + j * 3 + k) as f64).sin());
        let mut a = a;
        let first = a.slice(s![.., 0, ..]).to_owned();
        a.slice_mut(s![.., 8, ..]).assign(&first);
        let back = full_inverse(&g, full_forward(&g, &a));
        let err = (&back - &a).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn single_mode_lands_on_its_frequency() {
        let g = HalfSpaceGrid::uniform(2, 8, 2.0, 3, 1.0, 2).unwrap();
        let a = Array2::from_shape_fn((8, 3), |(i, _)| (2.0 * g.tan_point(i)[0]).cos());
        let f = tan_forward2(&g, &a);
        assert!((f[[2, 0]].re - 4.0).abs() < 1e-12);
        assert!((f[[6, 0]].re - 4.0).abs() < 1e-12);
        let w = TanWaves::new(&g);
        assert_eq!(w.k[2][0], 2.0);
        assert_eq!(w.k[6][0], -2.0);
        assert_eq!(w.ko[4][0], 0.0);
        assert_eq!(w.k[4][0], 4.0);
    }
}
