//! Uniform grids for the three variables: a in [0,1], x on the flat torus
//! T^d (d = 1 or 2), and the level variable y on a bounded interval.

use crate::error::{Error, Result};

/// Uniform cell partition of [0,1] with midpoint samples a_i = (i+1/2)/n_a
/// and equal weights 1/n_a.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AGrid {
    pub n_a: usize,
}

impl AGrid {
    pub fn new(n_a: usize) -> Result<Self> {
        if n_a < 2 {
            return Err(Error::Config(format!("n_a must be >= 2, got {n_a}")));
        }
        Ok(Self { n_a })
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.n_a as f64
    }

    #[inline]
    pub fn weight(&self) -> f64 {
        1.0 / self.n_a as f64
    }
}

/// Periodic cell grid on the unit torus T^d, d in {1,2}.
///
/// Cell centers are (j+1/2)/n_x per direction; index arithmetic is modulo
/// the per-direction cell count. Flattened indexing is j0 + n[0]*j1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XGrid {
    n: Vec<usize>,
}

impl XGrid {
    pub fn new(n: &[usize]) -> Result<Self> {
        if n.is_empty() || n.len() > 2 {
            return Err(Error::Config(format!(
                "XGrid supports d in {{1,2}}, got d = {}",
                n.len()
            )));
        }
        if n.iter().any(|&c| c < 2) {
            return Err(Error::Config("XGrid needs >= 2 cells per direction".into()));
        }
        Ok(Self { n: n.to_vec() })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n.len()
    }

    #[inline]
    pub fn n(&self, axis: usize) -> usize {
        self.n[axis]
    }

    pub fn shape(&self) -> &[usize] {
        &self.n
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n.iter().product()
    }

    #[inline]
    pub fn dx(&self, axis: usize) -> f64 {
        1.0 / self.n[axis] as f64
    }

    /// Smallest spacing over all axes.
    pub fn dx_min(&self) -> f64 {
        (0..self.dim()).map(|ax| self.dx(ax)).fold(f64::INFINITY, f64::min)
    }

    /// Volume of one cell (the torus has unit total volume).
    #[inline]
    pub fn cell_volume(&self) -> f64 {
        1.0 / self.n_cells() as f64
    }

    #[inline]
    pub fn center(&self, axis: usize, j: usize) -> f64 {
        (j as f64 + 0.5) / self.n[axis] as f64
    }

    /// Flattened index of a multi-index (second entry ignored when d = 1).
    #[inline]
    pub fn index(&self, j: [usize; 2]) -> usize {
        if self.n.len() == 1 {
            j[0]
        } else {
            j[0] + self.n[0] * j[1]
        }
    }

    /// Multi-index of a flattened index.
    #[inline]
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        if self.n.len() == 1 {
            [idx, 0]
        } else {
            [idx % self.n[0], idx / self.n[0]]
        }
    }

    /// Position of the cell with flattened index `idx`.
    pub fn position(&self, idx: usize) -> [f64; 2] {
        let j = self.unflatten(idx);
        let mut p = [0.0; 2];
        for ax in 0..self.dim() {
            p[ax] = self.center(ax, j[ax]);
        }
        p
    }

    /// Periodic shift of a flattened index by whole cells per axis.
    #[inline]
    pub fn shift(&self, idx: usize, by: [i64; 2]) -> usize {
        let j = self.unflatten(idx);
        let mut out = [0usize; 2];
        for ax in 0..self.dim() {
            let n = self.n[ax] as i64;
            out[ax] = (((j[ax] as i64 + by[ax]) % n + n) % n) as usize;
        }
        self.index(out)
    }
}

/// Uniform grid for the level variable y on [y_min, y_max].
#[derive(Debug, Clone, PartialEq)]
pub struct YGrid {
    pub y_min: f64,
    pub y_max: f64,
    pub n_y: usize,
}

impl YGrid {
    pub fn new(y_min: f64, y_max: f64, n_y: usize) -> Result<Self> {
        if !(y_min < y_max) || n_y < 2 {
            return Err(Error::Config(format!(
                "invalid YGrid: [{y_min}, {y_max}] with {n_y} cells"
            )));
        }
        Ok(Self { y_min, y_max, n_y })
    }

    /// Grid sized to contain [lo, hi + horizon growth] with a 10% margin,
    /// so level values stay interior over a whole run.
    pub fn covering(lo: f64, hi: f64, n_y: usize, margin: f64) -> Result<Self> {
        let span = (hi - lo).max(1.0);
        let y_min = (lo - margin * span).min(0.0) - margin * span * 0.1;
        let y_max = hi + margin * span;
        Self::new(y_min, y_max, n_y)
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.n_y as f64
    }

    #[inline]
    pub fn center(&self, k: usize) -> f64 {
        self.y_min + (k as f64 + 0.5) * self.dy()
    }

    pub fn contains(&self, y: f64) -> bool {
        y > self.y_min && y < self.y_max
    }
}
