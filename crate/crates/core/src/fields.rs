//! Discrete level-set and conserved fields and the transform algebra
//! between them: generalized inverse, inverse recovery, monotone
//! rearrangement, co-area distance, kinetic density, norms and total
//! variation.
//!
//! Heaviside convention: strict, H(s) = 1 iff s > 0, used uniformly in all
//! counting sums so the discrete identities hold exactly.

use crate::error::{Error, Result};
use crate::grid::{AGrid, XGrid, YGrid};

/// Discrete Y(a,x) on an (a,x)-grid, monotone nondecreasing in a.
///
/// Storage is per x-column contiguous in a, so per-column sorting and
/// inversion work on slices.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetField {
    pub agrid: AGrid,
    pub xgrid: XGrid,
    values: Vec<f64>,
}

/// Discrete u(y,x) on a (y,x)-grid, values in [0,1], monotone in y,
/// with u = 0 at the bottom and u = 1 at the top of the y-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedField {
    pub ygrid: YGrid,
    pub xgrid: XGrid,
    values: Vec<f64>,
}

/// Discrete kinetic density f(a,y,x) in {0,1}: f = 1 iff u(y,x) >= a.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticDensity {
    pub agrid: AGrid,
    pub ygrid: YGrid,
    pub xgrid: XGrid,
    values: Vec<u8>,
}

impl LevelSetField {
    /// Builds from a sampler of (a, x) at cell centers (x given per axis).
    pub fn from_fn(agrid: AGrid, xgrid: XGrid, f: impl Fn(f64, [f64; 2]) -> f64) -> Self {
        let n_a = agrid.n_a;
        let n_x = xgrid.n_cells();
        let mut values = vec![0.0; n_a * n_x];
        for j in 0..n_x {
            let x = xgrid.position(j);
            for i in 0..n_a {
                values[j * n_a + i] = f(agrid.center(i), x);
            }
        }
        Self { agrid, xgrid, values }
    }

    pub fn from_values(agrid: AGrid, xgrid: XGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != agrid.n_a * xgrid.n_cells() {
            return Err(Error::GridMismatch(format!(
                "levelset values: got {}, expected {}",
                values.len(),
                agrid.n_a * xgrid.n_cells()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invariant("non-finite levelset value".into()));
        }
        Ok(Self { agrid, xgrid, values })
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[f64] {
        let n_a = self.agrid.n_a;
        &self.values[j * n_a..(j + 1) * n_a]
    }

    #[inline]
    pub fn column_mut(&mut self, j: usize) -> &mut [f64] {
        let n_a = self.agrid.n_a;
        &mut self.values[j * n_a..(j + 1) * n_a]
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.agrid.n_a + i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Number of (i,j) cells where monotonicity in a fails.
    pub fn monotonicity_violations(&self) -> usize {
        let mut count = 0;
        for j in 0..self.xgrid.n_cells() {
            let col = self.column(j);
            count += col.windows(2).filter(|w| w[1] < w[0]).count();
        }
        count
    }

    pub fn check_monotone(&self) -> Result<()> {
        match self.monotonicity_violations() {
            0 => Ok(()),
            n => Err(Error::Invariant(format!(
                "levelset not monotone in a ({n} violations)"
            ))),
        }
    }

    /// Sorts every x-column ascending in a (the rearrangement of each column).
    pub fn rearranged(&self) -> Self {
        let mut out = self.clone();
        for j in 0..out.xgrid.n_cells() {
            out.column_mut(j).sort_by(f64::total_cmp);
        }
        out
    }

    /// The y-slice u(y, x) = (1/n_a) #{i : Y(a_i, x) < y} for all x-cells.
    pub fn u_at(&self, y: f64) -> Vec<f64> {
        let n_a = self.agrid.n_a as f64;
        (0..self.xgrid.n_cells())
            .map(|j| self.column(j).iter().filter(|&&v| v < y).count() as f64 / n_a)
            .collect()
    }

    /// Generalized inverse of every column on a shared y-grid.
    pub fn to_conserved(&self, yg: &YGrid) -> Result<ConservedField> {
        let n_x = self.xgrid.n_cells();
        let mut values = vec![0.0; yg.n_y * n_x];
        for j in 0..n_x {
            let v = generalized_inverse(self.column(j), yg)?;
            values[j * yg.n_y..(j + 1) * yg.n_y].copy_from_slice(&v);
        }
        Ok(ConservedField {
            ygrid: yg.clone(),
            xgrid: self.xgrid.clone(),
            values,
        })
    }

    /// L^p distance with the (a,x) product measure.
    pub fn lp_distance(&self, other: &Self, p: f64) -> Result<f64> {
        if self.agrid != other.agrid || self.xgrid != other.xgrid {
            return Err(Error::GridMismatch("lp_distance on different grids".into()));
        }
        let w = self.agrid.weight() * self.xgrid.cell_volume();
        Ok(lp_norm_weighted(
            self.values.iter().zip(&other.values).map(|(a, b)| a - b),
            w,
            p,
        ))
    }

    /// Discrete one-cell forward-difference gradient norm
    /// ||grad_x Y||_{L^p} along all x-axes (periodic).
    pub fn grad_x_lp(&self, p: f64) -> f64 {
        let w = self.agrid.weight() * self.xgrid.cell_volume();
        let mut acc = 0.0;
        for j in 0..self.xgrid.n_cells() {
            for ax in 0..self.xgrid.dim() {
                let mut by = [0i64; 2];
                by[ax] = 1;
                let jn = self.xgrid.shift(j, by);
                let dx = self.xgrid.dx(ax);
                for i in 0..self.agrid.n_a {
                    let d = (self.value(i, jn) - self.value(i, j)) / dx;
                    acc += w * d.abs().powf(p);
                }
            }
        }
        acc.powf(1.0 / p)
    }
}

impl ConservedField {
    pub fn from_values(ygrid: YGrid, xgrid: XGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != ygrid.n_y * xgrid.n_cells() {
            return Err(Error::GridMismatch(format!(
                "conserved values: got {}, expected {}",
                values.len(),
                ygrid.n_y * xgrid.n_cells()
            )));
        }
        Ok(Self { ygrid, xgrid, values })
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[f64] {
        let n_y = self.ygrid.n_y;
        &self.values[j * n_y..(j + 1) * n_y]
    }

    #[inline]
    pub fn column_mut(&mut self, j: usize) -> &mut [f64] {
        let n_y = self.ygrid.n_y;
        &mut self.values[j * n_y..(j + 1) * n_y]
    }

    #[inline]
    pub fn value(&self, k: usize, j: usize) -> f64 {
        self.values[j * self.ygrid.n_y + k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// y-monotonicity, range and boundary invariants.
    pub fn validate(&self) -> Result<()> {
        for j in 0..self.xgrid.n_cells() {
            let col = self.column(j);
            if col.windows(2).any(|w| w[1] < w[0]) {
                return Err(Error::Invariant(format!("u not monotone in y at column {j}")));
            }
            if col.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                return Err(Error::Invariant(format!("u out of [0,1] at column {j}")));
            }
            if col[0] != 0.0 || col[col.len() - 1] != 1.0 {
                return Err(Error::Invariant(format!(
                    "u boundary invariant broken at column {j}: u[0]={}, u[end]={}",
                    col[0],
                    col[col.len() - 1]
                )));
            }
        }
        Ok(())
    }

    /// Inverse recovery of every column onto an a-grid.
    pub fn to_level(&self, ag: &AGrid) -> Result<LevelSetField> {
        let n_x = self.xgrid.n_cells();
        let mut values = vec![0.0; ag.n_a * n_x];
        for j in 0..n_x {
            let z = inverse_recover(self.column(j), &self.ygrid, ag)?;
            values[j * ag.n_a..(j + 1) * ag.n_a].copy_from_slice(&z);
        }
        Ok(LevelSetField {
            agrid: *ag,
            xgrid: self.xgrid.clone(),
            values,
        })
    }

    /// L^1 distance with the (y,x) product measure.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        if self.ygrid != other.ygrid || self.xgrid != other.xgrid {
            return Err(Error::GridMismatch("l1_distance on different grids".into()));
        }
        let w = self.ygrid.dy() * self.xgrid.cell_volume();
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * w)
    }

    /// The slice u(y, x) over x at the given level y (nearest cell in y).
    pub fn slice_at_y(&self, y: f64) -> Vec<f64> {
        let k = (((y - self.ygrid.y_min) / self.ygrid.dy() - 0.5).round() as i64)
            .clamp(0, self.ygrid.n_y as i64 - 1) as usize;
        (0..self.xgrid.n_cells()).map(|j| self.value(k, j)).collect()
    }
}

/// v(y_k) = (1/n_a) #{i : Z(a_i) < y_k} for a monotone a-profile Z.
pub fn generalized_inverse(z: &[f64], yg: &YGrid) -> Result<Vec<f64>> {
    if z.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invariant("generalized_inverse: profile not monotone".into()));
    }
    let n_a = z.len() as f64;
    for &v in [z[0], z[z.len() - 1]].iter() {
        if !yg.contains(v) {
            return Err(Error::RangeEscape {
                what: "levelset value outside y-grid interior",
                value: v,
                min: yg.y_min,
                max: yg.y_max,
            });
        }
    }
    let mut out = vec![0.0; yg.n_y];
    let mut i = 0usize;
    for (k, o) in out.iter_mut().enumerate() {
        let y = yg.center(k);
        while i < z.len() && z[i] < y {
            i += 1;
        }
        *o = i as f64 / n_a;
    }
    Ok(out)
}

/// Z(a_i) = dy * #{k : y_k >= 0, v(y_k) < a_i} for a monotone y-profile v.
pub fn inverse_recover(v: &[f64], yg: &YGrid, ag: &AGrid) -> Result<Vec<f64>> {
    if v.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invariant("inverse_recover: profile not monotone".into()));
    }
    let dy = yg.dy();
    let k0 = (0..yg.n_y).find(|&k| yg.center(k) >= 0.0).unwrap_or(yg.n_y);
    let tail = &v[k0..];
    let mut out = vec![0.0; ag.n_a];
    let mut k = 0usize;
    for (i, o) in out.iter_mut().enumerate() {
        let a = ag.center(i);
        while k < tail.len() && tail[k] < a {
            k += 1;
        }
        *o = k as f64 * dy;
    }
    Ok(out)
}

/// Increasing rearrangement of an arbitrary profile (plain sort).
pub fn rearrange(x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    y.sort_by(f64::total_cmp);
    y
}

/// The two sides of the co-area identity for a pair of level-set fields:
/// (L^1 between Y and Yt, L^1 between their generalized inverses on `yg`).
pub fn coarea_l1(y1: &LevelSetField, y2: &LevelSetField, yg: &YGrid) -> Result<(f64, f64)> {
    if y1.agrid != y2.agrid || y1.xgrid != y2.xgrid {
        return Err(Error::GridMismatch("coarea_l1 on different grids".into()));
    }
    y1.check_monotone()?;
    y2.check_monotone()?;
    let level_side = y1.lp_distance(y2, 1.0)?;
    let u1 = y1.to_conserved(yg)?;
    let u2 = y2.to_conserved(yg)?;
    let u_side = u1.l1_distance(&u2)?;
    Ok((level_side, u_side))
}

/// 1-D Monge-Kantorovich distance of order p between two CDF-like
/// y-profiles: the L^p distance of their quantile functions on `ag`.
pub fn mk_distance_1d(v: &[f64], vt: &[f64], yg: &YGrid, p: f64, ag: &AGrid) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::Config(format!("mk_distance_1d needs p >= 1, got {p}")));
    }
    let z = inverse_recover(v, yg, ag)?;
    let zt = inverse_recover(vt, yg, ag)?;
    Ok(lp_norm_weighted(
        z.iter().zip(&zt).map(|(a, b)| a - b),
        ag.weight(),
        p,
    ))
}

/// Weighted L^p norm (sum w*|v|^p)^(1/p).
pub fn lp_norm_weighted(diff: impl Iterator<Item = f64>, weight: f64, p: f64) -> f64 {
    diff.map(|d| weight * d.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Total variation of a non-periodic profile: sum of absolute one-cell
/// differences. For a monotone profile this equals max - min.
pub fn tv_line(v: &[f64]) -> f64 {
    v.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Total variation of a periodic profile, including the wrap difference.
/// Realizes the shift-quotient sup in the one-cell-shift limit.
pub fn tv_periodic(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let n = v.len();
    (0..n).map(|j| (v[(j + 1) % n] - v[j]).abs()).sum()
}

/// Per-axis periodic total variation of an x-field slice on `xg`:
/// sum over cells of |one-cell forward difference| * cell_volume / dx.
pub fn tv_periodic_axis(values: &[f64], xg: &XGrid, axis: usize) -> f64 {
    let scale = xg.cell_volume() / xg.dx(axis);
    let mut by = [0i64; 2];
    by[axis] = 1;
    (0..xg.n_cells())
        .map(|j| (values[xg.shift(j, by)] - values[j]).abs())
        .sum::<f64>()
        * scale
}

/// f(a_i, y_k, x_j) = 1 iff u(y_k, x_j) >= a_i.
pub fn build_kinetic(u: &ConservedField, ag: &AGrid) -> KineticDensity {
    let n_x = u.xgrid.n_cells();
    let n_y = u.ygrid.n_y;
    let n_a = ag.n_a;
    let mut values = vec![0u8; n_a * n_y * n_x];
    for j in 0..n_x {
        for k in 0..n_y {
            let uv = u.value(k, j);
            let base = (j * n_y + k) * n_a;
            for i in 0..n_a {
                values[base + i] = (uv >= ag.center(i)) as u8;
            }
        }
    }
    KineticDensity {
        agrid: *ag,
        ygrid: u.ygrid.clone(),
        xgrid: u.xgrid.clone(),
        values,
    }
}

impl KineticDensity {
    #[inline]
    pub fn value(&self, i: usize, k: usize, j: usize) -> u8 {
        self.values[(j * self.ygrid.n_y + k) * self.agrid.n_a + i]
    }
}

/// Counts cells where H(y_k - Y(a_i, x_j)) differs from f(a_i, y_k, x_j).
/// For consistent fields the mismatches sit only on cells adjacent to the
/// graph of Y.
pub fn kinetic_consistency(f: &KineticDensity, y: &LevelSetField) -> Result<usize> {
    if f.agrid != y.agrid || f.xgrid != y.xgrid {
        return Err(Error::GridMismatch("kinetic_consistency on different grids".into()));
    }
    let mut count = 0usize;
    for j in 0..f.xgrid.n_cells() {
        for k in 0..f.ygrid.n_y {
            let yk = f.ygrid.center(k);
            for i in 0..f.agrid.n_a {
                let h = (yk > y.value(i, j)) as u8;
                if h != f.value(i, k, j) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}
