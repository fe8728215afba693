//! Experiment plumbing: JSON config, initial-data construction, lifts
//! from u-data to level-set data, and the four run kinds (run,
//! convergence, compare, checks) with their file outputs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    check_l1_kruzhkov_chain, check_lp_contraction, check_max_principle, discretization_tol,
    semi_integral_residual, CheckReport, CheckRow, TestField, SCHEME_EXACT_TOL,
};
use crate::error::{Error, Result};
use crate::fields::LevelSetField;
use crate::flux::FluxSpec;
use crate::grid::{AGrid, XGrid, YGrid};
use crate::io::{
    read_level_snapshot, write_checks_csv, write_conserved_snapshot, write_diag_csv,
    write_errors_csv, write_level_snapshot, ErrorRow,
};
use crate::reference::{exact_burgers_torus, godunov_run, RiemannProblem};
use crate::scheme::{diagnostics, run, InterpMode, SchemeConfig, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Run,
    Convergence,
    Compare,
    Checks,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FluxConfig {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    /// Two-state data: `u_left` for x1 < x0, `u_right` after.
    Riemann { u_left: f64, u_right: f64, x0: f64 },
    /// mean + amplitude sin(2 pi x1) (times sin(2 pi x2) when d = 2).
    Sine { amplitude: f64, mean: f64 },
    /// Level-set snapshot loaded verbatim (grids from the file header).
    FromFile { path: String },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LadderEntry {
    pub n_x: usize,
    pub n_a: usize,
    pub h: f64,
}

fn default_y_margin() -> f64 {
    0.1
}
fn default_cadence() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub flux: FluxConfig,
    pub d: usize,
    pub n_a: usize,
    pub n_x: usize,
    pub n_y: usize,
    #[serde(default = "default_y_margin")]
    pub y_margin: f64,
    pub h: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub interp_mode: InterpMode,
    #[serde(default = "default_cadence")]
    pub diagnostics_every: usize,
    pub initial: InitialData,
    #[serde(default)]
    pub ladder: Vec<LadderEntry>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub pass: bool,
    pub messages: Vec<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d != 1 && self.d != 2 {
            return Err(Error::Config(format!("d must be 1 or 2, got {}", self.d)));
        }
        if !(self.h > 0.0) || self.t_final < 0.0 {
            return Err(Error::Config("need h > 0 and T >= 0".into()));
        }
        if self.y_margin < 0.0 {
            return Err(Error::Config("y_margin must be >= 0".into()));
        }
        for w in self.ladder.windows(2) {
            if w[1].n_x <= w[0].n_x || w[1].n_a < w[0].n_a || w[1].h >= w[0].h {
                return Err(Error::Config(
                    "refinement ladder must be strictly refining".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn flux_spec(&self) -> Result<FluxSpec> {
        FluxSpec::builtin(&self.flux.name, self.d, &self.flux.params)
    }

    fn xgrid(&self) -> Result<XGrid> {
        XGrid::new(&vec![self.n_x; self.d])
    }

    fn scheme(&self, flux: FluxSpec) -> SchemeConfig {
        SchemeConfig {
            h: self.h,
            t_final: self.t_final,
            interp: self.interp_mode,
            flux,
            diagnostics_every: self.diagnostics_every,
        }
    }
}

/// Multiplicative lift Y0(a,x) = a / U0(x); requires U0 bounded away from
/// 0 and 1 and is then valued in [0, 1/min U0]. The representation at
/// y = 1 recovers U0 within 1/n_a.
pub fn lift_initial(u0: &[f64], ag: AGrid, xg: XGrid) -> Result<LevelSetField> {
    if u0.len() != xg.n_cells() {
        return Err(Error::GridMismatch(format!(
            "u0 has {} cells, grid has {}",
            u0.len(),
            xg.n_cells()
        )));
    }
    for &v in u0 {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::RangeEscape {
                what: "lift input U0".into(),
                value: v,
                min: 0.0,
                max: 1.0,
            });
        }
    }
    let mut values = Vec::with_capacity(ag.n_a * xg.n_cells());
    for &u in u0 {
        for i in 0..ag.n_a {
            values.push(ag.center(i) / u);
        }
    }
    LevelSetField::from_values(ag, xg, values)
}

/// Additive lift Y0(a,x) = a + 1 - U0(x), usable for U0 in the full
/// closed range [0,1] (Riemann endpoint states included); the y = 1
/// slice of the represented u-field recovers U0.
pub fn lift_additive(u0: &[f64], ag: AGrid, xg: XGrid) -> Result<LevelSetField> {
    if u0.len() != xg.n_cells() {
        return Err(Error::GridMismatch(format!(
            "u0 has {} cells, grid has {}",
            u0.len(),
            xg.n_cells()
        )));
    }
    for &v in u0 {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::RangeEscape {
                what: "lift input U0".into(),
                value: v,
                min: 0.0,
                max: 1.0,
            });
        }
    }
    let mut values = Vec::with_capacity(ag.n_a * xg.n_cells());
    for &u in u0 {
        for i in 0..ag.n_a {
            values.push(ag.center(i) + 1.0 - u);
        }
    }
    LevelSetField::from_values(ag, xg, values)
}

/// Pointwise initial u-profile; used for cell sampling and for exact
/// translation references.
pub fn initial_u0_at(initial: &InitialData, d: usize, x: [f64; 2]) -> Result<f64> {
    use std::f64::consts::TAU;
    match initial {
        InitialData::Riemann { u_left, u_right, x0 } => {
            if !(0.0..=1.0).contains(u_left) || !(0.0..=1.0).contains(u_right) {
                return Err(Error::Config("Riemann states must lie in [0,1]".into()));
            }
            let xx = x[0].rem_euclid(1.0);
            Ok(if xx < *x0 { *u_left } else { *u_right })
        }
        InitialData::Sine { amplitude, mean } => {
            let mut v = mean + amplitude * (TAU * x[0]).sin();
            if d == 2 {
                v = mean + amplitude * (TAU * x[0]).sin() * (TAU * x[1]).sin();
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::RangeEscape {
                    what: "sine initial data".into(),
                    value: v,
                    min: 0.0,
                    max: 1.0,
                });
            }
            Ok(v)
        }
        InitialData::FromFile { path } => Err(Error::Config(format!(
            "no closed form for file-based initial data '{path}'"
        ))),
    }
}

fn sample_u0(initial: &InitialData, d: usize, xg: &XGrid) -> Result<Vec<f64>> {
    (0..xg.n_cells())
        .map(|j| initial_u0_at(initial, d, xg.position(j)))
        .collect()
}

/// Level-set initial data for an experiment (additive lift of the
/// sampled profile, or a snapshot loaded from disk).
pub fn build_initial(cfg: &ExperimentConfig) -> Result<LevelSetField> {
    match &cfg.initial {
        InitialData::FromFile { path } => {
            let y0 = read_level_snapshot(Path::new(path))?;
            if y0.xgrid.dim() != cfg.d {
                return Err(Error::Config(format!(
                    "snapshot '{path}' has d = {}, config says {}",
                    y0.xgrid.dim(),
                    cfg.d
                )));
            }
            y0.check_monotone()?;
            Ok(y0)
        }
        other => {
            let xg = cfg.xgrid()?;
            let ag = AGrid::new(cfg.n_a)?;
            let u0 = sample_u0(other, cfg.d, &xg)?;
            lift_additive(&u0, ag, xg)
        }
    }
}

/// y-grid wide enough to keep all level values interior over the run.
pub fn output_ygrid(cfg: &ExperimentConfig, y0: &LevelSetField, flux: &FluxSpec) -> Result<YGrid> {
    let b = flux.bounds();
    YGrid::covering(
        y0.min() - cfg.t_final * b.sup_q0_minus,
        y0.max() + cfg.t_final * b.sup_q0_plus,
        cfg.n_y,
        cfg.y_margin,
    )
}

/// u(T) at the y = 1 slice, sampled at x-cell centers.
fn tc_profile_at(traj: &Trajectory, t: f64) -> Result<Vec<f64>> {
    Ok(traj.sample(t)?.u_at(1.0))
}

/// Exact reference profile at time `t` for the supported (flux, initial)
/// combinations: Burgers with Riemann data (torus wave solution) and
/// advection with any closed-form initial (exact translation).
fn exact_profile(cfg: &ExperimentConfig, t: f64, xg: &XGrid) -> Result<Vec<f64>> {
    let is_burgers = cfg.flux.name == "burgers"
        && (cfg.flux.params.is_empty() || cfg.flux.params == [1.0]);
    match (&cfg.initial, is_burgers, cfg.flux.name.as_str()) {
        (InitialData::Riemann { u_left, u_right, x0 }, true, _) if cfg.d == 1 => {
            let prob = RiemannProblem::burgers(*u_left, *u_right, *x0)?;
            (0..xg.n_cells())
                .map(|j| exact_burgers_torus(&prob, t, xg.position(j)[0]))
                .collect()
        }
        (initial, _, "advection") if cfg.d == 1 => {
            let c = if cfg.flux.params.is_empty() {
                1.0
            } else {
                cfg.flux.params[0]
            };
            (0..xg.n_cells())
                .map(|j| initial_u0_at(initial, 1, [xg.position(j)[0] - c * t, 0.0]))
                .collect()
        }
        _ => Err(Error::Config(format!(
            "no exact reference for flux '{}' with this initial data",
            cfg.flux.name
        ))),
    }
}

fn l1_profile_error(a: &[f64], b: &[f64]) -> f64 {
    let dx = 1.0 / a.len() as f64;
    a.iter().zip(b).map(|(x, y)| (x - y).abs() * dx).sum()
}

fn mode_tol(cfg: &ExperimentConfig, yg: &YGrid) -> f64 {
    match cfg.interp_mode {
        InterpMode::ExactShift => SCHEME_EXACT_TOL,
        InterpMode::Linear => discretization_tol(cfg.h, 1.0 / cfg.n_x as f64, yg.dy()),
    }
}

/// Convergence-study worker: one ladder entry, one error row.
fn ladder_entry_row(cfg: &ExperimentConfig, entry: &LadderEntry) -> Result<ErrorRow> {
    let mut sub = cfg.clone();
    sub.n_x = entry.n_x;
    sub.n_a = entry.n_a;
    sub.h = entry.h;
    let flux = sub.flux_spec()?;
    let y0 = build_initial(&sub)?;
    let traj = run(&y0, &sub.scheme(flux.clone()))?;
    let u_tc = tc_profile_at(&traj, sub.t_final)?;
    let xg = sub.xgrid()?;
    let u_exact = exact_profile(&sub, sub.t_final, &xg)?;
    let u0 = sample_u0(&sub.initial, sub.d, &xg)?;
    let u_fv = godunov_run(&u0, &flux, sub.t_final, 0.45)?;
    Ok(ErrorRow {
        n_x: entry.n_x,
        n_a: entry.n_a,
        h: entry.h,
        l1_error: l1_profile_error(&u_tc, &u_exact),
        l1_error_oracle: l1_profile_error(&u_tc, &u_fv),
    })
}

fn run_kind_run(cfg: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let flux = cfg.flux_spec()?;
    let y0 = build_initial(cfg)?;
    let yg = output_ygrid(cfg, &y0, &flux)?;
    let traj = run(&y0, &cfg.scheme(flux))?;
    let cadence = cfg.diagnostics_every.max(1);
    let last = traj.snapshots.len() - 1;
    for (n, y) in traj.snapshots.iter().enumerate() {
        if n % cadence == 0 || n == last {
            write_level_snapshot(&out.join(format!("y_{n:06}.snap")), y)?;
        }
    }
    write_conserved_snapshot(&out.join("u_final.snap"), &traj.snapshots[last].to_conserved(&yg)?)?;
    write_diag_csv(&out.join("diag.csv"), &diagnostics(&traj, cadence))?;
    Ok(RunReport {
        pass: true,
        messages: vec![format!("wrote trajectory with {} snapshots", traj.snapshots.len())],
    })
}

fn run_kind_convergence(cfg: &ExperimentConfig, out: &Path, threads: usize) -> Result<RunReport> {
    if cfg.ladder.is_empty() {
        return Err(Error::Config("convergence study needs a ladder".into()));
    }
    let mut results: Vec<Option<Result<ErrorRow>>> =
        (0..cfg.ladder.len()).map(|_| None).collect();
    let chunk = cfg.ladder.len().div_ceil(threads.max(1));
    std::thread::scope(|scope| {
        for (entries, slots) in cfg.ladder.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (entry, slot) in entries.iter().zip(slots) {
                    *slot = Some(ladder_entry_row(cfg, entry));
                }
            });
        }
    });
    let rows: Vec<ErrorRow> = results
        .into_iter()
        .map(|r| r.expect("every ladder entry was scheduled"))
        .collect::<Result<_>>()?;
    write_errors_csv(&out.join("errors.csv"), &rows)?;
    let decreasing = rows.windows(2).all(|w| w[1].l1_error < w[0].l1_error);
    Ok(RunReport {
        pass: decreasing,
        messages: rows
            .iter()
            .map(|r| format!("n_x={} l1_error={:.6}", r.n_x, r.l1_error))
            .collect(),
    })
}

fn run_kind_compare(cfg: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let flux = cfg.flux_spec()?;
    let y0 = build_initial(cfg)?;
    let traj = run(&y0, &cfg.scheme(flux.clone()))?;
    let xg = cfg.xgrid()?;
    let u_exact = exact_profile(cfg, cfg.t_final, &xg)?;
    let u_tc = tc_profile_at(&traj, cfg.t_final)?;
    let u0 = sample_u0(&cfg.initial, cfg.d, &xg)?;
    let u_fv = godunov_run(&u0, &flux, cfg.t_final, 0.45)?;
    let err_tc = l1_profile_error(&u_tc, &u_exact);
    let err_fv = l1_profile_error(&u_fv, &u_exact);
    let mut w = std::io::BufWriter::new(std::fs::File::create(out.join("compare.csv"))?);
    use std::io::Write;
    writeln!(w, "method,l1_error")?;
    writeln!(w, "tc,{err_tc}")?;
    writeln!(w, "godunov,{err_fv}")?;
    Ok(RunReport {
        pass: true,
        messages: vec![format!("tc error {err_tc:.6}, godunov error {err_fv:.6}")],
    })
}

/// Full invariant-check sweep on a run plus an x-shifted companion run:
/// maximum principle, monotonicity counts, L^p contraction, the L^1
/// chain, and the semi-integral inequality for three test fields.
pub fn checks_report(cfg: &ExperimentConfig) -> Result<CheckReport> {
    let flux = cfg.flux_spec()?;
    let y0 = build_initial(cfg)?;
    let yg = output_ygrid(cfg, &y0, &flux)?;
    let scheme = cfg.scheme(flux.clone());
    let traj = run(&y0, &scheme)?;

    // companion: same data shifted a quarter torus in x1
    let shift = (cfg.n_x / 4).max(1) as i64;
    let shifted = LevelSetField::from_values(
        y0.agrid,
        y0.xgrid.clone(),
        (0..y0.xgrid.n_cells())
            .flat_map(|j| y0.column(y0.xgrid.shift(j, [-shift, 0])).to_vec())
            .collect(),
    )?;
    let traj_b = run(&shifted, &scheme)?;

    let tol = mode_tol(cfg, &yg);
    let mut report = check_max_principle(&traj, &flux, tol);
    for (n, y) in traj.snapshots.iter().enumerate() {
        report.rows.push(CheckRow {
            check: "monotonicity".into(),
            param: "d_a_y".into(),
            t: traj.time(n),
            lhs: y.monotonicity_violations() as f64,
            rhs: 0.0,
            margin: -(y.monotonicity_violations() as f64),
            pass: y.monotonicity_violations() == 0,
        });
    }
    report.extend(check_lp_contraction(
        &traj,
        &traj_b,
        &flux,
        &flux,
        &[1.0, 2.0, 4.0],
        tol,
    )?);
    let tol_coarea = 2.0 * (yg.dy() + 1.0 / cfg.n_a as f64);
    report.extend(check_l1_kruzhkov_chain(&traj, &traj_b, &yg, tol_coarea, tol)?);
    let dx = 1.0 / cfg.n_x as f64;
    let si_tol = discretization_tol(cfg.h, dx, 0.0);
    for z in [TestField::zero(), TestField::identity_a(), TestField::sine(0.05)] {
        report.extend(semi_integral_residual(&traj, &z, &flux, si_tol)?);
    }
    Ok(report)
}

fn run_kind_checks(cfg: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let report = checks_report(cfg)?;
    write_checks_csv(&out.join("checks.csv"), &report.rows)?;
    let pass = report.pass();
    Ok(RunReport {
        pass,
        messages: vec![format!(
            "{} checks, worst margin {:.3e}, {}",
            report.rows.len(),
            report.worst_margin(),
            if pass { "all passed" } else { "FAILURES" }
        )],
    })
}

pub fn run_experiment(cfg: &ExperimentConfig, out: &Path, threads: usize) -> Result<RunReport> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    match cfg.kind {
        Kind::Run => run_kind_run(cfg, out),
        Kind::Convergence => run_kind_convergence(cfg, out, threads),
        Kind::Compare => run_kind_compare(cfg, out),
        Kind::Checks => run_kind_checks(cfg, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn base_config(kind: Kind) -> ExperimentConfig {
        ExperimentConfig {
            kind,
            flux: FluxConfig {
                name: "burgers".into(),
                params: vec![],
            },
            d: 1,
            n_a: 32,
            n_x: 64,
            n_y: 96,
            y_margin: 0.1,
            h: 1.0 / 64.0,
            t_final: 0.1,
            interp_mode: InterpMode::Linear,
            diagnostics_every: 2,
            initial: InitialData::Riemann {
                u_left: 1.0,
                u_right: 0.0,
                x0: 0.5,
            },
            ladder: vec![],
        }
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = base_config(Kind::Run);
        let text = serde_json::to_string(&cfg).unwrap();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(back.n_x, 64);
        assert!(matches!(back.initial, InitialData::Riemann { .. }));
    }

    #[test]
    fn config_rejects_bad_ladder() {
        let mut cfg = base_config(Kind::Convergence);
        cfg.ladder = vec![
            LadderEntry { n_x: 100, n_a: 50, h: 0.01 },
            LadderEntry { n_x: 100, n_a: 100, h: 0.005 },
        ];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn lift_initial_constant_half() {
        let ag = AGrid::new(4).unwrap();
        let xg = XGrid::new(&[3]).unwrap();
        let y = lift_initial(&[0.5, 0.5, 0.5], ag, xg).unwrap();
        for j in 0..3 {
            for i in 0..4 {
                assert!((y.value(i, j) - 2.0 * ag.center(i)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn lift_initial_range_bound() {
        // U0 >= r = 0.1 implies max Y0 <= 1/r = 10
        let ag = AGrid::new(50).unwrap();
        let xg = XGrid::new(&[20]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u0: Vec<f64> = (0..20).map(|_| rng.gen_range(0.1..0.9)).collect();
        let y = lift_initial(&u0, ag, xg).unwrap();
        assert!(y.max() <= 10.0);
        assert!(y.min() >= 0.0);
        y.check_monotone().unwrap();
    }

    #[test]
    fn lift_initial_recovers_u0_at_y_one() {
        let ag = AGrid::new(200).unwrap();
        let xg = XGrid::new(&[16]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u0: Vec<f64> = (0..16).map(|_| rng.gen_range(0.1..0.9)).collect();
        let y = lift_initial(&u0, ag, xg).unwrap();
        let rec = y.u_at(1.0);
        for (r, u) in rec.iter().zip(&u0) {
            assert!((r - u).abs() <= 1.0 / 200.0, "{r} vs {u}");
        }
    }

    #[test]
    fn lift_initial_rejects_endpoints() {
        let ag = AGrid::new(4).unwrap();
        let xg = XGrid::new(&[2]).unwrap();
        assert!(lift_initial(&[0.0, 0.5], ag, xg.clone()).is_err());
        assert!(lift_initial(&[0.5, 1.0], ag, xg).is_err());
    }

    #[test]
    fn additive_lift_recovers_endpoint_data() {
        let ag = AGrid::new(100).unwrap();
        let xg = XGrid::new(&[4]).unwrap();
        let u0 = [0.0, 1.0, 0.25, 0.75];
        let y = lift_additive(&u0, ag, xg).unwrap();
        y.check_monotone().unwrap();
        for (r, u) in y.u_at(1.0).iter().zip(&u0) {
            assert!((r - u).abs() <= 1.0 / 100.0, "{r} vs {u}");
        }
    }

    #[test]
    fn run_with_zero_horizon_writes_initial_snapshot() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = base_config(Kind::Run);
        cfg.t_final = 0.0;
        let report = run_experiment(&cfg, dir.path(), 1).unwrap();
        assert!(report.pass);
        let y0 = build_initial(&cfg).unwrap();
        let back = read_level_snapshot(&dir.path().join("y_000000.snap")).unwrap();
        assert_eq!(y0, back);
        assert!(dir.path().join("diag.csv").exists());
        assert!(dir.path().join("u_final.snap").exists());
    }

    #[test]
    fn convergence_on_shock_ladder_decreases() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = base_config(Kind::Convergence);
        cfg.t_final = 0.15;
        cfg.ladder = vec![
            LadderEntry { n_x: 50, n_a: 25, h: 1.0 / 50.0 },
            LadderEntry { n_x: 100, n_a: 50, h: 1.0 / 100.0 },
            LadderEntry { n_x: 200, n_a: 100, h: 1.0 / 200.0 },
        ];
        let report = run_experiment(&cfg, dir.path(), 3).unwrap();
        assert!(report.pass, "{:?}", report.messages);
        let text = std::fs::read_to_string(dir.path().join("errors.csv")).unwrap();
        assert!(text.starts_with("n_x,n_a,h,l1_error,l1_error_oracle\n"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn compare_on_advection_tc_is_exact() {
        // exact_shift translation is exact; Godunov upwinding is diffusive
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = base_config(Kind::Compare);
        cfg.flux = FluxConfig {
            name: "advection".into(),
            params: vec![1.0],
        };
        cfg.interp_mode = InterpMode::ExactShift;
        cfg.h = 4.0 / 64.0; // 4 cells per step
        cfg.t_final = 0.25;
        let report = run_experiment(&cfg, dir.path(), 1).unwrap();
        assert!(report.pass);
        let text = std::fs::read_to_string(dir.path().join("compare.csv")).unwrap();
        let mut lines = text.lines().skip(1);
        let tc: f64 = lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
        let fv: f64 = lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert!(tc < 1e-12, "tc error {tc}");
        assert!(fv > 1e-3, "godunov error {fv}");
    }

    #[test]
    fn checks_kind_passes_on_exact_shift_burgers() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = base_config(Kind::Checks);
        cfg.n_x = 64;
        cfg.n_a = 32;
        cfg.h = 2.0 * 32.0 / 64.0; // whole-cell shifts for midpoint speeds
        cfg.t_final = 10.0 * cfg.h;
        cfg.interp_mode = InterpMode::ExactShift;
        let report = run_experiment(&cfg, dir.path(), 1).unwrap();
        assert!(report.pass, "{:?}", report.messages);
        let text = std::fs::read_to_string(dir.path().join("checks.csv")).unwrap();
        assert!(text.starts_with("check,param,t,lhs,rhs,margin,pass\n"));
        assert!(text.contains("max_principle"));
        assert!(text.contains("lp_contraction"));
        assert!(text.contains("kruzhkov_chain"));
        assert!(text.contains("p_consistency"));
    }

    #[test]
    fn experiment_reruns_byte_identical() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let cfg = base_config(Kind::Run);
        run_experiment(&cfg, d1.path(), 1).unwrap();
        run_experiment(&cfg, d2.path(), 1).unwrap();
        for name in ["diag.csv", "u_final.snap"] {
            assert_eq!(
                std::fs::read(d1.path().join(name)).unwrap(),
                std::fs::read(d2.path().join(name)).unwrap(),
                "{name}"
            );
        }
    }
}
