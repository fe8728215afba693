//! Ground-truth oracles in one space dimension: closed-form Riemann
//! solutions for Burgers, a monotone first-order Godunov finite-volume
//! solver for arbitrary catalog fluxes, and a weak-form entropy residual.

use crate::error::{Error, Result};
use crate::flux::FluxSpec;

/// Two-state initial data with a jump at `x0`, values in [0,1].
#[derive(Debug, Clone)]
pub struct RiemannProblem {
    pub u_left: f64,
    pub u_right: f64,
    pub x0: f64,
    pub flux: FluxSpec,
}

impl RiemannProblem {
    pub fn burgers(u_left: f64, u_right: f64, x0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&u_left) || !(0.0..=1.0).contains(&u_right) {
            return Err(Error::Config("Riemann states must lie in [0,1]".into()));
        }
        Ok(Self {
            u_left,
            u_right,
            x0,
            flux: FluxSpec::burgers(&[1.0])?,
        })
    }
}

/// Entropy solution of the single-jump Burgers Riemann problem on the
/// whole line (no wrap handling).
pub fn exact_burgers(prob: &RiemannProblem, t: f64, x: f64) -> f64 {
    let (ul, ur) = (prob.u_left, prob.u_right);
    let xi = x - prob.x0;
    if t <= 0.0 {
        return if xi < 0.0 { ul } else { ur };
    }
    if ul > ur {
        // Rankine-Hugoniot shock
        let s = 0.5 * (ul + ur);
        if xi < s * t {
            ul
        } else {
            ur
        }
    } else if ul < ur {
        (xi / t).clamp(ul, ur)
    } else {
        ul
    }
}

fn wave_extent(ul: f64, ur: f64, p: f64, t: f64) -> (f64, f64) {
    if ul > ur {
        let s = 0.5 * (ul + ur) * t;
        (p + s, p + s)
    } else {
        (p + ul * t, p + ur * t)
    }
}

/// Entropy solution of the periodic Burgers Riemann problem on the unit
/// torus: jump u_left -> u_right at x0 and the complementary wrap jump
/// u_right -> u_left at x = 1. Valid while neither wave leaves its half
/// of the torus.
pub fn exact_burgers_torus(prob: &RiemannProblem, t: f64, x: f64) -> Result<f64> {
    let x0 = prob.x0;
    let m_left = 0.5 * x0;
    let m_right = 0.5 * (x0 + 1.0);
    // wave 1: (u_left, u_right) at x0; wave 2: (u_right, u_left) at 1
    let (lo1, hi1) = wave_extent(prob.u_left, prob.u_right, x0, t);
    let (lo2, hi2) = wave_extent(prob.u_right, prob.u_left, 1.0, t);
    if lo1 < m_left || hi1 > m_right || lo2 < m_right || hi2 > 1.0 + m_left {
        return Err(Error::Config(format!(
            "torus Riemann solution invalid at t = {t}: waves reached the wrap"
        )));
    }
    let x = x.rem_euclid(1.0);
    if (m_left..m_right).contains(&x) {
        Ok(exact_burgers(prob, t, x))
    } else {
        let wrapped = RiemannProblem {
            u_left: prob.u_right,
            u_right: prob.u_left,
            x0: 1.0,
            flux: prob.flux.clone(),
        };
        let xx = if x < m_right { x + 1.0 } else { x };
        Ok(exact_burgers(&wrapped, t, xx))
    }
}

/// Dense tabulation of the flux primitive Q(u) = int_0^u q, used for
/// Godunov fluxes and entropy flux pairs without case analysis on the
/// shape of Q.
#[derive(Debug, Clone)]
pub struct FluxPrimitive {
    q_big: Vec<f64>,
}

pub const FLUX_TABLE_SAMPLES: usize = 4096;

impl FluxPrimitive {
    pub fn tabulate(flux: &FluxSpec) -> Self {
        let n = FLUX_TABLE_SAMPLES;
        let mut q_big = vec![0.0; n + 1];
        for m in 1..=n {
            let a = (m as f64 - 0.5) / n as f64;
            q_big[m] = q_big[m - 1] + flux.q(a)[0] / n as f64;
        }
        Self { q_big }
    }

    /// Q(u) by linear interpolation of the table, u clamped to [0,1].
    pub fn q_of(&self, u: f64) -> f64 {
        let n = self.q_big.len() - 1;
        let g = (u.clamp(0.0, 1.0)) * n as f64;
        let m = (g.floor() as usize).min(n - 1);
        let w = g - m as f64;
        (1.0 - w) * self.q_big[m] + w * self.q_big[m + 1]
    }

    /// Godunov numerical flux: min of Q over [ul, ur] when ul <= ur,
    /// max over [ur, ul] otherwise.
    pub fn godunov_flux(&self, ul: f64, ur: f64) -> f64 {
        let (lo, hi) = if ul <= ur { (ul, ur) } else { (ur, ul) };
        let n = self.q_big.len() - 1;
        let m_lo = (lo * n as f64).ceil() as usize;
        let m_hi = (hi * n as f64).floor() as usize;
        let mut best = if ul <= ur {
            self.q_of(lo).min(self.q_of(hi))
        } else {
            self.q_of(lo).max(self.q_of(hi))
        };
        for m in m_lo..=m_hi.min(n) {
            if ul <= ur {
                best = best.min(self.q_big[m]);
            } else {
                best = best.max(self.q_big[m]);
            }
        }
        best
    }
}

/// One conservative Godunov update of periodic 1-D cell averages.
pub fn godunov_step(
    u: &[f64],
    flux: &FluxSpec,
    qtab: &FluxPrimitive,
    dt: f64,
    dx: f64,
) -> Result<Vec<f64>> {
    let sup_q = flux.bounds().sup_q_norm;
    if dt * sup_q > dx * (1.0 + 1e-12) {
        return Err(Error::Cfl {
            lhs: dt * sup_q,
            rhs: dx,
        });
    }
    let n = u.len();
    let mut fluxes = vec![0.0; n]; // fluxes[j] = F_{j+1/2}
    for j in 0..n {
        fluxes[j] = qtab.godunov_flux(u[j], u[(j + 1) % n]);
    }
    let mut out = vec![0.0; n];
    for j in 0..n {
        let f_left = fluxes[(j + n - 1) % n];
        out[j] = u[j] - dt / dx * (fluxes[j] - f_left);
    }
    Ok(out)
}

/// Runs Godunov from cell samples of `u0` up to time `t_final`.
pub fn godunov_run(
    u0: &[f64],
    flux: &FluxSpec,
    t_final: f64,
    cfl: f64,
) -> Result<Vec<f64>> {
    let qtab = FluxPrimitive::tabulate(flux);
    let dx = 1.0 / u0.len() as f64;
    let sup_q = flux.bounds().sup_q_norm.max(1e-12);
    let dt_max = cfl * dx / sup_q;
    let n_steps = (t_final / dt_max).ceil().max(1.0) as usize;
    let dt = t_final / n_steps as f64;
    let mut u = u0.to_vec();
    for _ in 0..n_steps {
        u = godunov_step(&u, flux, &qtab, dt, dx)?;
    }
    Ok(u)
}

/// Closed-form nonnegative bump, compactly supported in time and
/// periodically in space, used as entropy test function.
#[derive(Debug, Clone)]
pub struct BumpTestFunction {
    pub t_center: f64,
    pub t_radius: f64,
    pub x_center: f64,
    pub x_radius: f64,
}

// smooth bump normalized to peak 1 at s = 0
fn bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

fn bump_prime(s: f64) -> f64 {
    if s.abs() < 1.0 {
        let d = 1.0 - s * s;
        bump(s) * (-2.0 * s / (d * d))
    } else {
        0.0
    }
}

impl BumpTestFunction {
    fn wrap(&self, x: f64) -> f64 {
        let mut d = (x - self.x_center).rem_euclid(1.0);
        if d > 0.5 {
            d -= 1.0;
        }
        d
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        bump((t - self.t_center) / self.t_radius) * bump(self.wrap(x) / self.x_radius)
    }

    pub fn dt(&self, t: f64, x: f64) -> f64 {
        bump_prime((t - self.t_center) / self.t_radius) / self.t_radius
            * bump(self.wrap(x) / self.x_radius)
    }

    pub fn dx(&self, t: f64, x: f64) -> f64 {
        bump((t - self.t_center) / self.t_radius) * bump_prime(self.wrap(x) / self.x_radius)
            / self.x_radius
    }

    /// Support must stay inside (0, t_total); x is periodic so no x check.
    pub fn check_support(&self, t_total: f64) -> Result<()> {
        if self.t_center - self.t_radius <= 0.0 || self.t_center + self.t_radius >= t_total {
            return Err(Error::Config(format!(
                "test function support [{}, {}] not inside (0, {t_total})",
                self.t_center - self.t_radius,
                self.t_center + self.t_radius
            )));
        }
        Ok(())
    }
}

/// Discrete weak-form integral
/// int int c(u) phi_t + qc(u) phi_x dx dt
/// against a generic entropy/flux pair (c, qc), midpoint in x and
/// trapezoid in t. The time-derivative term uses exact phi differences so
/// constant states integrate to zero up to quadrature in x only.
pub fn weak_form_integral(
    times: &[f64],
    states: &[Vec<f64>],
    c: impl Fn(f64) -> f64,
    qc: impl Fn(f64) -> f64,
    phi: &BumpTestFunction,
    t_total: f64,
) -> Result<f64> {
    phi.check_support(t_total)?;
    if times.len() != states.len() || times.len() < 2 {
        return Err(Error::Config("weak form needs >= 2 snapshots".into()));
    }
    let n_x = states[0].len();
    let dx = 1.0 / n_x as f64;
    let flux_sum = |t: f64, u: &[f64]| -> f64 {
        u.iter()
            .enumerate()
            .map(|(j, &uv)| qc(uv) * phi.dx(t, (j as f64 + 0.5) * dx))
            .sum::<f64>()
            * dx
    };
    let mut total = 0.0;
    let mut g_prev = flux_sum(times[0], &states[0]);
    for n in 0..times.len() - 1 {
        let (t0, t1) = (times[n], times[n + 1]);
        for j in 0..n_x {
            let x = (j as f64 + 0.5) * dx;
            let c_avg = 0.5 * (c(states[n][j]) + c(states[n + 1][j]));
            total += c_avg * (phi.value(t1, x) - phi.value(t0, x)) * dx;
        }
        let g_next = flux_sum(t1, &states[n + 1]);
        total += 0.5 * (g_prev + g_next) * (t1 - t0);
        g_prev = g_next;
    }
    Ok(total)
}

/// Kruzhkov entropy residual with C(u) = |u-k| and
/// Q^C(u) = sign(u-k)(Q(u)-Q(k)). Entropy solutions give values >= -tol;
/// entropy-violating jumps drive it negative.
pub fn entropy_residual(
    times: &[f64],
    states: &[Vec<f64>],
    qtab: &FluxPrimitive,
    k: f64,
    phi: &BumpTestFunction,
    t_total: f64,
) -> Result<f64> {
    let qk = qtab.q_of(k);
    weak_form_integral(
        times,
        states,
        |u| (u - k).abs(),
        |u| (u - k).signum() * (qtab.q_of(u) - qk),
        phi,
        t_total,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_burgers_trivials() {
        let p = RiemannProblem::burgers(0.5, 0.5, 0.3).unwrap();
        assert_eq!(exact_burgers(&p, 0.7, 0.9), 0.5);

        // shock speed (1+0)/2
        let p = RiemannProblem::burgers(1.0, 0.0, 0.0).unwrap();
        assert_eq!(exact_burgers(&p, 1.0, 0.49), 1.0);
        assert_eq!(exact_burgers(&p, 1.0, 0.51), 0.0);

        // rarefaction fan value
        let p = RiemannProblem::burgers(0.0, 1.0, 0.0).unwrap();
        assert_eq!(exact_burgers(&p, 1.0, 0.5), 0.5);
    }

    #[test]
    fn torus_solution_validity_window() {
        let p = RiemannProblem::burgers(1.0, 0.0, 0.5).unwrap();
        assert!(exact_burgers_torus(&p, 0.25, 0.1).is_ok());
        // by t = 1 the rarefaction from the wrap reaches the shock region
        assert!(exact_burgers_torus(&p, 2.0, 0.1).is_err());
    }

    #[test]
    fn flux_primitive_matches_closed_form() {
        let qtab = FluxPrimitive::tabulate(&FluxSpec::burgers(&[1.0]).unwrap());
        for &u in &[0.0, 0.25, 0.5, 0.77, 1.0] {
            assert!((qtab.q_of(u) - 0.5 * u * u).abs() < 1e-7, "u={u}");
        }
    }

    #[test]
    fn godunov_constant_state_unchanged() {
        let flux = FluxSpec::burgers(&[1.0]).unwrap();
        let qtab = FluxPrimitive::tabulate(&flux);
        let u = vec![0.4; 32];
        let u2 = godunov_step(&u, &flux, &qtab, 0.01, 1.0 / 32.0).unwrap();
        for v in u2 {
            assert!((v - 0.4).abs() < 1e-14);
        }
    }

    #[test]
    fn godunov_cfl_violation_rejected() {
        let flux = FluxSpec::burgers(&[1.0]).unwrap();
        let qtab = FluxPrimitive::tabulate(&flux);
        assert!(godunov_step(&[0.5; 8], &flux, &qtab, 1.0, 1.0 / 8.0).is_err());
    }

    #[test]
    fn godunov_conserves_mass() {
        let flux = FluxSpec::burgers(&[1.0]).unwrap();
        let qtab = FluxPrimitive::tabulate(&flux);
        let n = 64;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let dx = 1.0 / n as f64;
        let mass0: f64 = u.iter().sum::<f64>() * dx;
        for _ in 0..50 {
            u = godunov_step(&u, &flux, &qtab, 0.5 * dx, dx).unwrap();
            let mass: f64 = u.iter().sum::<f64>() * dx;
            assert!((mass - mass0).abs() < 1e-13);
            assert!(u.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        }
    }

    #[test]
    fn godunov_shock_position_and_refinement() {
        // shock at 0.3 (speed 1/2), complementary rarefaction at 0.625;
        // at t = 0.5 the fan occupies [0.625, 1.125] and the shock sits at
        // 0.55, so the window (0.15, 0.6) sees the pure shock solution
        let prob = RiemannProblem::burgers(1.0, 0.0, 0.3).unwrap();
        let t = 0.5;
        let errs: Vec<f64> = [200usize, 400]
            .iter()
            .map(|&n| {
                let dx = 1.0 / n as f64;
                let u0: Vec<f64> = (0..n)
                    .map(|j| {
                        let x = (j as f64 + 0.5) * dx;
                        if (0.3..0.625).contains(&x) { 0.0 } else { 1.0 }
                    })
                    .collect();
                let u = godunov_run(&u0, &prob.flux, t, 0.9).unwrap();
                let mut err = 0.0;
                for j in 0..n {
                    let x = (j as f64 + 0.5) * dx;
                    if (0.15..0.6).contains(&x) {
                        err += (u[j] - exact_burgers(&prob, t, x)).abs() * dx;
                    }
                }
                // shock position: first cell in the window below 1/2
                let pos = (0..n)
                    .find(|&j| (0.15..0.6).contains(&((j as f64 + 0.5) * dx)) && u[j] < 0.5)
                    .map(|j| (j as f64 + 0.5) * dx)
                    .unwrap();
                if n == 400 {
                    assert!((pos - 0.55).abs() <= 2.0 * dx, "shock at {pos}");
                }
                err
            })
            .collect();
        assert!(errs[0] / errs[1] >= 1.3, "refinement ratio {errs:?}");
    }

    #[test]
    fn godunov_preserves_order() {
        let flux = FluxSpec::burgers(&[1.0]).unwrap();
        let qtab = FluxPrimitive::tabulate(&flux);
        let n = 48;
        let dx = 1.0 / n as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut ua: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.5)).collect();
        let mut ub: Vec<f64> = ua.iter().map(|&v| v + rng.gen_range(0.0..0.5)).collect();
        for _ in 0..100 {
            ua = godunov_step(&ua, &flux, &qtab, 0.5 * dx, dx).unwrap();
            ub = godunov_step(&ub, &flux, &qtab, 0.5 * dx, dx).unwrap();
            for (a, b) in ua.iter().zip(&ub) {
                assert!(a <= &(b + 1e-13));
            }
        }
    }

    fn sample_torus(prob: &RiemannProblem, times: &[f64], n_x: usize) -> Vec<Vec<f64>> {
        times
            .iter()
            .map(|&t| {
                (0..n_x)
                    .map(|j| {
                        exact_burgers_torus(prob, t, (j as f64 + 0.5) / n_x as f64).unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn entropy_residual_constant_solution_is_zero() {
        let qtab = FluxPrimitive::tabulate(&FluxSpec::burgers(&[1.0]).unwrap());
        let times: Vec<f64> = (0..50).map(|n| n as f64 * 0.01).collect();
        let states: Vec<Vec<f64>> = times.iter().map(|_| vec![0.7; 64]).collect();
        let phi = BumpTestFunction {
            t_center: 0.25,
            t_radius: 0.2,
            x_center: 0.5,
            x_radius: 0.3,
        };
        let r = entropy_residual(&times, &states, &qtab, 0.5, &phi, 0.49).unwrap();
        // C and Q^C constant: the time term telescopes to zero exactly and
        // the periodic midpoint sum of phi_x is spectrally small
        assert!(r.abs() < 1e-9, "r = {r}");
    }

    #[test]
    fn exact_solution_satisfies_weak_form() {
        // int int u phi_t + Q(u) phi_x = 0 for the entropy solution
        let prob = RiemannProblem::burgers(1.0, 0.0, 0.5).unwrap();
        let qtab = FluxPrimitive::tabulate(&prob.flux);
        let n_x = 400;
        let times: Vec<f64> = (0..=200).map(|n| n as f64 * 0.25 / 200.0).collect();
        let states = sample_torus(&prob, &times, n_x);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let phi = BumpTestFunction {
                t_center: rng.gen_range(0.08..0.17),
                t_radius: rng.gen_range(0.03..0.07),
                x_center: rng.gen_range(0.0..1.0),
                x_radius: rng.gen_range(0.05..0.2),
            };
            let total =
                weak_form_integral(&times, &states, |u| u, |u| qtab.q_of(u), &phi, 0.25)
                    .unwrap();
            assert!(total.abs() < 5e-3, "weak-form defect {total}");
        }
    }

    #[test]
    fn entropy_residual_flags_expansion_shock() {
        // stationary-in-frame non-entropic jump: u = 0 left, 1 right of the
        // Rankine-Hugoniot line x0 + t/2; a weak solution but not entropic
        let qtab = FluxPrimitive::tabulate(&FluxSpec::burgers(&[1.0]).unwrap());
        let n_x = 400;
        let times: Vec<f64> = (0..=200).map(|n| n as f64 * 0.25 / 200.0).collect();
        let states: Vec<Vec<f64>> = times
            .iter()
            .map(|&t| {
                (0..n_x)
                    .map(|j| {
                        let x = (j as f64 + 0.5) / n_x as f64;
                        if x < 0.5 + 0.5 * t { 0.0 } else { 1.0 }
                    })
                    .collect()
            })
            .collect();
        let phi = BumpTestFunction {
            t_center: 0.125,
            t_radius: 0.1,
            x_center: 0.56,
            x_radius: 0.15,
        };
        let r = entropy_residual(&times, &states, &qtab, 0.5, &phi, 0.25).unwrap();
        assert!(r < -0.01, "expansion shock not flagged: r = {r}");
    }

    #[test]
    fn entropy_residual_rejects_bad_support() {
        let qtab = FluxPrimitive::tabulate(&FluxSpec::burgers(&[1.0]).unwrap());
        let phi = BumpTestFunction {
            t_center: 0.1,
            t_radius: 0.2,
            x_center: 0.5,
            x_radius: 0.2,
        };
        let times = vec![0.0, 0.1, 0.2];
        let states = vec![vec![0.5; 8]; 3];
        assert!(entropy_residual(&times, &states, &qtab, 0.5, &phi, 0.2).is_err());
    }
}
