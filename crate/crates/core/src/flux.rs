//! Flux data entering the scheme.
//!
//! A flux is described by the pair of derivative samplers (q0, q) = (Q0', Q')
//! on a in [0,1]. The built-in catalog covers linear advection, Burgers and a
//! Buckley-Leverett-type nonconvex flux; user code can wrap arbitrary closures
//! with [`FluxSpec::from_fns`].

use std::sync::Arc;

use crate::error::{Error, Result};

/// Number of uniform samples of [0,1] used to estimate sup-bounds.
/// Approximate for rough user-supplied fluxes; exact enough for the
/// smooth catalog (doubling changes the result by < 1e-6).
pub const BOUND_SCAN_SAMPLES: usize = 10_000;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(f64) -> [f64; 2] + Send + Sync>;

/// The flux pair (Q0, Q) via its derivatives q0(a), q(a).
///
/// Immutable after construction; cheap to clone and safe to share across
/// threads.
#[derive(Clone)]
pub struct FluxSpec {
    pub name: String,
    pub dim: usize,
    q0: ScalarFn,
    q: VectorFn,
    pub q0_nonneg: bool,
}

/// Sup-bounds of a flux over a in [0,1], estimated by dense sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxBounds {
    /// sup (q0)_+
    pub sup_q0_plus: f64,
    /// sup (-q0)_+
    pub sup_q0_minus: f64,
    /// sup ||q||
    pub sup_q_norm: f64,
}

impl std::fmt::Debug for FluxSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FluxSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("q0_nonneg", &self.q0_nonneg)
            .finish()
    }
}

impl FluxSpec {
    pub fn from_fns<F0, F>(name: &str, dim: usize, q0: F0, q: F, q0_nonneg: bool) -> Result<Self>
    where
        F0: Fn(f64) -> f64 + Send + Sync + 'static,
        F: Fn(f64) -> [f64; 2] + Send + Sync + 'static,
    {
        if dim != 1 && dim != 2 {
            return Err(Error::Config(format!("unsupported dimension {dim}")));
        }
        Ok(Self {
            name: name.to_string(),
            dim,
            q0: Arc::new(q0),
            q: Arc::new(q),
            q0_nonneg,
        })
    }

    /// y-direction speed q0(a) = Q0'(a).
    #[inline]
    pub fn q0(&self, a: f64) -> f64 {
        (self.q0)(a)
    }

    /// x-direction speed q(a) = Q'(a); the second component is 0 when dim = 1.
    #[inline]
    pub fn q(&self, a: f64) -> [f64; 2] {
        (self.q)(a)
    }

    /// Linear advection with constant velocity `c` (one entry per dimension):
    /// q(a) = c, q0 = 0.
    pub fn advection(c: &[f64]) -> Result<Self> {
        let dim = c.len();
        let v = [c[0], if dim > 1 { c[1] } else { 0.0 }];
        let name = format!("advection({c:?})");
        Self::from_fns(&name, dim, |_| 0.0, move |_| v, true)
    }

    /// Burgers flux Q(u) = u^2/2 per direction, optionally weighted:
    /// q(a) = (w1*a, w2*a), q0 = 0. `weights = [1]` is classical Burgers.
    pub fn burgers(weights: &[f64]) -> Result<Self> {
        let dim = weights.len();
        let w = [weights[0], if dim > 1 { weights[1] } else { 0.0 }];
        let name = if dim == 1 && w[0] == 1.0 {
            "burgers".to_string()
        } else {
            format!("burgers({weights:?})")
        };
        Self::from_fns(&name, dim, |_| 0.0, move |a| [w[0] * a, w[1] * a], true)
    }

    /// Nonconvex Buckley-Leverett-type flux Q(a) = a^2 / (a^2 + (1-a)^2),
    /// q(a) = Q'(a) in the first direction (zero in the second).
    pub fn buckley(dim: usize) -> Result<Self> {
        Self::from_fns("buckley", dim, |_| 0.0, |a| [buckley_derivative(a), 0.0], true)
    }

    /// Catalog lookup used by the config layer.
    /// `params` carries the advection velocity or Burgers weights.
    pub fn builtin(name: &str, dim: usize, params: &[f64]) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Config(format!("unsupported dimension {dim}")));
        }
        match name {
            "advection" => {
                let mut c = params.to_vec();
                if c.is_empty() {
                    c = vec![1.0; dim];
                }
                c.resize(dim, *c.last().unwrap());
                Self::advection(&c)
            }
            "burgers" => {
                let mut w = params.to_vec();
                if w.is_empty() {
                    w = vec![1.0; dim];
                }
                w.resize(dim, *w.last().unwrap());
                Self::burgers(&w)
            }
            "buckley" => Self::buckley(dim),
            other => Err(Error::Config(format!("unknown flux '{other}'"))),
        }
    }

    /// Sup-bounds over a in [0,1] by scanning `BOUND_SCAN_SAMPLES` midpoints.
    pub fn bounds(&self) -> FluxBounds {
        self.bounds_with_samples(BOUND_SCAN_SAMPLES)
    }

    pub fn bounds_with_samples(&self, n: usize) -> FluxBounds {
        let mut sup_q0_plus: f64 = 0.0;
        let mut sup_q0_minus: f64 = 0.0;
        let mut sup_q_norm: f64 = 0.0;
        for i in 0..n {
            let a = (i as f64 + 0.5) / n as f64;
            let q0 = self.q0(a);
            sup_q0_plus = sup_q0_plus.max(q0);
            sup_q0_minus = sup_q0_minus.max(-q0);
            let q = self.q(a);
            sup_q_norm = sup_q_norm.max((q[0] * q[0] + q[1] * q[1]).sqrt());
        }
        FluxBounds {
            sup_q0_plus,
            sup_q0_minus,
            sup_q_norm,
        }
    }

    /// Checks the q0 >= 0 flag against dense samples.
    pub fn validate(&self) -> Result<()> {
        if self.q0_nonneg {
            for i in 0..BOUND_SCAN_SAMPLES {
                let a = (i as f64 + 0.5) / BOUND_SCAN_SAMPLES as f64;
                if self.q0(a) < 0.0 {
                    return Err(Error::Invariant(format!(
                        "flux '{}' flagged q0 >= 0 but q0({a}) = {}",
                        self.name,
                        self.q0(a)
                    )));
                }
            }
        }
        Ok(())
    }
}

fn buckley_derivative(a: f64) -> f64 {
    // Q(a) = a^2 / (a^2 + (1-a)^2)
    let d = a * a + (1.0 - a) * (1.0 - a);
    let dd = 2.0 * a - 2.0 * (1.0 - a);
    (2.0 * a * d - a * a * dd) / (d * d)
}
