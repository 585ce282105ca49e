//! Free-space solution operators of the 2D wave equation by quadrature.
//!
//! The mean-value form of the 2D Poisson formula is used throughout:
//!
//! ```text
//! M_t[f](x) = (1/2pi) iint_{|z|<1} f(x + t z) / sqrt(1 - |z|^2) dz
//!           = (1/2pi) int_0^{2pi} int_0^{pi/2} f(x + t sin(s) w(a)) sin(s) ds da
//! ```
//!
//! The trigonometric substitution removes the endpoint singularity, and the
//! (theta, sigma) ranges are clipped exactly to the support ball of f, so
//! narrow supports far from the target are never missed by the adaptive
//! rule. The time derivative of the w0 term is taken under the integral
//! using the analytic gradient carried by the data.

use std::f64::consts::PI;

use crate::certificate::{BoundCertificate, RatioSample};
use crate::error::Result;
use crate::quadrature::integrate_opts;
use crate::sources::{CauchyData, SpacetimeSource, SupportBall};
use crate::weights::{jb, phi, psi_kappa, w_weight, SpacetimePoint, TrGrid};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Angular range of directions from `x` that can meet the ball, and the
/// sine bounds of the radial range for a given direction.
struct Clip {
    e: f64,
    d: [f64; 2],
    s: f64,
}

impl Clip {
    fn new(x: [f64; 2], ball: SupportBall) -> Self {
        let d = [ball.center[0] - x[0], ball.center[1] - x[1]];
        Clip {
            e: d[0].hypot(d[1]),
            d,
            s: ball.radius,
        }
    }

    fn theta_range(&self) -> (f64, f64) {
        if self.e <= self.s {
            (0.0, 2.0 * PI)
        } else {
            let mid = self.d[1].atan2(self.d[0]);
            let half = (self.s / self.e).min(1.0).asin();
            (mid - half, mid + half)
        }
    }

    /// For direction omega, the q = sin(sigma) interval contributing at
    /// propagation time tau, or None.
    fn q_range(&self, omega: [f64; 2], tau: f64) -> Option<(f64, f64)> {
        let p = omega[0] * self.d[0] + omega[1] * self.d[1];
        let disc = p * p - (self.e * self.e - self.s * self.s);
        if disc < 0.0 {
            return None;
        }
        let root = disc.sqrt();
        let q_lo = ((p - root) / tau).max(0.0);
        let q_hi = ((p + root) / tau).min(1.0);
        if q_hi <= q_lo {
            None
        } else {
            Some((q_lo, q_hi))
        }
    }
}

/// `M_t[f](x)` with f given pointwise and supported in `ball`.
///
/// `weight_power`: 1 integrates f sin(s) (the mean value), 2 integrates
/// f sin(s)^2 (the gradient-dot-direction variant).
fn mean_value_kernel<F>(f: F, ball: SupportBall, tau: f64, x: [f64; 2], tol: f64, weight_power: i32) -> Result<f64>
where
    F: Fn([f64; 2], [f64; 2]) -> f64,
{
    if tau <= 0.0 {
        return Ok(0.0);
    }
    let clip = Clip::new(x, ball);
    if clip.e - clip.s >= tau {
        return Ok(0.0);
    }
    let (th_lo, th_hi) = clip.theta_range();
    let span = (th_hi - th_lo).max(1e-300);
    let inner_tol = (tol / span * 0.2).max(1e-15);
    let outer = integrate_opts(
        |theta: f64| {
            let omega = [theta.cos(), theta.sin()];
            let Some((q_lo, q_hi)) = clip.q_range(omega, tau) else {
                return 0.0;
            };
            let (s_lo, s_hi) = (q_lo.asin(), q_hi.asin());
            integrate_opts(
                |sigma: f64| {
                    let q = sigma.sin();
                    let y = [x[0] + tau * q * omega[0], x[1] + tau * q * omega[1]];
                    let w = if weight_power == 1 { q } else { q * q };
                    f(y, omega) * w
                },
                s_lo,
                s_hi,
                inner_tol,
                1e-13,
                400,
            )
            .map(|q| q.value)
            .unwrap_or(f64::NAN)
        },
        th_lo,
        th_hi,
        tol,
        1e-13,
        800,
    )?;
    if !outer.value.is_finite() {
        return Err(crate::error::Error::QuadratureNonConvergence {
            requested: tol,
            achieved: f64::INFINITY,
        });
    }
    Ok(outer.value / (2.0 * PI))
}

/// `K_0[(w0, w1)](t, x)`: exact solution of the homogeneous Cauchy problem,
/// with the w0 time derivative taken under the integral.
pub fn k0_eval(data: &CauchyData, p: SpacetimePoint, tol: f64) -> Result<f64> {
    let t = p.t;
    if t == 0.0 {
        return Ok(data.w0.value(p.x));
    }
    let scale = t.max(1.0);
    // d/dt (t M_t[w0]) = M_t[w0] + t M'_t[grad w0 . w]
    let m_w0 = mean_value_kernel(
        |y, _| data.w0.value(y),
        data.w0.support(),
        t,
        p.x,
        tol / 3.0,
        1,
    )?;
    let m_gw0 = mean_value_kernel(
        |y, omega| {
            let g = data.w0.gradient(y);
            g[0] * omega[0] + g[1] * omega[1]
        },
        data.w0.support(),
        t,
        p.x,
        tol / (3.0 * scale),
        2,
    )?;
    let m_w1 = mean_value_kernel(
        |y, _| data.w1.value(y),
        data.w1.support(),
        t,
        p.x,
        tol / (3.0 * scale),
        1,
    )?;
    Ok(m_w0 + t * m_gw0 + t * m_w1)
}

/// `L_0[g](t, x)`: Duhamel integral of mean values over the backward cone.
pub fn l0_eval<G>(g: G, support: SupportBall, p: SpacetimePoint, tol: f64) -> Result<f64>
where
    G: Fn(f64, [f64; 2]) -> f64 + Copy,
{
    let t = p.t;
    if t <= 0.0 {
        return Ok(0.0);
    }
    // Sections with t - s < e - S contribute nothing.
    let clip = Clip::new(p.x, support);
    let s_hi = t - (clip.e - clip.s).max(0.0);
    if s_hi <= 0.0 {
        return Ok(0.0);
    }
    let inner_tol = (tol / s_hi * 0.2).max(1e-15);
    let q = integrate_opts(
        |s: f64| {
            let tau = t - s;
            let m = mean_value_kernel(|y, _| g(s, y), support, tau, p.x, inner_tol, 1)
                .unwrap_or(f64::NAN);
            tau * m
        },
        0.0,
        s_hi,
        tol,
        1e-12,
        800,
    )?;
    if !q.value.is_finite() {
        return Err(crate::error::Error::QuadratureNonConvergence {
            requested: tol,
            achieved: f64::INFINITY,
        });
    }
    Ok(q.value)
}

pub fn l0_eval_source(g: &dyn SpacetimeSource, p: SpacetimePoint, tol: f64) -> Result<f64> {
    l0_eval(&|s, y| g.value(s, y), g.support(), p, tol)
}

/// `d/dt L_0[g](t, x)` by differentiation under the integral; the boundary
/// term vanishes because the propagator is zero at zero propagation time.
pub fn l0_dt_eval(g: &dyn SpacetimeSource, p: SpacetimePoint, tol: f64) -> Result<f64> {
    let t = p.t;
    if t <= 0.0 {
        return Ok(0.0);
    }
    let support = g.support();
    let clip = Clip::new(p.x, support);
    let s_hi = t - (clip.e - clip.s).max(0.0);
    if s_hi <= 0.0 {
        return Ok(0.0);
    }
    let inner_tol = (tol / s_hi * 0.1).max(1e-15);
    let q = integrate_opts(
        |s: f64| {
            let tau = t - s;
            let m = mean_value_kernel(|y, _| g.value(s, y), support, tau, p.x, inner_tol, 1)
                .unwrap_or(f64::NAN);
            let mg = mean_value_kernel(
                |y, omega| {
                    let gr = g.gradient(s, y);
                    gr[0] * omega[0] + gr[1] * omega[1]
                },
                support,
                tau,
                p.x,
                inner_tol / tau.max(1.0),
                2,
            )
            .unwrap_or(f64::NAN);
            m + tau * mg
        },
        0.0,
        s_hi,
        tol,
        1e-12,
        800,
    )?;
    Ok(q.value)
}

/// Homogeneous decay certificate: worst over the grid of
/// `<t+r>^{1/2} Phi_{nu-1} |K_0[data]| / B_{nu+1/2,0}[data]`.
pub fn verify_homogeneous_decay(
    data: &CauchyData,
    nu: f64,
    grid: &TrGrid,
    tol: f64,
) -> Result<BoundCertificate> {
    assert!(nu > 0.0, "decay certificate needs nu > 0");
    let denom = data.weighted_norm(nu + 0.5, 64);
    let mut samples = Vec::new();
    let mut skipped = 0usize;
    for (t, r) in grid.points() {
        let p = SpacetimePoint::radial(t, r);
        let ratio = if denom == 0.0 {
            0.0
        } else {
            match k0_eval(data, p, tol) {
                Ok(v) => jb(t + r).sqrt() * phi(nu - 1.0, p) * v.abs() / denom,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            }
        };
        samples.push(RatioSample {
            scale: t + r,
            ratio,
            location: [t, r, nu, 0.0],
        });
    }
    Ok(BoundCertificate::from_samples(
        "hom-decay",
        &format!("nu={nu}"),
        &grid.spec(),
        &samples,
        skipped,
        1.2,
    ))
}

/// Inhomogeneous decay certificate: worst over the grid of
/// `<t+r>^{1/2} Phi_{nu-1} |L_0[g]| / (Psi_kappa(t+r) ||g(t):M_0(W_{nu,kappa})||)`.
pub fn verify_inhomogeneous_decay(
    g: &dyn SpacetimeSource,
    nu: f64,
    kappa: f64,
    grid: &TrGrid,
    tol: f64,
) -> Result<BoundCertificate> {
    assert!(nu > 0.0 && kappa >= 1.0);
    let support = g.support();
    let sr = support.radius_from_origin().max(1e-6);
    // Dense spatial sample points of the norm sup.
    let nspace = 48;
    let space_pts: Vec<[f64; 2]> = (0..nspace)
        .flat_map(|i| {
            (0..nspace).map(move |j| {
                [
                    -sr + 2.0 * sr * (i as f64 + 0.5) / nspace as f64,
                    -sr + 2.0 * sr * (j as f64 + 0.5) / nspace as f64,
                ]
            })
        })
        .collect();
    let m_norm = |t: f64| -> f64 {
        let nt = 64;
        let mut sup = 0.0f64;
        for k in 0..=nt {
            let s = t * k as f64 / nt as f64;
            for &y in &space_pts {
                let p = SpacetimePoint { t: s, x: y };
                let v = jb(y[0].hypot(y[1])).sqrt()
                    * w_weight(nu, kappa, p)
                    * g.value(s, y).abs();
                sup = sup.max(v);
            }
        }
        sup
    };
    let mut samples = Vec::new();
    let mut skipped = 0usize;
    for (t, r) in grid.points() {
        let p = SpacetimePoint::radial(t, r);
        let denom = psi_kappa(kappa, t + r) * m_norm(t);
        let ratio = if denom == 0.0 {
            0.0
        } else {
            match l0_eval(&|s, y| g.value(s, y), support, p, tol) {
                Ok(v) => jb(t + r).sqrt() * phi(nu - 1.0, p) * v.abs() / denom,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            }
        };
        samples.push(RatioSample {
            scale: t + r,
            ratio,
            location: [t, r, nu, kappa],
        });
    }
    Ok(BoundCertificate::from_samples(
        "inhom-decay",
        &format!("nu={nu},kappa={kappa}"),
        &grid.spec(),
        &samples,
        skipped,
        1.2,
    ))
}
