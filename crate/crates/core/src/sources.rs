//! Closed-form initial data and source terms.
//!
//! Quadrature-based propagator evaluation differentiates under the
//! integral, so every spatial profile carries an analytic gradient and a
//! support ball used to clip integration ranges.

use std::sync::Arc;

use crate::geometry::Cutoff;
use crate::weights::jb;

/// Ball containing the support of a profile.
#[derive(Debug, Clone, Copy)]
pub struct SupportBall {
    pub center: [f64; 2],
    pub radius: f64,
}

impl SupportBall {
    /// Radius of the support seen from the origin.
    pub fn radius_from_origin(&self) -> f64 {
        self.center[0].hypot(self.center[1]) + self.radius
    }
}

/// A smooth compactly supported function on R^2 with evaluable gradient.
pub trait SpatialProfile: Sync + Send {
    fn value(&self, x: [f64; 2]) -> f64;
    fn gradient(&self, x: [f64; 2]) -> [f64; 2];
    fn support(&self) -> SupportBall;
}

pub type Profile = Arc<dyn SpatialProfile>;

/// The zero profile.
pub struct ZeroProfile;

impl SpatialProfile for ZeroProfile {
    fn value(&self, _x: [f64; 2]) -> f64 {
        0.0
    }
    fn gradient(&self, _x: [f64; 2]) -> [f64; 2] {
        [0.0, 0.0]
    }
    fn support(&self) -> SupportBall {
        SupportBall {
            center: [0.0, 0.0],
            radius: 0.0,
        }
    }
}

/// Constant value on a (large) disk; used for the exact-solution probes
/// where the data must cover the whole evaluation cone.
pub struct ConstantDisk {
    pub value: f64,
    pub radius: f64,
}

impl SpatialProfile for ConstantDisk {
    fn value(&self, x: [f64; 2]) -> f64 {
        if x[0].hypot(x[1]) <= self.radius {
            self.value
        } else {
            0.0
        }
    }
    fn gradient(&self, _x: [f64; 2]) -> [f64; 2] {
        [0.0, 0.0]
    }
    fn support(&self) -> SupportBall {
        SupportBall {
            center: [0.0, 0.0],
            radius: self.radius,
        }
    }
}

/// `A exp(-a |x - c|^2)`, truncated where it is numerically zero.
pub struct GaussianBump {
    pub amplitude: f64,
    pub decay: f64,
    pub center: [f64; 2],
    pub truncation: f64,
}

impl GaussianBump {
    pub fn centered(amplitude: f64, decay: f64, truncation: f64) -> Self {
        GaussianBump {
            amplitude,
            decay,
            center: [0.0, 0.0],
            truncation,
        }
    }
}

impl SpatialProfile for GaussianBump {
    fn value(&self, x: [f64; 2]) -> f64 {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        let rr = dx * dx + dy * dy;
        if rr > self.truncation * self.truncation {
            return 0.0;
        }
        self.amplitude * (-self.decay * rr).exp()
    }
    fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        let rr = dx * dx + dy * dy;
        if rr > self.truncation * self.truncation {
            return [0.0, 0.0];
        }
        let s = -2.0 * self.decay * self.amplitude * (-self.decay * rr).exp();
        [s * dx, s * dy]
    }
    fn support(&self) -> SupportBall {
        SupportBall {
            center: self.center,
            radius: self.truncation,
        }
    }
}

/// Radially symmetric annular bump `A (1 - xi^2)^4` with
/// `xi = (2r - r_in - r_out) / (r_out - r_in)`, supported on the annulus.
pub struct RadialBump {
    pub amplitude: f64,
    pub r_in: f64,
    pub r_out: f64,
}

impl RadialBump {
    fn profile(&self, r: f64) -> (f64, f64) {
        let w = self.r_out - self.r_in;
        let xi = (2.0 * r - self.r_in - self.r_out) / w;
        if xi.abs() >= 1.0 {
            return (0.0, 0.0);
        }
        let q = 1.0 - xi * xi;
        let v = self.amplitude * q * q * q * q;
        let dv = self.amplitude * 4.0 * q * q * q * (-2.0 * xi) * (2.0 / w);
        (v, dv)
    }
}

impl SpatialProfile for RadialBump {
    fn value(&self, x: [f64; 2]) -> f64 {
        self.profile(x[0].hypot(x[1])).0
    }
    fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let (_, dv) = self.profile(r);
        [dv * x[0] / r, dv * x[1] / r]
    }
    fn support(&self) -> SupportBall {
        SupportBall {
            center: [0.0, 0.0],
            radius: self.r_out,
        }
    }
}

/// `scale * inner`.
pub struct ScaledProfile {
    pub scale: f64,
    pub inner: Profile,
}

impl SpatialProfile for ScaledProfile {
    fn value(&self, x: [f64; 2]) -> f64 {
        self.scale * self.inner.value(x)
    }
    fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let g = self.inner.gradient(x);
        [self.scale * g[0], self.scale * g[1]]
    }
    fn support(&self) -> SupportBall {
        self.inner.support()
    }
}

/// Pointwise sum of profiles; support is a crude enclosing ball.
pub struct SumProfile(pub Vec<Profile>);

impl SpatialProfile for SumProfile {
    fn value(&self, x: [f64; 2]) -> f64 {
        self.0.iter().map(|p| p.value(x)).sum()
    }
    fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let mut g = [0.0, 0.0];
        for p in &self.0 {
            let gi = p.gradient(x);
            g[0] += gi[0];
            g[1] += gi[1];
        }
        g
    }
    fn support(&self) -> SupportBall {
        let r = self
            .0
            .iter()
            .map(|p| p.support().radius_from_origin())
            .fold(0.0, f64::max);
        SupportBall {
            center: [0.0, 0.0],
            radius: r,
        }
    }
}

/// `psi_a(x) * inner(x)` with the product-rule gradient.
pub struct CutoffTimes {
    pub cutoff: Cutoff,
    pub inner: Profile,
}

impl SpatialProfile for CutoffTimes {
    fn value(&self, x: [f64; 2]) -> f64 {
        let c = self.cutoff.value(x);
        if c == 0.0 {
            0.0
        } else {
            c * self.inner.value(x)
        }
    }
    fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let c = self.cutoff.value(x);
        let gc = self.cutoff.gradient(x);
        let v = self.inner.value(x);
        let gv = self.inner.gradient(x);
        [c * gv[0] + v * gc[0], c * gv[1] + v * gc[1]]
    }
    fn support(&self) -> SupportBall {
        self.inner.support()
    }
}

/// `(1 - psi_a(x)) * inner(x)`.
pub struct ComplementCutoffTimes {
    pub cutoff: Cutoff,
    pub inner: Profile,
}

impl SpatialProfile for ComplementCutoffTimes {
    fn value(&self, x: [f64; 2]) -> f64 {
        let c = 1.0 - self.cutoff.value(x);
        if c == 0.0 {
            0.0
        } else {
            c * self.inner.value(x)
        }
    }
    fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let c = 1.0 - self.cutoff.value(x);
        let gc = self.cutoff.gradient(x);
        let v = self.inner.value(x);
        let gv = self.inner.gradient(x);
        [c * gv[0] - v * gc[0], c * gv[1] - v * gc[1]]
    }
    fn support(&self) -> SupportBall {
        // Support shrinks to the ball of radius a+1; keep the tighter of
        // the two bounds.
        let s = self.inner.support();
        let cap = self.cutoff.a + 1.0;
        if s.radius_from_origin() <= cap {
            s
        } else {
            SupportBall {
                center: [0.0, 0.0],
                radius: cap,
            }
        }
    }
}

/// Cauchy data pair (w0, w1).
#[derive(Clone)]
pub struct CauchyData {
    pub w0: Profile,
    pub w1: Profile,
}

impl CauchyData {
    pub fn new(w0: Profile, w1: Profile) -> Self {
        CauchyData { w0, w1 }
    }

    pub fn zero() -> Self {
        CauchyData {
            w0: Arc::new(ZeroProfile),
            w1: Arc::new(ZeroProfile),
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.w0
            .support()
            .radius_from_origin()
            .max(self.w1.support().radius_from_origin())
    }

    /// sup_x <x>^rho (|w0| + |grad w0| + |w1|) by dense sampling
    /// (`n x n` over the support square).
    pub fn weighted_norm(&self, rho: f64, n: usize) -> f64 {
        let s = self.support_radius().max(1e-6);
        let mut sup = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let x = [
                    -s + 2.0 * s * (i as f64 + 0.5) / n as f64,
                    -s + 2.0 * s * (j as f64 + 0.5) / n as f64,
                ];
                let g = self.w0.gradient(x);
                let m = self.w0.value(x).abs() + g[0].hypot(g[1]) + self.w1.value(x).abs();
                sup = sup.max(jb(x[0].hypot(x[1])).powf(rho) * m);
            }
        }
        sup
    }
}

/// Time profile with derivative, for separable sources.
pub trait TimeProfile: Sync + Send {
    fn value(&self, t: f64) -> f64;
    fn deriv(&self, t: f64) -> f64;
}

/// `<t>^{-p}`.
pub struct BracketDecay {
    pub power: f64,
}

impl TimeProfile for BracketDecay {
    fn value(&self, t: f64) -> f64 {
        (1.0 + t * t).powf(-0.5 * self.power)
    }
    fn deriv(&self, t: f64) -> f64 {
        -self.power * t * (1.0 + t * t).powf(-0.5 * self.power - 1.0)
    }
}

/// Constant-in-time profile.
pub struct ConstantInTime;

impl TimeProfile for ConstantInTime {
    fn value(&self, _t: f64) -> f64 {
        1.0
    }
    fn deriv(&self, _t: f64) -> f64 {
        0.0
    }
}

/// A source g(t, x) with evaluable first derivatives.
pub trait SpacetimeSource: Sync + Send {
    fn value(&self, t: f64, x: [f64; 2]) -> f64;
    fn dt(&self, t: f64, x: [f64; 2]) -> f64;
    fn gradient(&self, t: f64, x: [f64; 2]) -> [f64; 2];
    /// Support ball of g(t, .) uniformly in t.
    fn support(&self) -> SupportBall;
}

pub type Source = Arc<dyn SpacetimeSource>;

/// `g(t,x) = time(t) * space(x)`.
pub struct SeparableSource<T: TimeProfile, S: SpatialProfile> {
    pub time: T,
    pub space: S,
}

impl<T: TimeProfile, S: SpatialProfile> SpacetimeSource for SeparableSource<T, S> {
    fn value(&self, t: f64, x: [f64; 2]) -> f64 {
        self.time.value(t) * self.space.value(x)
    }
    fn dt(&self, t: f64, x: [f64; 2]) -> f64 {
        self.time.deriv(t) * self.space.value(x)
    }
    fn gradient(&self, t: f64, x: [f64; 2]) -> [f64; 2] {
        let a = self.time.value(t);
        let g = self.space.gradient(x);
        [a * g[0], a * g[1]]
    }
    fn support(&self) -> SupportBall {
        self.space.support()
    }
}

/// Constant source on a large disk (`g == 1` over the cone).
pub struct ConstantSource {
    pub value: f64,
    pub radius: f64,
}

impl SpacetimeSource for ConstantSource {
    fn value(&self, _t: f64, x: [f64; 2]) -> f64 {
        if x[0].hypot(x[1]) <= self.radius {
            self.value
        } else {
            0.0
        }
    }
    fn dt(&self, _t: f64, _x: [f64; 2]) -> f64 {
        0.0
    }
    fn gradient(&self, _t: f64, _x: [f64; 2]) -> [f64; 2] {
        [0.0, 0.0]
    }
    fn support(&self) -> SupportBall {
        SupportBall {
            center: [0.0, 0.0],
            radius: self.radius,
        }
    }
}

/// `|g(t,x)|_1 = |g| + |dt g| + |d1 g| + |d2 g| + |O12 g|` from the
/// closed-form derivatives.
pub fn source_z1_magnitude(g: &dyn SpacetimeSource, t: f64, x: [f64; 2]) -> f64 {
    let grad = g.gradient(t, x);
    let o12 = x[0] * grad[1] - x[1] * grad[0];
    g.value(t, x).abs() + g.dt(t, x).abs() + grad[0].abs() + grad[1].abs() + o12.abs()
}
