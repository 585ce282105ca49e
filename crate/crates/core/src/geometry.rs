//! Obstacle geometry, star-shapedness validation and radial cut-offs.

use crate::error::{Error, Result};

pub const MIN_BOUNDARY_SAMPLES: usize = 256;

/// A compact obstacle with smooth boundary, stored as a sampled closed
/// curve (counterclockwise). When the boundary is a graph over the angle,
/// the radial profile is kept as well; the exterior solver and the Hardy
/// estimate need that form.
#[derive(Debug, Clone)]
pub struct Obstacle {
    /// Boundary points at uniform parameter values, counterclockwise.
    points: Vec<[f64; 2]>,
    /// R(theta_k) at theta_k = 2 pi k / M when the boundary is radial.
    radial: Option<Vec<f64>>,
}

impl Obstacle {
    /// Obstacle from a radial boundary profile theta -> R(theta) > 0.
    pub fn from_radial_profile<F: Fn(f64) -> f64>(profile: F, samples: usize) -> Result<Self> {
        let m = samples.max(MIN_BOUNDARY_SAMPLES);
        let mut radial = Vec::with_capacity(m);
        let mut points = Vec::with_capacity(m);
        for k in 0..m {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            let r = profile(theta);
            if !(r > 0.0) {
                return Err(Error::MalformedBoundary(format!(
                    "nonpositive radius {r} at theta = {theta}"
                )));
            }
            if r >= 1.0 {
                return Err(Error::MalformedBoundary(format!(
                    "obstacle must fit in the unit ball, R({theta}) = {r}"
                )));
            }
            radial.push(r);
            points.push([r * theta.cos(), r * theta.sin()]);
        }
        Ok(Obstacle {
            points,
            radial: Some(radial),
        })
    }

    /// Disk of radius r centered at the origin.
    pub fn disk(r: f64) -> Result<Self> {
        Self::from_radial_profile(|_| r, MIN_BOUNDARY_SAMPLES)
    }

    /// Ellipse with semi-axes (a, b) centered at the origin.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::from_radial_profile(
            move |theta| {
                let (s, c) = theta.sin_cos();
                a * b / ((b * c).powi(2) + (a * s).powi(2)).sqrt()
            },
            MIN_BOUNDARY_SAMPLES,
        )
    }

    /// Disk of radius r centered at `center`. Not necessarily star-shaped
    /// about the origin; carries no radial profile unless the origin is
    /// interior.
    pub fn disk_at(center: [f64; 2], r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::MalformedBoundary("nonpositive radius".into()));
        }
        let m = MIN_BOUNDARY_SAMPLES;
        let points: Vec<[f64; 2]> = (0..m)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                [center[0] + r * phi.cos(), center[1] + r * phi.sin()]
            })
            .collect();
        let dist_center = center[0].hypot(center[1]);
        let radial = if dist_center < r {
            // Origin interior: the boundary is a radial graph.
            Some(
                (0..m)
                    .map(|k| {
                        let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                        let (s, c) = theta.sin_cos();
                        // Solve |t (c,s) - center| = r for t > 0.
                        let b = c * center[0] + s * center[1];
                        b + (b * b + r * r - dist_center * dist_center).sqrt()
                    })
                    .collect(),
            )
        } else {
            None
        };
        Ok(Obstacle { points, radial })
    }

    /// Loads (theta, R) rows from CSV text; theta in radians, any order.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<(f64, f64)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("theta") {
                continue;
            }
            let mut it = line.split(',');
            let theta: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::MalformedBoundary(format!("bad row {}", lineno + 1)))?;
            let r: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::MalformedBoundary(format!("bad row {}", lineno + 1)))?;
            rows.push((theta, r));
        }
        if rows.len() < 8 {
            return Err(Error::MalformedBoundary(format!(
                "need at least 8 samples, got {}",
                rows.len()
            )));
        }
        rows.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        let tau = std::f64::consts::TAU;
        let interp = move |theta: f64| -> f64 {
            let th = theta.rem_euclid(tau);
            // Linear interpolation on the sorted samples, periodic wrap.
            let idx = rows.partition_point(|&(a, _)| a <= th);
            let (t0, r0) = if idx == 0 {
                let (a, r) = rows[rows.len() - 1];
                (a - tau, r)
            } else {
                rows[idx - 1]
            };
            let (t1, r1) = if idx == rows.len() {
                let (a, r) = rows[0];
                (a + tau, r)
            } else {
                rows[idx]
            };
            if t1 == t0 {
                r0
            } else {
                r0 + (r1 - r0) * (th - t0) / (t1 - t0)
            }
        };
        Self::from_radial_profile(interp, MIN_BOUNDARY_SAMPLES)
    }

    pub fn boundary_points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// R(theta) by periodic cubic interpolation of the stored samples.
    /// Errors if the boundary is not a radial graph.
    pub fn radius(&self, theta: f64) -> Result<f64> {
        let radial = self
            .radial
            .as_ref()
            .ok_or_else(|| Error::MalformedBoundary("boundary is not a radial graph".into()))?;
        let m = radial.len();
        let tau = std::f64::consts::TAU;
        let s = theta.rem_euclid(tau) / tau * m as f64;
        let i1 = (s.floor() as usize) % m;
        let f = s - s.floor();
        let i0 = (i1 + m - 1) % m;
        let i2 = (i1 + 1) % m;
        let i3 = (i1 + 2) % m;
        let (p0, p1, p2, p3) = (radial[i0], radial[i1], radial[i2], radial[i3]);
        // Catmull-Rom.
        Ok(p1
            + 0.5
                * f
                * (p2 - p0
                    + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3
                        + f * (3.0 * (p1 - p2) + p3 - p0))))
    }

    /// True when the point lies strictly inside the obstacle.
    pub fn contains(&self, x: [f64; 2]) -> bool {
        match &self.radial {
            Some(_) => {
                let r = x[0].hypot(x[1]);
                let theta = x[1].atan2(x[0]);
                r < self.radius(theta).expect("radial graph present")
            }
            None => {
                // Even-odd ray test against the sampled polygon.
                let mut inside = false;
                let n = self.points.len();
                let mut j = n - 1;
                for i in 0..n {
                    let (pi, pj) = (self.points[i], self.points[j]);
                    if (pi[1] > x[1]) != (pj[1] > x[1]) {
                        let t = (x[1] - pi[1]) / (pj[1] - pi[1]);
                        if x[0] < pi[0] + t * (pj[0] - pi[0]) {
                            inside = !inside;
                        }
                    }
                    j = i;
                }
                inside
            }
        }
    }

    /// dist(0, boundary) for radial obstacles: min R(theta).
    pub fn r0(&self) -> Result<f64> {
        let radial = self
            .radial
            .as_ref()
            .ok_or_else(|| Error::MalformedBoundary("boundary is not a radial graph".into()))?;
        Ok(radial.iter().cloned().fold(f64::INFINITY, f64::min))
    }

    pub fn max_radius(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p[0].hypot(p[1]))
            .fold(0.0, f64::max)
    }
}

/// Result of the star-shapedness check: pass/fail plus the worst value of
/// x . n(x) over the sampled boundary (n the unit outward normal).
#[derive(Debug, Clone, Copy)]
pub struct StarShapeReport {
    pub star_shaped: bool,
    pub worst_xn: f64,
}

/// Checks x . n(x) >= -tol at every sampled boundary point, with the
/// tolerance scaled to the obstacle size.
pub fn check_star_shaped(obs: &Obstacle) -> Result<StarShapeReport> {
    let pts = obs.boundary_points();
    let n = pts.len();
    if n < 8 {
        return Err(Error::MalformedBoundary("too few boundary samples".into()));
    }
    let scale = obs.max_radius();
    if !(scale > 0.0) {
        return Err(Error::MalformedBoundary("degenerate boundary".into()));
    }
    let tol = 1e-10 * scale;
    let mut worst = f64::INFINITY;
    for i in 0..n {
        let prev = pts[(i + n - 1) % n];
        let next = pts[(i + 1) % n];
        // Central-difference tangent; outward normal of a counterclockwise
        // curve is the tangent rotated by -90 degrees.
        let tx = next[0] - prev[0];
        let ty = next[1] - prev[1];
        let len = tx.hypot(ty);
        if len == 0.0 {
            return Err(Error::MalformedBoundary(format!(
                "coincident boundary samples near index {i}"
            )));
        }
        let nx = ty / len;
        let ny = -tx / len;
        let xn = pts[i][0] * nx + pts[i][1] * ny;
        worst = worst.min(xn);
    }
    Ok(StarShapeReport {
        star_shaped: worst >= -tol,
        worst_xn: worst,
    })
}

/// Radial cut-off `psi_a`: 0 for |x| <= a, 1 for |x| >= a+1, bridged by the
/// quintic smoothstep so value, gradient and Laplacian are continuous.
#[derive(Debug, Clone, Copy)]
pub struct Cutoff {
    pub a: f64,
}

impl Cutoff {
    pub fn new(a: f64) -> Self {
        debug_assert!(a >= 1.0, "cutoff radius must be >= 1");
        Cutoff { a }
    }

    fn smoothstep(s: f64) -> f64 {
        s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
    }

    fn smoothstep_d(s: f64) -> f64 {
        30.0 * s * s * (s - 1.0) * (s - 1.0)
    }

    fn smoothstep_dd(s: f64) -> f64 {
        60.0 * s * (1.0 + s * (2.0 * s - 3.0))
    }

    pub fn value(&self, x: [f64; 2]) -> f64 {
        let r = x[0].hypot(x[1]);
        if r <= self.a {
            0.0
        } else if r >= self.a + 1.0 {
            1.0
        } else {
            Self::smoothstep(r - self.a)
        }
    }

    pub fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let r = x[0].hypot(x[1]);
        if r <= self.a || r >= self.a + 1.0 {
            return [0.0, 0.0];
        }
        let d = Self::smoothstep_d(r - self.a);
        [d * x[0] / r, d * x[1] / r]
    }

    pub fn laplacian(&self, x: [f64; 2]) -> f64 {
        let r = x[0].hypot(x[1]);
        if r <= self.a || r >= self.a + 1.0 {
            return 0.0;
        }
        let s = r - self.a;
        Self::smoothstep_dd(s) + Self::smoothstep_d(s) / r
    }
}

/// `[psi_a, -Lap] h = h Lap(psi_a) + 2 grad(h) . grad(psi_a)` at x, given
/// the field value and gradient there. Identically zero on both plateaus.
pub fn commutator_apply(a: f64, h: f64, grad_h: [f64; 2], x: [f64; 2]) -> f64 {
    let r = x[0].hypot(x[1]);
    if r <= a || r >= a + 1.0 {
        return 0.0;
    }
    let cut = Cutoff::new(a);
    let g = cut.gradient(x);
    h * cut.laplacian(x) + 2.0 * (grad_h[0] * g[0] + grad_h[1] * g[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_is_star_shaped() {
        let obs = Obstacle::disk(0.5).unwrap();
        let rep = check_star_shaped(&obs).unwrap();
        assert!(rep.star_shaped);
        assert!((rep.worst_xn - 0.5).abs() < 1e-6);
    }

    #[test]
    fn ellipse_is_star_shaped() {
        let obs = Obstacle::ellipse(0.6, 0.3).unwrap();
        let rep = check_star_shaped(&obs).unwrap();
        assert!(rep.star_shaped);
        // Analytic oracle: x.n = a b / sqrt(b^2 cos^2 + a^2 sin^2), brute
        // minimum over 10^4 angles.
        let mut oracle = f64::INFINITY;
        for k in 0..10_000 {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / 10_000.0;
            let v = 0.6 * 0.3 / ((0.3 * phi.cos()).powi(2) + (0.6 * phi.sin()).powi(2)).sqrt();
            oracle = oracle.min(v);
        }
        assert!((rep.worst_xn - oracle).abs() < 1e-4);
    }

    #[test]
    fn offcenter_disk_is_not_star_shaped() {
        let obs = Obstacle::disk_at([0.5, 0.0], 0.3).unwrap();
        let rep = check_star_shaped(&obs).unwrap();
        assert!(!rep.star_shaped);
        // Boundary point nearest the origin: p = (0.2, 0), n = (-1, 0).
        assert!((rep.worst_xn + 0.2).abs() < 1e-4);
    }

    #[test]
    fn star_check_rotation_invariant() {
        let profile = |theta: f64| 0.4 + 0.15 * (3.0 * theta).cos();
        let base = Obstacle::from_radial_profile(profile, 512).unwrap();
        let rot = Obstacle::from_radial_profile(|t| profile(t - 1.234), 512).unwrap();
        let a = check_star_shaped(&base).unwrap();
        let b = check_star_shaped(&rot).unwrap();
        assert_eq!(a.star_shaped, b.star_shaped);
        assert!((a.worst_xn - b.worst_xn).abs() < 1e-6);
    }

    #[test]
    fn nonpositive_radius_rejected() {
        assert!(Obstacle::from_radial_profile(|t| 0.5 * t.cos(), 256).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut text = String::from("theta,R\n");
        for k in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            text.push_str(&format!("{theta},{}\n", 0.5 + 0.1 * theta.sin()));
        }
        let obs = Obstacle::from_csv(&text).unwrap();
        assert!(check_star_shaped(&obs).unwrap().star_shaped);
        let r = obs.radius(0.7).unwrap();
        assert!((r - (0.5 + 0.1 * 0.7f64.sin())).abs() < 1e-3);
    }

    #[test]
    fn cutoff_plateaus_exact() {
        let c = Cutoff::new(1.0);
        assert_eq!(c.value([0.3, 0.4]), 0.0);
        assert_eq!(c.value([3.0, 0.0]), 1.0);
        assert_eq!(c.gradient([3.0, 0.0]), [0.0, 0.0]);
        let c2 = Cutoff::new(2.0);
        assert!((c2.value([2.5, 0.0]) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cutoff_profile_monotone() {
        let c = Cutoff::new(1.5);
        let mut prev = -1.0;
        for k in 0..=1000 {
            let r = 1.5 + k as f64 / 1000.0;
            let v = c.value([r, 0.0]);
            assert!(v >= prev - 1e-15 && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn cutoff_derivatives_match_finite_differences() {
        let c = Cutoff::new(1.0);
        let d = 1e-5;
        for &x in &[[1.3, 0.2], [1.1, -0.9], [0.3, 1.4]] {
            let gx = (c.value([x[0] + d, x[1]]) - c.value([x[0] - d, x[1]])) / (2.0 * d);
            let gy = (c.value([x[0], x[1] + d]) - c.value([x[0], x[1] - d])) / (2.0 * d);
            let g = c.gradient(x);
            assert!((g[0] - gx).abs() < 1e-7 && (g[1] - gy).abs() < 1e-7);
            let lap_fd = (c.value([x[0] + d, x[1]])
                + c.value([x[0] - d, x[1]])
                + c.value([x[0], x[1] + d])
                + c.value([x[0], x[1] - d])
                - 4.0 * c.value(x))
                / (d * d);
            assert!((c.laplacian(x) - lap_fd).abs() < 1e-5);
        }
    }

    #[test]
    fn cutoff_c2_across_seams() {
        // The radial second difference across each seam tends to the
        // analytic value (zero) under refinement.
        let c = Cutoff::new(2.0);
        for seam in [2.0, 3.0] {
            let mut prev = f64::INFINITY;
            for &d in &[1e-2, 1e-3, 1e-4] {
                let f = |r: f64| c.value([r, 0.0]);
                let dd = (f(seam + d) - 2.0 * f(seam) + f(seam - d)) / (d * d);
                assert!(dd.abs() <= prev + 1e-12);
                prev = dd.abs();
            }
            assert!(prev < 1e-2);
        }
    }

    #[test]
    fn commutator_identities() {
        // h == 1 gives Lap(psi_a).
        let x = [1.4, 0.3];
        let c = Cutoff::new(1.0);
        assert!((commutator_apply(1.0, 1.0, [0.0, 0.0], x) - c.laplacian(x)).abs() < 1e-14);
        // Plateau support.
        assert_eq!(commutator_apply(1.0, 5.0, [1.0, 2.0], [0.25, 0.0]), 0.0);
        assert_eq!(commutator_apply(1.0, 5.0, [1.0, 2.0], [4.0, 0.0]), 0.0);
    }

    #[test]
    fn commutator_matches_finite_difference_oracle() {
        // [psi, -Lap]h = Lap(psi h) - psi Lap(h); with h = x_1 the second
        // term vanishes and Lap(psi x_1) is computed by finite differences.
        let a = 1.0;
        let h = |x: [f64; 2]| x[0];
        let x = [1.5f64, 0.0];
        let c = Cutoff::new(a);
        let d = 1e-4;
        let ph = |y: [f64; 2]| c.value(y) * h(y);
        let lap_fd = (ph([x[0] + d, x[1]])
            + ph([x[0] - d, x[1]])
            + ph([x[0], x[1] + d])
            + ph([x[0], x[1] - d])
            - 4.0 * ph(x))
            / (d * d);
        let got = commutator_apply(a, h(x), [1.0, 0.0], x);
        assert!(
            (got - lap_fd).abs() < 1e-5,
            "commutator {got} vs fd {lap_fd}"
        );
        // Expected closed form: x1 Lap(psi) + 2 d1(psi).
        let expect = x[0] * c.laplacian(x) + 2.0 * c.gradient(x)[0];
        assert!((got - expect).abs() < 1e-14);
    }

    #[test]
    fn cutoff_gradient_support() {
        let c = Cutoff::new(2.0);
        for k in 0..100 {
            let r = 5.0 * (k as f64 + 0.5) / 100.0;
            let g = c.gradient([r * 0.6, r * 0.8]);
            let inside_bridge = r > 2.0 && r < 3.0;
            if !inside_bridge {
                assert_eq!(g, [0.0, 0.0]);
            }
        }
    }
}
