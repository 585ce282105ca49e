//! Empirical bound certificates.
//!
//! A certificate records the worst observed ratio LHS/RHS of an inequality
//! over a parameter grid, together with a stabilization check: the sweep is
//! organized by a scale variable (typically `t + r`), and the certificate
//! passes when the last decade of the scale no longer pushes the maximum up
//! by more than a tolerated factor. This stands in for the unspecified
//! universal constants of the estimates being checked.

use std::fmt::Write as _;

/// One sampled ratio, tagged with the scale it was observed at.
#[derive(Debug, Clone, Copy)]
pub struct RatioSample {
    /// Scale variable used for decade bucketing (e.g. t + r).
    pub scale: f64,
    /// Observed LHS/RHS ratio, >= 0.
    pub ratio: f64,
    /// Location of the sample, for the worst-point diagnostic.
    pub location: [f64; 4],
}

/// Worst-case ratio of an inequality over a grid, with stabilization info.
#[derive(Debug, Clone)]
pub struct BoundCertificate {
    pub id: String,
    /// Free-form parameter description, e.g. "rho=0.5".
    pub params: String,
    pub grid_spec: String,
    pub max_ratio: f64,
    pub worst_location: [f64; 4],
    /// max over the last decade / max over the preceding decades.
    pub stabilization_ratio: f64,
    pub stabilized: bool,
    /// Points skipped (region filters, per-point quadrature failures).
    pub skipped: usize,
    pub total: usize,
}

impl BoundCertificate {
    /// Builds a certificate from ratio samples.
    ///
    /// `stab_factor` is the tolerated growth of the last-decade maximum over
    /// the maximum of all earlier decades. When every sample falls in a
    /// single decade the sweep cannot express growth and the certificate is
    /// marked stabilized with ratio 1.
    pub fn from_samples(
        id: &str,
        params: &str,
        grid_spec: &str,
        samples: &[RatioSample],
        skipped: usize,
        stab_factor: f64,
    ) -> Self {
        assert!(!samples.is_empty(), "certificate needs at least one sample");
        let mut max_ratio = f64::NEG_INFINITY;
        let mut worst_location = [f64::NAN; 4];
        let mut max_scale = f64::NEG_INFINITY;
        for s in samples {
            if s.ratio > max_ratio {
                max_ratio = s.ratio;
                worst_location = s.location;
            }
            max_scale = max_scale.max(s.scale);
        }
        // Last decade: scales within a factor 10 of the largest observed.
        let cut = max_scale / 10.0;
        let mut max_last = f64::NEG_INFINITY;
        let mut max_head = f64::NEG_INFINITY;
        for s in samples {
            if s.scale > cut {
                max_last = max_last.max(s.ratio);
            } else {
                max_head = max_head.max(s.ratio);
            }
        }
        let (stabilization_ratio, stabilized) = if max_head <= 0.0 || !max_head.is_finite() {
            (1.0, max_last.is_finite())
        } else {
            let r = max_last / max_head;
            (r, r <= stab_factor && max_ratio.is_finite())
        };
        BoundCertificate {
            id: id.to_string(),
            params: params.to_string(),
            grid_spec: grid_spec.to_string(),
            max_ratio,
            worst_location,
            stabilization_ratio,
            stabilized,
            skipped,
            total: samples.len() + skipped,
        }
    }

    pub fn csv_header() -> &'static str {
        "id,params,grid,max_ratio,stab_ratio,stabilized,skipped,total,worst_t,worst_r,worst_a,worst_b"
    }

    pub fn csv_row(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{:.9e},{:.4},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e}",
            self.id,
            self.params,
            self.grid_spec,
            self.max_ratio,
            self.stabilization_ratio,
            self.stabilized,
            self.skipped,
            self.total,
            self.worst_location[0],
            self.worst_location[1],
            self.worst_location[2],
            self.worst_location[3],
        );
        s
    }
}

/// Log-spaced grid in a scale variable, `per_decade` points per decade.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo);
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(2);
    (0..=n)
        .map(|i| lo * 10f64.powf(decades * i as f64 / n as f64))
        .collect()
}

/// Uniform grid on [lo, hi] with n points, endpoints included.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(scale: f64, ratio: f64) -> RatioSample {
        RatioSample {
            scale,
            ratio,
            location: [scale, 0.0, 0.0, 0.0],
        }
    }

    #[test]
    fn flat_ratio_stabilizes() {
        let samples: Vec<_> = log_grid(1.0, 1e3, 8)
            .into_iter()
            .map(|s| sample(s, 2.0 - 1.0 / s))
            .collect();
        let c = BoundCertificate::from_samples("flat", "", "g", &samples, 0, 1.1);
        assert!(c.stabilized);
        assert!((c.max_ratio - 2.0).abs() < 0.01);
    }

    #[test]
    fn growing_ratio_fails() {
        let samples: Vec<_> = log_grid(1.0, 1e3, 8)
            .into_iter()
            .map(|s| sample(s, s.sqrt()))
            .collect();
        let c = BoundCertificate::from_samples("grow", "", "g", &samples, 0, 1.1);
        assert!(!c.stabilized);
        assert!(c.stabilization_ratio > 2.0);
    }

    #[test]
    fn log_grid_covers_range() {
        let g = log_grid(1.0, 1000.0, 4);
        assert!((g[0] - 1.0).abs() < 1e-12);
        assert!((g.last().unwrap() - 1000.0).abs() < 1e-9);
        assert!(g.len() >= 13);
    }
}
