//! Weight functions and weighted norms.
//!
//! Everything here is a pointwise function of a spacetime point built from
//! the Japanese bracket `<s> = sqrt(1 + s^2)`. The certification op sweeps
//! the pointwise inequalities relating `w_rho` to `W_{1/2,1/2}` and to
//! `<t>^{-rho}` and reports the worst constant seen.

use crate::certificate::{lin_grid, log_grid, BoundCertificate, RatioSample};
use crate::error::{Error, Result};

/// Exponent bundle shared by the weighted estimates.
#[derive(Debug, Clone, Copy)]
pub struct WeightParams {
    pub nu: f64,
    pub kappa: f64,
    pub rho: f64,
    pub mu: f64,
    pub eta: f64,
    /// Speed offset in `z_{rho,kappa;c}`.
    pub c: f64,
}

impl Default for WeightParams {
    fn default() -> Self {
        WeightParams {
            nu: 1.0,
            kappa: 1.0,
            rho: 0.5,
            mu: 0.0,
            eta: 0.25,
            c: 0.0,
        }
    }
}

impl WeightParams {
    /// Checks the ranges required by the bound contexts these exponents
    /// feed into (kappa >= 1, rho in (0,1], eta in (0,1), mu >= 0, c >= 0).
    pub fn validate(&self) -> Result<()> {
        if self.kappa < 1.0 {
            return Err(Error::Domain(format!("kappa = {} < 1", self.kappa)));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::Domain(format!("rho = {} not in (0,1]", self.rho)));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::Domain(format!("eta = {} not in (0,1)", self.eta)));
        }
        if self.mu < 0.0 || self.c < 0.0 {
            return Err(Error::Domain("mu and c must be >= 0".into()));
        }
        Ok(())
    }
}

/// A point (t, x) with t >= 0, x in R^2.
#[derive(Debug, Clone, Copy)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: [f64; 2],
}

impl SpacetimePoint {
    pub fn new(t: f64, x: [f64; 2]) -> Self {
        debug_assert!(t >= 0.0, "time must be nonnegative");
        SpacetimePoint { t, x }
    }

    pub fn radial(t: f64, r: f64) -> Self {
        debug_assert!(r >= 0.0);
        SpacetimePoint { t, x: [r, 0.0] }
    }

    pub fn r(&self) -> f64 {
        self.x[0].hypot(self.x[1])
    }
}

/// Japanese bracket of a scalar.
pub fn jb(s: f64) -> f64 {
    (1.0 + s * s).sqrt()
}

/// Japanese bracket of a 2-vector.
pub fn jb2(x: [f64; 2]) -> f64 {
    (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt()
}

/// `A^{[a]_+}`: A^a for a > 0, 1 for a < 0, 1 + log A for a = 0.
///
/// Requires A >= 1.
pub fn bracket_plus(a_base: f64, a_exp: f64) -> Result<f64> {
    if a_base < 1.0 {
        return Err(Error::Domain(format!("bracket_plus base {} < 1", a_base)));
    }
    Ok(if a_exp > 0.0 {
        a_base.powf(a_exp)
    } else if a_exp < 0.0 {
        1.0
    } else {
        1.0 + a_base.ln()
    })
}

/// The three-branch weight `Phi_nu(t, x)`.
///
/// For nu > 0 both factors are brackets of t - |x|, as printed in the
/// source estimates; the branch algebra collapses to `<t-r>^nu` for
/// nu < 1/2 and to `<t-r>^{1/2}` for nu > 1/2.
pub fn phi(nu: f64, p: SpacetimePoint) -> f64 {
    let r = p.r();
    if nu < 0.0 {
        jb(p.t + r).powf(nu)
    } else if nu == 0.0 {
        1.0 / (2.0 + jb(p.t + r) / jb(p.t - r)).ln()
    } else {
        let b = jb(p.t - r);
        // b >= 1 always, so bracket_plus cannot fail here.
        b.sqrt() / bracket_plus(b, 0.5 - nu).expect("bracket base >= 1")
    }
}

/// `Psi_kappa(t)`: log(2+t) at kappa = 1, otherwise 1.
pub fn psi_kappa(kappa: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if kappa == 1.0 {
        (2.0 + t).ln()
    } else {
        1.0
    }
}

/// `z_{rho,kappa;c}(t,x) = <t+r>^rho <ct-r>^kappa`.
pub fn z_weight(rho: f64, kappa: f64, c: f64, p: SpacetimePoint) -> f64 {
    let r = p.r();
    jb(p.t + r).powf(rho) * jb(c * p.t - r).powf(kappa)
}

/// `W_{rho,kappa}(t,x) = <t+r>^rho (min{<r>, <t-r>})^kappa`.
pub fn w_weight(rho: f64, kappa: f64, p: SpacetimePoint) -> f64 {
    let r = p.r();
    jb(p.t + r).powf(rho) * jb(r).min(jb(p.t - r)).powf(kappa)
}

/// `w_rho(t,x) = <x>^{-1/2} <t-r>^{-rho} + <t+r>^{-1/2} <t-r>^{-1/2}`.
pub fn w_rho(rho: f64, p: SpacetimePoint) -> f64 {
    let r = p.r();
    let tr = jb(p.t - r);
    jb(r).powf(-0.5) * tr.powf(-rho) + jb(p.t + r).powf(-0.5) / tr.sqrt()
}

/// One sample of a spacetime field: derivative magnitudes `|f(t,x)|_k`
/// by order k, as far as the producer could supply them.
#[derive(Debug, Clone)]
pub struct FieldSample {
    pub t: f64,
    pub x: [f64; 2],
    /// magnitudes[k] = |f(t,x)|_k.
    pub magnitudes: Vec<f64>,
}

/// sup over samples with s <= horizon of `<x>^{1/2} W(s,x) |f(s,x)|_k`.
///
/// A lower bound on the true sup; monotone nondecreasing in the horizon.
pub fn weighted_sup_norm<W>(samples: &[FieldSample], weight: W, k: usize, horizon: f64) -> Result<f64>
where
    W: Fn(f64, [f64; 2]) -> f64,
{
    let mut sup = 0.0f64;
    for s in samples {
        if s.t > horizon {
            continue;
        }
        let mag = *s.magnitudes.get(k).ok_or(Error::DerivativeOrder {
            requested: k,
            available: s.magnitudes.len().saturating_sub(1),
        })?;
        sup = sup.max(jb2(s.x).sqrt() * weight(s.t, s.x) * mag);
    }
    Ok(sup)
}

/// Which pointwise weight inequality to certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightInequality {
    /// `w_rho <= C / W_{1/2,1/2}` for 1/2 <= rho <= 1.
    El1,
    /// `w_rho <= C <t>^{-rho}` for |x| <= 2.
    El2,
}

impl WeightInequality {
    pub fn id(&self) -> &'static str {
        match self {
            WeightInequality::El1 => "el1",
            WeightInequality::El2 => "el2",
        }
    }
}

/// Grid over (t, r) organized as scale = t + r (log spaced) and
/// fraction = r / (t + r) (linear). Scale 0 encodes the origin.
#[derive(Debug, Clone)]
pub struct TrGrid {
    pub scales: Vec<f64>,
    pub fractions: Vec<f64>,
}

impl TrGrid {
    /// Log-spaced 65 x 64 default covering t + r in [1e-2, hi].
    pub fn default_to(hi: f64) -> Self {
        let mut scales = vec![0.0];
        scales.extend(log_grid(1e-2, hi, 13));
        TrGrid {
            scales,
            fractions: lin_grid(0.0, 1.0, 64),
        }
    }

    pub fn single(t: f64, r: f64) -> Self {
        TrGrid {
            scales: vec![t + r],
            fractions: vec![if t + r > 0.0 { r / (t + r) } else { 0.0 }],
        }
    }

    pub fn spec(&self) -> String {
        format!(
            "tr({}x{};max={:.1e})",
            self.scales.len(),
            self.fractions.len(),
            self.scales.last().copied().unwrap_or(0.0)
        )
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.scales.iter().flat_map(move |&s| {
            self.fractions.iter().map(move |&q| {
                let r = s * q;
                let t = s - r;
                (t, r)
            })
        })
    }
}

/// Sweeps the pointwise inequality over the grid and returns the worst
/// observed constant. Requires 1/2 <= rho <= 1; el2 additionally skips
/// points with r > 2.
pub fn certify_weight_inequality(
    id: WeightInequality,
    rho: f64,
    grid: &TrGrid,
) -> Result<BoundCertificate> {
    if !(0.5..=1.0).contains(&rho) {
        return Err(Error::Domain(format!(
            "{} requires 1/2 <= rho <= 1, got {}",
            id.id(),
            rho
        )));
    }
    if grid.scales.is_empty() || grid.fractions.is_empty() {
        return Err(Error::EmptyGrid(id.id().into()));
    }
    let mut samples = Vec::new();
    let mut skipped = 0usize;
    for (t, r) in grid.points() {
        if id == WeightInequality::El2 && r > 2.0 {
            skipped += 1;
            continue;
        }
        let p = SpacetimePoint::radial(t, r);
        let ratio = match id {
            WeightInequality::El1 => w_rho(rho, p) * w_weight(0.5, 0.5, p),
            WeightInequality::El2 => w_rho(rho, p) * jb(t).powf(rho),
        };
        samples.push(RatioSample {
            scale: t + r,
            ratio,
            location: [t, r, rho, 0.0],
        });
    }
    if samples.is_empty() {
        return Err(Error::EmptyGrid(id.id().into()));
    }
    Ok(BoundCertificate::from_samples(
        id.id(),
        &format!("rho={rho}"),
        &grid.spec(),
        &samples,
        skipped,
        1.1,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn jb_values() {
        assert!((jb(0.0) - 1.0).abs() < EPS);
        assert!((jb(3f64.sqrt()) - 2.0).abs() < EPS);
        assert!((jb2([3.0, 4.0]) - 26f64.sqrt()).abs() < EPS);
    }

    #[test]
    fn bracket_plus_branches() {
        assert!((bracket_plus(1.0, 0.0).unwrap() - 1.0).abs() < EPS);
        assert!((bracket_plus(10.0, -2.0).unwrap() - 1.0).abs() < EPS);
        assert!((bracket_plus(std::f64::consts::E, 0.0).unwrap() - 2.0).abs() < EPS);
        assert!(bracket_plus(0.5, 1.0).is_err());
    }

    #[test]
    fn phi_at_origin() {
        let p = SpacetimePoint::new(0.0, [0.0, 0.0]);
        assert!((phi(-1.0, p) - 1.0).abs() < EPS);
        assert!((phi(0.0, p) - 1.0 / 3f64.ln()).abs() < EPS);
        assert!((phi(1.0, p) - 1.0).abs() < EPS);
    }

    #[test]
    fn phi_branch_collapse() {
        // nu < 1/2 collapses to <t-r>^nu, nu > 1/2 to <t-r>^{1/2},
        // nu = 1/2 gains a 1/(1+log) factor.
        let p = SpacetimePoint::radial(7.0, 2.0);
        let b = jb(5.0);
        assert!((phi(0.25, p) - b.powf(0.25)).abs() < 1e-12);
        assert!((phi(2.0, p) - b.sqrt()).abs() < 1e-12);
        assert!((phi(0.5, p) - b.sqrt() / (1.0 + b.ln())).abs() < 1e-12);
    }

    #[test]
    fn psi_values() {
        assert!((psi_kappa(1.0, 0.0) - 2f64.ln()).abs() < EPS);
        assert!((psi_kappa(2.0, 100.0) - 1.0).abs() < EPS);
        assert!((psi_kappa(1.0, std::f64::consts::E - 2.0) - 1.0).abs() < EPS);
    }

    #[test]
    fn weight_values_at_named_points() {
        let origin = SpacetimePoint::new(0.0, [0.0, 0.0]);
        assert!((z_weight(1.0, 1.0, 0.0, origin) - 1.0).abs() < EPS);
        let p = SpacetimePoint::radial(3.0, 1.0);
        assert!((w_weight(0.0, 1.0, p) - 2f64.sqrt()).abs() < EPS);
        assert!((w_rho(0.5, origin) - 2.0).abs() < EPS);
    }

    #[test]
    fn weighted_sup_of_weight_reciprocal_is_one() {
        // f = <x>^{-1/2} W^{-1} sampled: the weighted sup is exactly 1 at
        // every sample.
        let weight = |t: f64, x: [f64; 2]| w_weight(1.0, 1.0, SpacetimePoint { t, x });
        let mut samples = Vec::new();
        for i in 0..20 {
            for j in 0..10 {
                let t = i as f64 * 0.7;
                let x = [j as f64 * 0.9 - 4.0, 0.3 * j as f64];
                let v = 1.0 / (jb2(x).sqrt() * weight(t, x));
                samples.push(FieldSample {
                    t,
                    x,
                    magnitudes: vec![v],
                });
            }
        }
        let sup = weighted_sup_norm(&samples, weight, 0, 14.0).unwrap();
        assert!((sup - 1.0).abs() < 1e-12);
        // zero field and degree-1 homogeneity
        let zeros: Vec<_> = samples
            .iter()
            .map(|s| FieldSample {
                magnitudes: vec![0.0],
                ..s.clone()
            })
            .collect();
        assert_eq!(weighted_sup_norm(&zeros, weight, 0, 14.0).unwrap(), 0.0);
        let doubled: Vec<_> = samples
            .iter()
            .map(|s| FieldSample {
                magnitudes: vec![2.0 * s.magnitudes[0]],
                ..s.clone()
            })
            .collect();
        let sup2 = weighted_sup_norm(&doubled, weight, 0, 14.0).unwrap();
        assert!((sup2 - 2.0 * sup).abs() < 1e-12);
    }

    #[test]
    fn weighted_sup_rejects_missing_order() {
        let samples = vec![FieldSample {
            t: 0.0,
            x: [0.0, 0.0],
            magnitudes: vec![1.0],
        }];
        assert!(weighted_sup_norm(&samples, |_, _| 1.0, 1, 1.0).is_err());
    }

    #[test]
    fn el_certificates_at_origin() {
        let g = TrGrid::single(0.0, 0.0);
        let c1 = certify_weight_inequality(WeightInequality::El1, 0.5, &g).unwrap();
        assert!((c1.max_ratio - 2.0).abs() < 1e-12);
        let c2 = certify_weight_inequality(WeightInequality::El2, 1.0, &g).unwrap();
        assert!((c2.max_ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn el_certificates_stabilize() {
        let g = TrGrid::default_to(1e3);
        for rho in [0.5, 0.75, 1.0] {
            for id in [WeightInequality::El1, WeightInequality::El2] {
                let c = certify_weight_inequality(id, rho, &g).unwrap();
                assert!(
                    c.stabilized,
                    "{} rho={rho} not stabilized: {:?}",
                    c.id, c.stabilization_ratio
                );
                assert!(c.max_ratio.is_finite() && c.max_ratio >= 2.0 - 1e-12);
            }
        }
    }

    #[test]
    fn rho_out_of_range_rejected() {
        let g = TrGrid::single(1.0, 1.0);
        assert!(certify_weight_inequality(WeightInequality::El1, 0.3, &g).is_err());
    }

    proptest! {
        #[test]
        fn phi_positive_branch_is_lipschitz_nearby(
            nu in 0.05f64..2.0,
            t in 0.0f64..50.0,
            r in 0.0f64..50.0,
            dt in -1e-4f64..1e-4,
            dr in -1e-4f64..1e-4,
        ) {
            let p = SpacetimePoint::radial(t, r);
            let q = SpacetimePoint::radial((t + dt).max(0.0), (r + dr).max(0.0));
            let d = (phi(nu, p) - phi(nu, q)).abs();
            let dist = ((p.t - q.t).powi(2) + (p.r() - q.r()).powi(2)).sqrt();
            // |d/db <b>^a| <= |a| for b-arguments, <.> has slope <= 1.
            prop_assert!(d <= 4.0 * (nu.abs() + 1.0) * dist + 1e-14);
        }

        #[test]
        fn phi_saturates_above_half(
            nu in 0.5001f64..5.0,
            t in 0.0f64..100.0,
            r in 0.0f64..100.0,
        ) {
            let p = SpacetimePoint::radial(t, r);
            prop_assert!((phi(nu, p) - jb(t - r).sqrt()).abs() < 1e-12);
        }

        #[test]
        fn w_rho_dominates_second_summand(
            rho in 0.1f64..1.0,
            t in 0.0f64..200.0,
            r in 0.0f64..200.0,
        ) {
            let p = SpacetimePoint::radial(t, r);
            let second = jb(t + r).powf(-0.5) * jb(t - r).powf(-0.5);
            prop_assert!(w_rho(rho, p) >= second);
        }
    }
}
