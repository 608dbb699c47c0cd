use rand::Rng;
use rand_distr::StandardNormal;

use super::{run_batches, ExpirySetup, McConfig, McEstimate, OracleError};
use crate::curves::{Curve, PseudoCurve};
use crate::mhw::{MhwParams, Side, SwaptionSpec};

/// Expiry curves implied by one state draw `ξ`.
struct ExpiryCurves {
    fixed: Vec<f64>,
    float: Vec<f64>,
    betas: Vec<f64>,
}

impl ExpiryCurves {
    fn new(s: &ExpirySetup) -> Self {
        Self { fixed: vec![0.0; s.fixed.len()], float: vec![0.0; s.float_nodes.len()], betas: vec![0.0; s.spreads.len()] }
    }

    /// Lognormal maps of the forward discounts and spread-weighted discounts.
    fn fill(&mut self, s: &ExpirySetup, xi: f64) {
        let z2 = s.zeta * s.zeta;
        let map = |b0: f64, vol: f64| b0 * (-vol * xi - 0.5 * vol * vol * z2).exp();
        for (out, &(_, b0, vol)) in self.fixed.iter_mut().zip(&s.fixed) {
            *out = map(b0, vol);
        }
        for (out, &(b0, vol)) in self.float.iter_mut().zip(&s.float_nodes) {
            *out = map(b0, vol);
        }
        for (i, out) in self.betas.iter_mut().enumerate() {
            let nu = s.float_v[i] - s.gamma * s.float_v[i + 1];
            let weighted = map(s.spreads[i] * s.float_nodes[i].0, nu);
            *out = weighted / self.float[i];
        }
    }

    fn payoff(&self, s: &ExpirySetup, side: Side) -> f64 {
        let rec = s.receiver_payoff(&self.fixed, &self.float, &self.betas);
        match side {
            Side::Receiver => rec.max(0.0),
            Side::Payer => (-rec).max(0.0),
        }
    }
}

/// Prices `spec` by sampling the expiry state `ξ ~ N(0, ζ²)` directly.
pub fn mc_price_exact(
    p: &MhwParams<f64>,
    disc: &Curve<f64>,
    pseudo: &PseudoCurve<f64>,
    spec: &SwaptionSpec<f64>,
    cfg: &McConfig,
) -> Result<McEstimate, OracleError> {
    cfg.validate()?;
    let setup = ExpirySetup::new(p, disc, pseudo, spec)?;
    let side = spec.side();
    let m = run_batches(cfg, 1, |rng, count, acc| {
        let mut curves = ExpiryCurves::new(&setup);
        for _ in 0..count {
            let z: f64 = rng.sample(StandardNormal);
            curves.fill(&setup, setup.zeta * z);
            let mut v = curves.payoff(&setup, side);
            if cfg.antithetic {
                curves.fill(&setup, -setup.zeta * z);
                v = 0.5 * (v + curves.payoff(&setup, side));
            }
            acc.push(&[v]);
        }
    });
    let (mean, se) = m.mean_se(0);
    Ok(McEstimate {
        price: setup.expiry_discount * mean,
        std_error: setup.expiry_discount * se,
        draws: cfg.draws,
        seed: cfg.seed,
    })
}

/// Sample means and standard errors of `e^{−vol ξ − vol² ζ²/2}` for each
/// vol, with `ξ ~ N(0, ζ²)` drawn as in [`mc_price_exact`] (no antithetics).
pub fn lognormal_factor_means(zeta: f64, vols: &[f64], cfg: &McConfig) -> Result<Vec<(f64, f64)>, OracleError> {
    cfg.validate()?;
    let m = run_batches(cfg, vols.len(), |rng, count, acc| {
        let mut row = vec![0.0; vols.len()];
        for _ in 0..count {
            let xi = zeta * rng.sample::<f64, _>(StandardNormal);
            for (r, v) in row.iter_mut().zip(vols) {
                *r = (-v * xi - 0.5 * v * v * zeta * zeta).exp();
            }
            acc.push(&row);
        }
    });
    Ok((0..vols.len()).map(|i| m.mean_se(i)).collect())
}
