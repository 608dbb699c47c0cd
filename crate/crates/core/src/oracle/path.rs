use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{integrated_variance, run_batches, ExpirySetup, McConfig, McEstimate, OracleError};
use crate::curves::{Curve, PseudoCurve};
use crate::mhw::{MhwParams, Side, SwaptionSpec};

/// Log-state of the forward curves seen from expiry, stepped from `t0` to `t_α`.
struct PathState {
    ln_fixed: Vec<f64>,
    ln_float: Vec<f64>,
    ln_beta: Vec<f64>,
}

impl PathState {
    fn start(s: &ExpirySetup) -> Self {
        Self {
            ln_fixed: s.fixed.iter().map(|f| f.1.ln()).collect(),
            ln_float: s.float_nodes.iter().map(|f| f.0.ln()).collect(),
            ln_beta: s.spreads.iter().map(|b| b.ln()).collect(),
        }
    }

    /// One step under the `t_α`-forward measure. `dz` is the increment of
    /// `∫ e^{−a(t_α−u)} dW_u` over the step and `q` its variance; every
    /// instantaneous vol is the expiry vol times `e^{−a(t_α−u)}`.
    fn step(&mut self, s: &ExpirySetup, dz: f64, q: f64) {
        for (x, f) in self.ln_fixed.iter_mut().zip(&s.fixed) {
            *x += -f.2 * dz - 0.5 * f.2 * f.2 * q;
        }
        for (x, f) in self.ln_float.iter_mut().zip(&s.float_nodes) {
            *x += -f.1 * dz - 0.5 * f.1 * f.1 * q;
        }
        // β_ι has vol e = γ(v_{ι+1} − v_ι) and, being a martingale under the
        // t'_{ι+1}-forward measure, drift e·ς_ι·q under the t_α-forward one.
        for (i, x) in self.ln_beta.iter_mut().enumerate() {
            let e = s.gamma * (s.float_v[i + 1] - s.float_v[i]);
            let vs = s.float_nodes[i].1;
            *x += e * (dz + vs * q) - 0.5 * e * e * q;
        }
    }
}

fn step_variances(s: &ExpirySetup, steps: usize) -> Vec<f64> {
    let dt = s.tau / steps as f64;
    (0..steps)
        .map(|k| {
            let from = s.tau - k as f64 * dt;
            let to = if k + 1 == steps { 0.0 } else { s.tau - (k + 1) as f64 * dt };
            integrated_variance(s.a, from, to)
        })
        .collect()
}

fn simulate<F>(s: &ExpirySetup, cfg: &McConfig, dim: usize, observe: F) -> super::Moments
where
    F: Fn(&PathState, &mut [f64]) + Sync,
{
    let qs = step_variances(s, cfg.steps);
    run_batches(cfg, dim, |rng, count, acc| {
        let mut zs = vec![0.0; qs.len()];
        let mut obs = vec![0.0; dim];
        let mut tmp = vec![0.0; dim];
        for _ in 0..count {
            for z in zs.iter_mut() {
                *z = rng.sample(StandardNormal);
            }
            let mut st = PathState::start(s);
            for (z, q) in zs.iter().zip(&qs) {
                st.step(s, z * q.sqrt(), *q);
            }
            observe(&st, &mut obs);
            if cfg.antithetic {
                let mut st = PathState::start(s);
                for (z, q) in zs.iter().zip(&qs) {
                    st.step(s, -z * q.sqrt(), *q);
                }
                observe(&st, &mut tmp);
                for (o, t) in obs.iter_mut().zip(&tmp) {
                    *o = 0.5 * (*o + t);
                }
            }
            acc.push(&obs);
        }
    })
}

/// Prices `spec` by log-Euler simulation of the forward discounts and spreads
/// from `t0` to expiry in `cfg.steps` steps with exact integrated variance.
pub fn mc_price_path(
    p: &MhwParams<f64>,
    disc: &Curve<f64>,
    pseudo: &PseudoCurve<f64>,
    spec: &SwaptionSpec<f64>,
    cfg: &McConfig,
) -> Result<McEstimate, OracleError> {
    cfg.validate()?;
    let s = ExpirySetup::new(p, disc, pseudo, spec)?;
    let side = spec.side();
    let m = simulate(&s, cfg, 1, |st, out| {
        let bf: Vec<f64> = st.ln_fixed.iter().map(|x| x.exp()).collect();
        let bl: Vec<f64> = st.ln_float.iter().map(|x| x.exp()).collect();
        let betas: Vec<f64> = st.ln_beta.iter().map(|x| x.exp()).collect();
        let rec = s.receiver_payoff(&bf, &bl, &betas);
        out[0] = match side {
            Side::Receiver => rec.max(0.0),
            Side::Payer => (-rec).max(0.0),
        };
    });
    let (mean, se) = m.mean_se(0);
    Ok(McEstimate { price: s.expiry_discount * mean, std_error: s.expiry_discount * se, draws: cfg.draws, seed: cfg.seed })
}

/// Sample mean of a simulated expiry quantity against its `t0` value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartingaleStat {
    pub label: String,
    pub t0_value: f64,
    pub mean: f64,
    pub std_error: f64,
}

impl MartingaleStat {
    pub fn within(&self, k: f64) -> bool {
        (self.mean - self.t0_value).abs() <= k * self.std_error
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartingaleReport {
    /// `B(t_α; t_α, t_i)` against `B(t0; t_α, t_i)` on the floating and fixed dates.
    pub discounts: Vec<MartingaleStat>,
    /// `β_ι(t_α) B(t_α; t_α, t'_ι) / B(t0; t_α, t'_ι)` against `β_ι(t0)`.
    pub spreads: Vec<MartingaleStat>,
}

impl MartingaleReport {
    pub fn all_within(&self, k: f64) -> bool {
        self.discounts.iter().chain(&self.spreads).all(|s| s.within(k))
    }
}

/// Martingale test of the path simulator on the dates of `spec`.
pub fn martingale_check(
    p: &MhwParams<f64>,
    disc: &Curve<f64>,
    pseudo: &PseudoCurve<f64>,
    spec: &SwaptionSpec<f64>,
    cfg: &McConfig,
) -> Result<MartingaleReport, OracleError> {
    cfg.validate()?;
    let s = ExpirySetup::new(p, disc, pseudo, spec)?;
    let (nf, nl, nb) = (s.fixed.len(), s.float_nodes.len(), s.spreads.len());
    let m = simulate(&s, cfg, nf + nl + nb, |st, out| {
        for (o, x) in out[..nf].iter_mut().zip(&st.ln_fixed) {
            *o = x.exp();
        }
        for (o, x) in out[nf..nf + nl].iter_mut().zip(&st.ln_float) {
            *o = x.exp();
        }
        for i in 0..nb {
            out[nf + nl + i] = (st.ln_beta[i] + st.ln_float[i]).exp() / s.float_nodes[i].0;
        }
    });
    let stat = |label: String, t0_value: f64, idx: usize| {
        let (mean, std_error) = m.mean_se(idx);
        MartingaleStat { label, t0_value, mean, std_error }
    };
    let fixed_dates = spec.fixed().payment_dates();
    let float_dates: Vec<_> = spec.floating().all_dates().collect();
    let mut discounts: Vec<MartingaleStat> =
        (0..nf).map(|j| stat(format!("B fixed {}", fixed_dates[j]), s.fixed[j].1, j)).collect();
    discounts.extend((0..nl).map(|i| stat(format!("B float {}", float_dates[i]), s.float_nodes[i].0, nf + i)));
    let spreads = (0..nb)
        .map(|i| stat(format!("beta·B {}", float_dates[i]), s.spreads[i], nf + nl + i))
        .collect();
    Ok(MartingaleReport { discounts, spreads })
}
