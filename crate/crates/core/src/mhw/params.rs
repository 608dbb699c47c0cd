use serde::{Deserialize, Serialize};

use super::spec::SwaptionSpec;
use super::ModelError;
use crate::curves::act365;
use crate::scalar::Real;

/// The three model parameters: mean reversion `a`, volatility level
/// `sigma` and the spread share `gamma` of the pseudo-discount volatility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MhwParams<T> {
    pub a: T,
    pub sigma: T,
    pub gamma: T,
}

impl<T: Real> MhwParams<T> {
    pub fn new(a: T, sigma: T, gamma: T) -> Result<Self, ModelError> {
        let p = Self { a, sigma, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let ok = self.a.is_finite()
            && self.sigma.is_finite()
            && self.a >= T::zero()
            && self.sigma >= T::zero()
            && self.gamma >= T::zero()
            && self.gamma <= T::one();
        if ok {
            Ok(())
        } else {
            Err(ModelError::InvalidParams(format!(
                "need a >= 0, sigma >= 0, 0 <= gamma <= 1; got a = {}, sigma = {}, gamma = {}",
                self.a, self.sigma, self.gamma
            )))
        }
    }

    /// `sigma / a`, the volatility scale used by the calibrator.
    pub fn sigma_over_a(&self) -> T {
        self.sigma / self.a
    }

    /// Volatility `v` over a horizon `tau = T - t >= 0`.
    pub fn vol_over(&self, tau: T) -> T {
        if self.a == T::zero() {
            self.sigma * tau
        } else {
            -self.sigma * (-self.a * tau).exp_m1() / self.a
        }
    }

    /// Variance of the Gaussian state `ξ` after `tau` years.
    pub fn state_variance(&self, tau: T) -> T {
        if self.a == T::zero() {
            tau
        } else {
            let two_a = T::lit(2.0) * self.a;
            -(-two_a * tau).exp_m1() / two_a
        }
    }
}

/// `v(t, T) = σ (1 − e^{−a(T−t)}) / a`, or `σ (T − t)` when `a = 0`.
pub fn vol_v<T: Real>(p: &MhwParams<T>, t: T, maturity: T) -> Result<T, ModelError> {
    if t > maturity {
        return Err(ModelError::Domain(format!("v(t, T) needs t <= T, got t = {t}, T = {maturity}")));
    }
    Ok(p.vol_over(maturity - t))
}

/// Standard deviation `ζ` of the state variable at expiry.
pub fn zeta<T: Real>(p: &MhwParams<T>, t0: T, t_alpha: T) -> Result<T, ModelError> {
    if t0 > t_alpha {
        return Err(ModelError::Domain(format!("expiry {t_alpha} precedes value time {t0}")));
    }
    Ok(p.state_variance(t_alpha - t0).sqrt())
}

/// Volatilities of the swaption's underlying flows seen from expiry.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedVols<T> {
    /// `ς_{αj} = (1 − γ) v(t_α, t_j)` for each fixed payment date.
    pub fixed: Vec<T>,
    /// `v(t_α, t'_ι)` for every floating date including the start.
    pub floating_v: Vec<T>,
    /// `ς_{α'ι} = (1 − γ) v(t_α, t'_ι)`, same indexing as `floating_v`.
    pub floating: Vec<T>,
    /// `ν_{α'ι} = v_{α'ι} − γ v_{α',ι+1}`, one per floating period.
    pub nu: Vec<T>,
}

impl<T: Real> ExtendedVols<T> {
    /// `γ̃_ι = v_{α'ι} / v_{α',ι+1}`: the spread share at which `ν_{α'ι}` vanishes.
    pub fn crossover_gammas(&self) -> Vec<T> {
        self.floating_v.windows(2).map(|w| if w[1] > T::zero() { w[0] / w[1] } else { T::zero() }).collect()
    }

    /// `max_ι γ̃_ι`, the boundary between the two non-degenerate regimes of f.
    pub fn max_crossover_gamma(&self) -> T {
        self.crossover_gammas().into_iter().fold(T::zero(), T::max)
    }
}

pub fn extended_vols<T: Real>(p: &MhwParams<T>, spec: &SwaptionSpec<T>) -> Result<ExtendedVols<T>, ModelError> {
    p.validate()?;
    let t_alpha = spec.expiry();
    let one_minus_gamma = T::one() - p.gamma;
    let fixed = spec
        .fixed()
        .payment_dates()
        .iter()
        .map(|&d| one_minus_gamma * p.vol_over(act365(t_alpha, d)))
        .collect();
    let floating_v: Vec<T> = spec.floating().all_dates().map(|d| p.vol_over(act365(t_alpha, d))).collect();
    let floating = floating_v.iter().map(|&v| one_minus_gamma * v).collect();
    let nu = floating_v.windows(2).map(|w| w[0] - p.gamma * w[1]).collect();
    Ok(ExtendedVols { fixed, floating_v, floating, nu })
}
