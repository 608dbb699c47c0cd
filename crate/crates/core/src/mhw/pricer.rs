use serde::Serialize;

use super::params::MhwParams;
use super::payoff::{find_xi_star, payoff_terms, ExpTerm, PayoffTerms};
use super::spec::{Side, SwaptionSpec};
use super::ModelError;
use crate::curves::{Curve, PseudoCurve};
use crate::scalar::{norm_cdf, Real};

/// How the exercise region was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExerciseBoundary<T> {
    /// Interior root `ξ*`: the receiver is exercised for `ξ < ξ*`.
    Root(T),
    /// Root beyond the search cap on the right: the receiver is exercised almost surely.
    AlwaysReceiver,
    /// Root beyond the cap on the left: the payer is exercised almost surely.
    AlwaysPayer,
    /// No state dependence; the price is the discounted intrinsic value.
    Deterministic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwaptionPrice<T> {
    pub price: T,
    pub boundary: ExerciseBoundary<T>,
    /// `B(t0, t_α)`.
    pub expiry_discount: T,
    pub terms: PayoffTerms<T>,
}

/// Closed-form price of the swaption in `spec` per unit notional.
pub fn price_swaption<T: Real>(
    p: &MhwParams<T>,
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    spec: &SwaptionSpec<T>,
) -> Result<T, ModelError> {
    Ok(price_swaption_detailed(p, disc, pseudo, spec)?.price)
}

pub fn price_swaption_detailed<T: Real>(
    p: &MhwParams<T>,
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    spec: &SwaptionSpec<T>,
) -> Result<SwaptionPrice<T>, ModelError> {
    let terms = payoff_terms(p, disc, pseudo, spec)?;
    let b = disc.discount(spec.expiry())?;
    let receiver_fwd = terms.forward_intrinsic();
    let side = spec.side();

    let boundary = if terms.is_deterministic() {
        ExerciseBoundary::Deterministic
    } else {
        match find_xi_star(&terms) {
            Ok(xi) => ExerciseBoundary::Root(xi),
            Err(ModelError::RootBeyondBracket { above: true, .. }) => ExerciseBoundary::AlwaysReceiver,
            Err(ModelError::RootBeyondBracket { above: false, .. }) => ExerciseBoundary::AlwaysPayer,
            Err(e) => return Err(e),
        }
    };

    let fwd = match (boundary, side) {
        (ExerciseBoundary::Deterministic, Side::Receiver) => receiver_fwd.max(T::zero()),
        (ExerciseBoundary::Deterministic, Side::Payer) => (-receiver_fwd).max(T::zero()),
        (ExerciseBoundary::AlwaysReceiver, Side::Receiver) => receiver_fwd,
        (ExerciseBoundary::AlwaysReceiver, Side::Payer) => T::zero(),
        (ExerciseBoundary::AlwaysPayer, Side::Receiver) => T::zero(),
        (ExerciseBoundary::AlwaysPayer, Side::Payer) => -receiver_fwd,
        (ExerciseBoundary::Root(xi), Side::Receiver) => exercise_sum(&terms, xi, T::one()),
        (ExerciseBoundary::Root(xi), Side::Payer) => exercise_sum(&terms, xi, -T::one()),
    };
    Ok(SwaptionPrice { price: b * fwd.max(T::zero()), boundary, expiry_discount: b, terms })
}

/// `Σ ± w N(s (ξ*/ζ + ζ vol))`, positive terms with `+` for the receiver
/// (`s = 1`) and the mirrored payer expectation for `s = −1`.
fn exercise_sum<T: Real>(terms: &PayoffTerms<T>, xi: T, s: T) -> T {
    let z = terms.zeta;
    let d = |t: &ExpTerm<T>| t.weight * norm_cdf(s * (xi / z + z * t.vol));
    let pos: T = terms.fixed.iter().chain(terms.floating.iter()).map(d).sum();
    let neg: T = terms.spread.iter().map(d).sum();
    s * (pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{bpv, floating_leg_value};
    use crate::temporal::{Date, Tenor};
    use crate::curves::SwapConventions;

    fn setup(gamma: f64, sigma: f64) -> (MhwParams<f64>, Curve<f64>, PseudoCurve<f64>, SwaptionSpec<f64>) {
        let reference = Date::from_ymd_opt(2015, 9, 14).unwrap();
        let disc = Curve::flat(reference, 0.01);
        let pseudo = PseudoCurve::from_discount(Curve::flat(reference, 0.013), Tenor::months(6));
        let spec = SwaptionSpec::forward_starting(
            reference,
            Tenor::years(2),
            Tenor::years(5),
            0.012,
            Side::Receiver,
            &SwapConventions::default(),
        )
        .unwrap();
        (MhwParams::new(0.1, sigma, gamma).unwrap(), disc, pseudo, spec)
    }

    #[test]
    fn zero_vol_gives_discounted_intrinsic() {
        let (p, disc, pseudo, spec) = setup(0.2, 0.0);
        let b = disc.discount(spec.expiry()).unwrap();
        let annuity = bpv(&disc, spec.fixed()).unwrap();
        let float = floating_leg_value(&disc, &pseudo, spec.floating()).unwrap();
        for k in [0.0, 0.01, 0.02, 0.03] {
            let rec = price_swaption(&p, &disc, &pseudo, &spec.with_strike(k)).unwrap();
            let pay = price_swaption(&p, &disc, &pseudo, &spec.with_strike(k).with_side(Side::Payer)).unwrap();
            assert!((rec - b * (k * annuity - float).max(0.0)).abs() < 1e-14, "{rec} {}", b * (k * annuity - float).max(0.0));
            assert!((pay - b * (float - k * annuity).max(0.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn parity_against_forward_swap() {
        let (p, disc, pseudo, spec) = setup(0.3, 0.01);
        let b = disc.discount(spec.expiry()).unwrap();
        let annuity = bpv(&disc, spec.fixed()).unwrap();
        let float = floating_leg_value(&disc, &pseudo, spec.floating()).unwrap();
        let rec = price_swaption(&p, &disc, &pseudo, &spec).unwrap();
        let pay = price_swaption(&p, &disc, &pseudo, &spec.with_side(Side::Payer)).unwrap();
        assert!((rec - pay - b * (spec.strike() * annuity - float)).abs() < 1e-14);
    }

    #[test]
    fn regimes_around_crossover_gamma_price_smoothly() {
        let (p, disc, pseudo, spec) = setup(0.0, 0.01);
        let g = super::super::extended_vols(&p, &spec).unwrap().max_crossover_gamma();
        let below = price_swaption(&MhwParams { gamma: g - 1e-7, ..p }, &disc, &pseudo, &spec).unwrap();
        let above = price_swaption(&MhwParams { gamma: g + 1e-7, ..p }, &disc, &pseudo, &spec).unwrap();
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn far_out_of_the_money_is_tiny_and_deep_in_is_intrinsic() {
        let (p, disc, pseudo, spec) = setup(0.0, 0.005);
        let otm = price_swaption(&p, &disc, &pseudo, &spec.with_strike(-0.2)).unwrap();
        assert!(otm.abs() < 1e-14);
        let itm = spec.with_strike(0.5);
        let b = disc.discount(spec.expiry()).unwrap();
        let intrinsic = 0.5 * bpv(&disc, itm.fixed()).unwrap() - floating_leg_value(&disc, &pseudo, itm.floating()).unwrap();
        let px = price_swaption(&p, &disc, &pseudo, &itm).unwrap();
        assert!((px - b * intrinsic).abs() < 1e-12);
    }
}
