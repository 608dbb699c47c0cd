//! Classic single-curve Jamshidian decomposition for a one-factor Hull-White
//! model: a receiver swaption is a call on the coupon bond `Σ c_j P(t_α, t_j)`
//! struck at 1, split into zero-coupon bond calls at the critical short rate.

use mhw_core::curves::Curve;
use mhw_core::temporal::{Date, DayCount};

fn years(from: Date, to: Date) -> f64 {
    (to - from).num_days() as f64 / 365.0
}

/// `B(a, τ) = (1 − e^{−aτ})/a`.
fn b_factor(a: f64, tau: f64) -> f64 {
    if a == 0.0 {
        tau
    } else {
        (1.0 - (-a * tau).exp()) / a
    }
}

/// Receiver swaption `(expiry, [(pay date, coupon c_j)])` in the Hull-White
/// model with mean reversion `a` and short-rate vol `sigma`.
pub fn receiver_swaption(curve: &Curve<f64>, a: f64, sigma: f64, expiry: Date, flows: &[(Date, f64)]) -> f64 {
    let t0 = curve.reference_date();
    let p = |d: Date| curve.discount(d).unwrap();
    let p_exp = p(expiry);
    let var_x = if a == 0.0 {
        sigma * sigma * years(t0, expiry)
    } else {
        sigma * sigma * (1.0 - (-2.0 * a * years(t0, expiry)).exp()) / (2.0 * a)
    };
    // Bond price at expiry given the Gaussian factor x (zero mean under the
    // expiry-forward measure): P(t_α,T|x) = P(t0,T)/P(t0,t_α)·exp(−Bx − B²Var/2).
    let bond = |d: Date, x: f64| {
        let b = b_factor(a, years(expiry, d));
        p(d) / p_exp * (-b * x - 0.5 * b * b * var_x).exp()
    };
    let coupon_bond = |x: f64| flows.iter().map(|&(d, c)| c * bond(d, x)).sum::<f64>() - 1.0;
    // Coupon bond is decreasing in x: bisection for the critical x*.
    let (mut lo, mut hi) = (-1.0, 1.0);
    while coupon_bond(lo) < 0.0 {
        lo *= 2.0;
    }
    while coupon_bond(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if coupon_bond(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x_star = 0.5 * (lo + hi);
    flows
        .iter()
        .map(|&(d, c)| {
            let strike = bond(d, x_star);
            let sigma_p = var_x.sqrt() * b_factor(a, years(expiry, d));
            let h = (p(d) / (p_exp * strike)).ln() / sigma_p + 0.5 * sigma_p;
            c * (p(d) * norm_cdf(h) - strike * p_exp * norm_cdf(h - sigma_p))
        })
        .sum()
}

/// Coupons `c_j = δ_j K` plus the notional on the last date.
pub fn coupons(start: Date, dates: &[Date], dc: DayCount, strike: f64) -> Vec<(Date, f64)> {
    let mut prev = start;
    let n = dates.len();
    dates
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let delta: f64 = dc.year_fraction(prev, d).unwrap();
            prev = d;
            (d, delta * strike + if i + 1 == n { 1.0 } else { 0.0 })
        })
        .collect()
}

/// Hart's double-precision rational approximation (as laid out by West).
pub fn norm_cdf(x: f64) -> f64 {
    let z = x.abs();
    let tail = if z > 37.0 {
        0.0
    } else {
        let e = (-0.5 * z * z).exp();
        if z < 7.071_067_811_865_47 {
            let num = [0.035_262_496_599_891_1, 0.700_383_064_443_688, 6.373_962_203_531_65, 33.912_866_078_383, 112.079_291_497_871, 221.213_596_169_931, 220.206_867_912_376]
                .iter()
                .fold(0.0, |acc, c| acc * z + c);
            let den = [0.088_388_347_648_318_4, 1.755_667_163_182_64, 16.064_177_579_207, 86.780_732_202_946_1, 296.564_248_779_674, 637.333_633_378_831, 793.826_512_519_948, 440.413_735_824_752]
                .iter()
                .fold(0.0, |acc, c| acc * z + c);
            e * num / den
        } else {
            let b = z + 1.0 / (z + 2.0 / (z + 3.0 / (z + 4.0 / (z + 0.65))));
            e / b / 2.506_628_274_631
        }
    };
    if x > 0.0 { 1.0 - tail } else { tail }
}
