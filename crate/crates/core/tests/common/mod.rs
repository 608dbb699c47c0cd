#![allow(dead_code)]

use std::path::PathBuf;

use mhw_core::curves::{bpv, swap_rate, BootstrapConventions, Curve, PseudoCurve, SwapConventions};
use mhw_core::mhw::{eval_f, extended_vols, payoff_terms, MhwParams, Side, SwaptionSpec};
use mhw_core::snapshot::MarketSnapshot;
use mhw_core::temporal::{Date, Tenor};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn value_date() -> Date {
    Date::from_ymd_opt(2015, 9, 10).unwrap()
}

pub fn snapshot() -> MarketSnapshot {
    MarketSnapshot::load(data_dir(), value_date(), BootstrapConventions::default()).unwrap()
}

/// Parameters reported for the 10 September 2015 calibration.
pub fn reported_params() -> MhwParams<f64> {
    MhwParams::new(0.1331, 0.0127, 0.0006).unwrap()
}

pub fn ymd(y: i32, m: u32, d: u32) -> Date {
    Date::from_ymd_opt(y, m, d).unwrap()
}

/// Piecewise-flat-forward curve with a few random pillars.
pub fn random_curve<R: Rng>(rng: &mut R, t0: Date, level: f64, spread: f64) -> Curve<f64> {
    let mut pillars = Vec::new();
    let mut dfs = Vec::new();
    let mut log_df = 0.0;
    let mut prev = 0.0;
    for years in [1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 15.0, 25.0] {
        let fwd = level + spread * (rng.random::<f64>() - 0.5);
        log_df -= fwd * (years - prev);
        prev = years;
        pillars.push(t0 + chrono::Duration::days((years * 365.0) as i64));
        dfs.push(log_df.exp());
    }
    Curve::new(t0, pillars, dfs).unwrap()
}

/// Random dual-curve market, swaption and parameters; `gamma` overrides the draw.
pub struct RandomCase {
    pub disc: Curve<f64>,
    pub pseudo: PseudoCurve<f64>,
    pub spec: SwaptionSpec<f64>,
    pub params: MhwParams<f64>,
}

pub fn random_case<R: Rng>(rng: &mut R, gamma: Option<f64>) -> RandomCase {
    let t0 = ymd(2015, 9, 14);
    let level = rng.random_range(-0.005..0.03);
    let disc = random_curve(rng, t0, level, 0.01);
    let basis = rng.random_range(0.0..0.008);
    let pseudo = PseudoCurve::from_discount(random_curve(rng, t0, level + basis, 0.01), Tenor::months(6));
    let expiry = rng.random_range(1..=10);
    let tenor = rng.random_range(1..=10);
    let side = if rng.random::<bool>() { Side::Receiver } else { Side::Payer };
    let spec = SwaptionSpec::forward_starting(t0, Tenor::years(expiry), Tenor::years(tenor), 0.0, side, &SwapConventions::default()).unwrap();
    let atm = mhw_core::curves::swap_rate(&disc, &pseudo, spec.fixed(), spec.floating()).unwrap();
    let strike = (atm + rng.random_range(-0.02..0.02)).max(-0.01);
    let params = MhwParams::new(
        rng.random_range(0.0..0.5),
        rng.random_range(0.001..0.03),
        gamma.unwrap_or_else(|| rng.random_range(0.0..=1.0)),
    )
    .unwrap();
    RandomCase { disc, pseudo, spec: spec.with_strike(strike), params }
}


/// Position of γ relative to the largest crossover value γ̃.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaRegime {
    Zero,
    BelowCrossover,
    AboveCrossover,
}

impl GammaRegime {
    pub const ALL: [GammaRegime; 3] = [GammaRegime::Zero, GammaRegime::BelowCrossover, GammaRegime::AboveCrossover];
}

/// A case satisfying the root-uniqueness hypotheses: positive strike,
/// spreads above one on every period, and a strike placed so that the
/// exercise boundary sits within `±m ζ` of zero.
pub fn admissible_case<R: Rng>(rng: &mut R, regime: GammaRegime, m: f64) -> RandomCase {
    let t0 = ymd(2015, 9, 14);
    let level = rng.random_range(0.005..0.04);
    let disc = random_curve(rng, t0, level, 0.01);
    let basis = rng.random_range(0.0005..0.01);
    let pseudo_dfs = disc
        .pillars()
        .iter()
        .zip(disc.discount_factors())
        .map(|(&d, &df)| df * (-basis * (d - t0).num_days() as f64 / 365.0).exp())
        .collect();
    let pseudo = PseudoCurve::from_discount(Curve::new(t0, disc.pillars().to_vec(), pseudo_dfs).unwrap(), Tenor::months(6));
    let side = if rng.random::<bool>() { Side::Receiver } else { Side::Payer };
    let spec = SwaptionSpec::forward_starting(
        t0,
        Tenor::years(rng.random_range(1..=10)),
        Tenor::years(rng.random_range(1..=10)),
        0.0,
        side,
        &SwapConventions::default(),
    )
    .unwrap();
    let a = rng.random_range(0.0..0.5);
    let sigma = rng.random_range(0.002..0.03);
    let tilde = extended_vols(&MhwParams::new(a, sigma, 0.0).unwrap(), &spec).unwrap().max_crossover_gamma();
    let gamma = match regime {
        GammaRegime::Zero => 0.0,
        GammaRegime::BelowCrossover => f64::max(rng.random_range(0.0..tilde), 1e-6),
        GammaRegime::AboveCrossover => rng.random_range(tilde..=1.0),
    };
    let params = MhwParams::new(a, sigma, gamma).unwrap();

    let atm = swap_rate(&disc, &pseudo, spec.fixed(), spec.floating()).unwrap();
    let annuity = bpv(&disc, spec.fixed()).unwrap();
    let terms = payoff_terms(&params, &disc, &pseudo, &spec.with_strike(atm)).unwrap();
    let h = 1e-6 * terms.zeta;
    let slope = ((eval_f(&terms, h) - eval_f(&terms, -h)) / (2.0 * h)).abs();
    let strike = loop {
        let k = atm + rng.random_range(-m..m) * terms.zeta * slope / annuity;
        if k > 1e-4 {
            break k;
        }
    };
    RandomCase { disc, pseudo, spec: spec.with_strike(strike), params }
}

pub mod jamshidian;
pub mod repricer;
