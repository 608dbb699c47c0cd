mod common;

use mhw_core::curves::SwapConventions;
use mhw_core::market::atm_swaption;
use mhw_core::mhw::{price_swaption, MhwParams, Side, SwaptionSpec};
use mhw_core::oracle::{martingale_check, mc_price_exact, mc_price_path, McConfig};
use mhw_core::snapshot::MarketSnapshot;
use mhw_core::temporal::Tenor;

fn setup(expiry: u32, tenor: u32) -> (MarketSnapshot, SwaptionSpec<f64>) {
    let snap = common::snapshot();
    let spec = atm_swaption(&snap.disc, &snap.pseudo, snap.spot, Tenor::years(expiry), Tenor::years(tenor), &SwapConventions::default())
        .unwrap();
    (snap, spec)
}

#[test]
fn exact_sampler_is_unbiased_over_seeds() {
    let (snap, spec) = setup(5, 5);
    // A larger γ exercises negative extended vols.
    let p = MhwParams::new(0.1331, 0.0127, 0.4).unwrap();
    let closed = price_swaption(&p, &snap.disc, &snap.pseudo, &spec).unwrap();
    let inside = (1..=20)
        .filter(|&seed| {
            let cfg = McConfig { draws: 50_000, seed, antithetic: false, ..McConfig::default() };
            mc_price_exact(&p, &snap.disc, &snap.pseudo, &spec, &cfg).unwrap().contains(closed, 3.0)
        })
        .count();
    assert!(inside >= 19, "{inside}/20");
}

#[test]
fn antithetics_reduce_variance() {
    let (snap, spec) = setup(2, 8);
    let p = common::reported_params();
    for side in [Side::Receiver, Side::Payer] {
        for k in [-0.005, 0.0, 0.005] {
            let spec = spec.with_strike(spec.strike() + k).with_side(side);
            let run = |antithetic| {
                let cfg = McConfig { draws: 200_000, antithetic, ..McConfig::default() };
                mc_price_exact(&p, &snap.disc, &snap.pseudo, &spec, &cfg).unwrap().std_error
            };
            let (anti, plain) = (run(true), run(false));
            assert!(anti <= plain, "{side:?} {k}: {anti} > {plain}");
        }
    }
}

#[test]
fn path_refinement_is_consistent() {
    let (snap, spec) = setup(5, 5);
    let p = MhwParams::new(0.1331, 0.0127, 0.3).unwrap();
    let run = |steps| {
        let cfg = McConfig { draws: 100_000, steps, antithetic: false, seed: 17, ..McConfig::default() };
        mc_price_path(&p, &snap.disc, &snap.pseudo, &spec, &cfg).unwrap()
    };
    let (coarse, fine) = (run(50), run(200));
    let se = coarse.std_error.hypot(fine.std_error);
    assert!((coarse.price - fine.price).abs() <= 3.0 * se, "{coarse:?} {fine:?}");
    let closed = price_swaption(&p, &snap.disc, &snap.pseudo, &spec).unwrap();
    assert!(fine.contains(closed, 3.0), "{fine:?} vs {closed}");
}

#[test]
fn spreads_are_martingales() {
    let (snap, spec) = setup(3, 7);
    let p = MhwParams::new(0.1331, 0.0127, 0.6).unwrap();
    let cfg = McConfig { draws: 100_000, antithetic: false, steps: 20, ..McConfig::default() };
    let report = martingale_check(&p, &snap.disc, &snap.pseudo, &spec, &cfg).unwrap();
    assert_eq!(report.spreads.len(), 14);
    for s in &report.spreads {
        assert!(s.within(3.0), "{s:?}");
        assert!(s.t0_value > 1.0);
    }
    assert!(report.all_within(3.0));
}

#[test]
fn reruns_are_bit_identical() {
    let (snap, spec) = setup(1, 9);
    let p = common::reported_params();
    let cfg = McConfig { draws: 300_000, ..McConfig::default() };
    let a = mc_price_exact(&p, &snap.disc, &snap.pseudo, &spec, &cfg).unwrap();
    let b = mc_price_exact(&p, &snap.disc, &snap.pseudo, &spec, &cfg).unwrap();
    assert_eq!(a.price.to_bits(), b.price.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    assert_eq!((a.draws, a.seed), (300_000, cfg.seed));
}
