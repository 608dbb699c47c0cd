//! Sequential dual-curve bootstrap: OIS discount curve first, then the
//! Euribor pseudo-discount curve from deposit, FRAs and swaps discounted on it.

use serde::{Deserialize, Serialize};

use super::curve::{Curve, PseudoCurve};
use super::quotes::{fill_annual_gaps, QuoteSet, RateQuote};
use super::swap::SwapConventions;
use super::CurveError;
use crate::roots::brent;
use crate::scalar::Real;
use crate::temporal::{build_schedule, Date, DayCount, LegSchedule, RollRule, Tenor};

/// Market conventions used when turning quotes into cash flows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BootstrapConventions {
    /// Business days from value date to spot (curve instruments start at spot).
    pub spot_lag: u32,
    pub roll: RollRule,
    pub ois_day_count: DayCount,
    pub ois_fixed_frequency_months: u32,
    pub depo_day_count: DayCount,
    pub fra_day_count: DayCount,
    pub swap: SwapConventions,
    /// Libor tenor of the pseudo-discount curve.
    pub libor_tenor_months: u32,
}

impl Default for BootstrapConventions {
    fn default() -> Self {
        Self {
            spot_lag: 2,
            roll: RollRule::default(),
            ois_day_count: DayCount::Act360,
            ois_fixed_frequency_months: 12,
            depo_day_count: DayCount::Act360,
            fra_day_count: DayCount::Act360,
            swap: SwapConventions::default(),
            libor_tenor_months: 6,
        }
    }
}

impl BootstrapConventions {
    pub fn spot_date(&self, value_date: Date) -> Date {
        self.roll.calendar.add_business_days(value_date, self.spot_lag)
    }

    /// Rolled `spot + tenor`.
    pub fn maturity(&self, spot: Date, tenor: Tenor) -> Date {
        self.roll.apply(tenor.add_to(spot))
    }
}

/// Repricing outcome of one bootstrap instrument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstrumentResidual {
    pub instrument: String,
    pub maturity: Date,
    pub quote: f64,
    /// NPV per unit notional at the quoted rate (zero when repriced exactly).
    pub npv: f64,
}

enum DiscountInstrument<T> {
    /// Single period: pay 1 at spot, receive `1 + δ r` at maturity.
    ZeroCoupon { end: Date, yf: T },
    /// Annual fixed vs compounded overnight.
    Swap { fixed: LegSchedule<T> },
}

struct OisInstrument<T> {
    name: String,
    rate: T,
    spot: Date,
    kind: DiscountInstrument<T>,
}

impl<T: Real> OisInstrument<T> {
    fn maturity(&self) -> Date {
        match &self.kind {
            DiscountInstrument::ZeroCoupon { end, .. } => *end,
            DiscountInstrument::Swap { fixed } => fixed.end(),
        }
    }

    fn npv(&self, disc: &Curve<T>) -> Result<T, CurveError> {
        let b_spot = disc.discount(self.spot)?;
        match &self.kind {
            DiscountInstrument::ZeroCoupon { end, yf } => {
                Ok((T::one() + *yf * self.rate) * disc.discount(*end)? - b_spot)
            }
            DiscountInstrument::Swap { fixed } => {
                let mut annuity = T::zero();
                for (_, end, yf) in fixed.periods() {
                    annuity = annuity + yf * disc.discount(end)?;
                }
                Ok(self.rate * annuity - (b_spot - disc.discount(fixed.end())?))
            }
        }
    }
}

fn ois_instruments<T: Real>(
    quotes: &QuoteSet<T>,
    value_date: Date,
    conv: &BootstrapConventions,
) -> Result<Vec<OisInstrument<T>>, CurveError> {
    let spot = conv.spot_date(value_date);
    let mut out = Vec::new();
    for q in fill_annual_gaps(&quotes.ois) {
        let single = q.tenor.in_months().map_or(true, |m| m <= conv.ois_fixed_frequency_months);
        let kind = if single {
            let end = conv.maturity(spot, q.tenor);
            DiscountInstrument::ZeroCoupon { end, yf: conv.ois_day_count.year_fraction(spot, end)? }
        } else {
            let fixed = build_schedule(
                spot,
                q.tenor.add_to(spot),
                conv.ois_fixed_frequency_months,
                conv.ois_day_count,
                conv.roll,
            )?;
            DiscountInstrument::Swap { fixed }
        };
        out.push(OisInstrument { name: format!("OIS {}", q.tenor), rate: q.rate, spot, kind });
    }
    out.sort_by_key(|i| i.maturity());
    Ok(out)
}

/// Solves for the log discount factor of a new last pillar that zeroes `npv`.
fn solve_pillar<T: Real>(
    base: &Curve<T>,
    pillar: Date,
    name: &str,
    npv: impl Fn(&Curve<T>) -> Result<T, CurveError>,
) -> Result<Curve<T>, CurveError> {
    let fail = |reason: String| CurveError::Bootstrap { instrument: name.to_string(), reason };
    let guess = base.discount(pillar)?.ln();
    let mut last_err = None;
    let mut objective = |x: T| -> T {
        match base.with_last_pillar(pillar, x.exp()).and_then(|c| npv(&c)) {
            Ok(v) => v,
            Err(e) => {
                last_err = Some(e);
                T::nan()
            }
        }
    };
    let mut width = T::lit(0.05);
    let (mut lo, mut hi) = (guess - width, guess + width);
    let (mut f_lo, mut f_hi) = (objective(lo), objective(hi));
    let mut expansions = 0;
    while f_lo.is_finite() && f_hi.is_finite() && (f_lo > T::zero()) == (f_hi > T::zero()) {
        expansions += 1;
        if expansions > 12 {
            return Err(fail("could not bracket the pillar discount factor".into()));
        }
        width = width * T::lit(2.0);
        lo = guess - width;
        hi = guess + width;
        f_lo = objective(lo);
        f_hi = objective(hi);
    }
    if !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(last_err.unwrap_or_else(|| fail("non-finite NPV".into())));
    }
    let solved = brent(&mut objective, lo, hi, 200).map_err(|e| fail(e.to_string()))?;
    base.with_last_pillar(pillar, solved.root.exp())
}

fn start_curve<T: Real>(value_date: Date, spot: Date) -> Result<Curve<T>, CurveError> {
    // Spot carries discount factor 1: no overnight quotes bridge value date and spot.
    if spot > value_date {
        Curve::new(value_date, vec![spot], vec![T::one()])
    } else {
        Curve::new(value_date, vec![], vec![])
    }
}

/// Discount curve from OIS quotes. Quotes up to the fixed-leg frequency are
/// single-period; longer ones are annual ACT/360 fixed vs overnight swaps.
pub fn bootstrap_discount<T: Real>(
    quotes: &QuoteSet<T>,
    value_date: Date,
    conv: &BootstrapConventions,
) -> Result<Curve<T>, CurveError> {
    let instruments = ois_instruments(quotes, value_date, conv)?;
    if instruments.is_empty() {
        return Err(CurveError::Bootstrap { instrument: "OIS".into(), reason: "no OIS quotes".into() });
    }
    let mut curve = start_curve(value_date, conv.spot_date(value_date))?;
    for inst in &instruments {
        if curve.pillars().last().is_some_and(|&d| d >= inst.maturity()) {
            return Err(CurveError::Bootstrap {
                instrument: inst.name.clone(),
                reason: "maturity does not extend the curve".into(),
            });
        }
        curve = solve_pillar(&curve, inst.maturity(), &inst.name, |c| inst.npv(c))?;
    }
    Ok(curve)
}

/// Residual NPV of every OIS instrument on `disc`.
pub fn ois_residuals<T: Real>(
    disc: &Curve<T>,
    quotes: &QuoteSet<T>,
    value_date: Date,
    conv: &BootstrapConventions,
) -> Result<Vec<InstrumentResidual>, CurveError> {
    ois_instruments(quotes, value_date, conv)?
        .iter()
        .map(|inst| {
            Ok(InstrumentResidual {
                instrument: inst.name.clone(),
                maturity: inst.maturity(),
                quote: inst.rate.to_f64_lossy(),
                npv: inst.npv(disc)?.to_f64_lossy(),
            })
        })
        .collect()
}

enum LiborKind<T> {
    /// Deposit or FRA: `B̂(start)/B̂(end) = 1 + δ r`.
    Forward { start: Date, end: Date, yf: T },
    Swap { fixed: LegSchedule<T>, floating: LegSchedule<T> },
}

struct LiborInstrument<T> {
    name: String,
    rate: T,
    kind: LiborKind<T>,
}

impl<T: Real> LiborInstrument<T> {
    fn maturity(&self) -> Date {
        match &self.kind {
            LiborKind::Forward { end, .. } => *end,
            LiborKind::Swap { fixed, .. } => fixed.end(),
        }
    }

    fn npv(&self, disc: &Curve<T>, pseudo: &Curve<T>) -> Result<T, CurveError> {
        match &self.kind {
            LiborKind::Forward { start, end, yf } => {
                let implied = pseudo.discount(*start)? / pseudo.discount(*end)? - T::one();
                Ok(disc.discount(*end)? * (*yf * self.rate - implied))
            }
            LiborKind::Swap { fixed, floating } => {
                let mut fixed_leg = T::zero();
                for (_, end, yf) in fixed.periods() {
                    fixed_leg = fixed_leg + yf * disc.discount(end)?;
                }
                let mut float_leg = T::zero();
                for (s, e, _) in floating.periods() {
                    let libor_accrual = pseudo.discount(s)? / pseudo.discount(e)? - T::one();
                    float_leg = float_leg + disc.discount(e)? * libor_accrual;
                }
                Ok(self.rate * fixed_leg - float_leg)
            }
        }
    }
}

fn libor_instruments<T: Real>(
    quotes: &QuoteSet<T>,
    value_date: Date,
    conv: &BootstrapConventions,
) -> Result<Vec<LiborInstrument<T>>, CurveError> {
    let spot = conv.spot_date(value_date);
    let mut out = Vec::new();
    for d in &quotes.depo {
        let end = conv.maturity(spot, d.tenor);
        out.push(LiborInstrument {
            name: format!("Depo {}", d.tenor),
            rate: d.rate,
            kind: LiborKind::Forward { start: spot, end, yf: conv.depo_day_count.year_fraction(spot, end)? },
        });
    }
    for f in &quotes.fra {
        let start = conv.maturity(spot, Tenor::months(f.start_months));
        let end = conv.maturity(spot, Tenor::months(f.end_months));
        out.push(LiborInstrument {
            name: format!("FRA {}x{}", f.start_months, f.end_months),
            rate: f.rate,
            kind: LiborKind::Forward { start, end, yf: conv.fra_day_count.year_fraction(start, end)? },
        });
    }
    let swaps: Vec<RateQuote<T>> = fill_annual_gaps(&quotes.swaps);
    for s in swaps {
        let end = s.tenor.add_to(spot);
        out.push(LiborInstrument {
            name: format!("Swap {} vs {}m", s.tenor, conv.libor_tenor_months),
            rate: s.rate,
            kind: LiborKind::Swap { fixed: conv.swap.fixed_leg(spot, end)?, floating: conv.swap.floating_leg(spot, end)? },
        });
    }
    out.sort_by_key(|i| i.maturity());
    Ok(out)
}

/// Pseudo-discount curve from the 6m deposit, FRAs and swaps vs 6m, with
/// every instrument discounted on `disc` and FRA convexity ignored.
pub fn bootstrap_pseudo<T: Real>(
    quotes: &QuoteSet<T>,
    disc: &Curve<T>,
    value_date: Date,
    conv: &BootstrapConventions,
) -> Result<PseudoCurve<T>, CurveError> {
    if disc.reference_date() != value_date {
        return Err(CurveError::Invalid(format!(
            "discount curve anchored at {} but value date is {value_date}",
            disc.reference_date()
        )));
    }
    let instruments = libor_instruments(quotes, value_date, conv)?;
    if instruments.is_empty() {
        return Err(CurveError::Bootstrap { instrument: "Libor".into(), reason: "no deposit/FRA/swap quotes".into() });
    }
    let mut curve = start_curve(value_date, conv.spot_date(value_date))?;
    for inst in &instruments {
        if curve.pillars().last().is_some_and(|&d| d >= inst.maturity()) {
            return Err(CurveError::Bootstrap {
                instrument: inst.name.clone(),
                reason: "maturity does not extend the curve".into(),
            });
        }
        curve = solve_pillar(&curve, inst.maturity(), &inst.name, |c| inst.npv(disc, c))?;
    }
    Ok(PseudoCurve::new(curve, Tenor::months(conv.libor_tenor_months), conv.swap.float_day_count, conv.roll))
}

/// Residual NPV of every deposit, FRA and swap on the bootstrapped curves.
pub fn pseudo_residuals<T: Real>(
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    quotes: &QuoteSet<T>,
    value_date: Date,
    conv: &BootstrapConventions,
) -> Result<Vec<InstrumentResidual>, CurveError> {
    libor_instruments(quotes, value_date, conv)?
        .iter()
        .map(|inst| {
            Ok(InstrumentResidual {
                instrument: inst.name.clone(),
                maturity: inst.maturity(),
                quote: inst.rate.to_f64_lossy(),
                npv: inst.npv(disc, pseudo.as_curve())?.to_f64_lossy(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::FraQuote;

    fn ymd(y: i32, m: u32, d: u32) -> Date {
        Date::from_ymd_opt(y, m, d).unwrap()
    }

    fn rq(t: &str, r: f64) -> RateQuote<f64> {
        RateQuote { tenor: t.parse().unwrap(), rate: r }
    }

    #[test]
    fn single_ois_closed_form() {
        let t0 = ymd(2015, 9, 10);
        let conv = BootstrapConventions::default();
        let q = QuoteSet { ois: vec![rq("1y", -0.00147)], ..Default::default() };
        let c = bootstrap_discount(&q, t0, &conv).unwrap();
        let spot = ymd(2015, 9, 14);
        let end = ymd(2016, 9, 14);
        let delta = 366.0 / 360.0;
        let b = c.discount(end).unwrap();
        assert!((b - 1.0 / (1.0 + delta * -0.00147)).abs() < 1e-15);
        assert!((b - 1.001_497).abs() < 1e-6);
        assert_eq!(c.discount(spot).unwrap(), 1.0);
    }

    #[test]
    fn zero_quotes_give_unit_curves() {
        let t0 = ymd(2015, 9, 10);
        let conv = BootstrapConventions::default();
        let q = QuoteSet {
            ois: ["1w", "6m", "1y", "2y", "5y"].iter().map(|t| rq(t, 0.0)).collect(),
            depo: vec![rq("6m", 0.0)],
            fra: vec![FraQuote { start_months: 1, end_months: 7, rate: 0.0 }],
            swaps: ["1y", "2y", "5y"].iter().map(|t| rq(t, 0.0)).collect(),
        };
        let disc = bootstrap_discount(&q, t0, &conv).unwrap();
        assert!(disc.discount_factors().iter().all(|&d| (d - 1.0).abs() < 1e-15));
        let pseudo = bootstrap_pseudo(&q, &disc, t0, &conv).unwrap();
        assert!(pseudo.discount_factors().iter().all(|&d| (d - 1.0).abs() < 1e-15));
    }

    #[test]
    fn depo_closed_form() {
        let t0 = ymd(2015, 9, 10);
        let conv = BootstrapConventions::default();
        let q = QuoteSet { ois: vec![rq("1y", 0.0)], depo: vec![rq("6m", 0.00038)], ..Default::default() };
        let disc = bootstrap_discount(&q, t0, &conv).unwrap();
        let pseudo = bootstrap_pseudo(&q, &disc, t0, &conv).unwrap();
        // 2015-09-14 to 2016-03-14 is 182 days.
        let delta = 182.0 / 360.0;
        let b = pseudo.discount(ymd(2016, 3, 14)).unwrap();
        assert!((b - 1.0 / (1.0 + delta * 0.00038)).abs() < 1e-15);
        assert!((b - 0.999_808).abs() < 1e-6);
    }

    #[test]
    fn non_extending_quote_rejected() {
        let t0 = ymd(2015, 9, 10);
        let q = QuoteSet { ois: vec![rq("12m", 0.01), rq("1y", 0.01)], ..Default::default() };
        let r = bootstrap_discount(&q, t0, &BootstrapConventions::default());
        assert!(matches!(r, Err(CurveError::Bootstrap { .. })));
    }
}
