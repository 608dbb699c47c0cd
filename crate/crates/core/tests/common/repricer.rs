//! Independent par-repricing of the bootstrap instruments on finished curves.

use mhw_core::curves::{Curve, QuoteSet};
use mhw_core::temporal::{build_schedule, Calendar, Date, DayCount, RollRule, Tenor};

pub struct Repriced {
    pub name: String,
    pub npv: f64,
}

fn roll() -> RollRule {
    RollRule::default()
}

fn spot(value_date: Date) -> Date {
    Calendar::Target.add_business_days(value_date, 2)
}

fn act360(s: Date, e: Date) -> f64 {
    (e - s).num_days() as f64 / 360.0
}

/// `fixed annuity · r − (B(spot) − B(T))` for every OIS quote.
pub fn ois(disc: &Curve<f64>, quotes: &QuoteSet<f64>, value_date: Date) -> Vec<Repriced> {
    let s = spot(value_date);
    let b = |d: Date| disc.discount(d).unwrap();
    quotes
        .ois
        .iter()
        .map(|q| {
            let end = roll().apply(q.tenor.add_to(s));
            let npv = if q.tenor.in_months().is_none_or(|m| m <= 12) {
                b(end) * (1.0 + act360(s, end) * q.rate) - b(s)
            } else {
                let leg = build_schedule::<f64>(s, q.tenor.add_to(s), 12, DayCount::Act360, roll()).unwrap();
                let annuity: f64 = leg.periods().map(|(_, e, yf)| yf * b(e)).sum();
                q.rate * annuity - (b(s) - b(end))
            };
            Repriced { name: format!("OIS {}", q.tenor), npv }
        })
        .collect()
}

/// Deposit, FRA and swap-vs-6m residuals, with Libor forwards off `pseudo`
/// and discounting on `disc`.
pub fn libor(disc: &Curve<f64>, pseudo: &Curve<f64>, quotes: &QuoteSet<f64>, value_date: Date) -> Vec<Repriced> {
    let s = spot(value_date);
    let b = |d: Date| disc.discount(d).unwrap();
    let bh = |d: Date| pseudo.discount(d).unwrap();
    let fwd = |st: Date, en: Date| (bh(st) / bh(en) - 1.0) / act360(st, en);
    let mut out = Vec::new();
    for q in &quotes.depo {
        let end = roll().apply(q.tenor.add_to(s));
        out.push(Repriced { name: format!("depo {}", q.tenor), npv: fwd(s, end) - q.rate });
    }
    for q in &quotes.fra {
        let st = roll().apply(Tenor::months(q.start_months).add_to(s));
        let en = roll().apply(Tenor::months(q.end_months).add_to(s));
        out.push(Repriced { name: format!("FRA {}x{}", q.start_months, q.end_months), npv: fwd(st, en) - q.rate });
    }
    for q in &quotes.swaps {
        let fixed = build_schedule::<f64>(s, q.tenor.add_to(s), 12, DayCount::Thirty360, roll()).unwrap();
        let float = build_schedule::<f64>(s, q.tenor.add_to(s), 6, DayCount::Act360, roll()).unwrap();
        let fixed_pv: f64 = fixed.periods().map(|(_, e, yf)| q.rate * yf * b(e)).sum();
        let float_pv: f64 = float.periods().map(|(st, e, yf)| yf * fwd(st, e) * b(e)).sum();
        out.push(Repriced { name: format!("swap {}", q.tenor), npv: fixed_pv - float_pv });
    }
    out
}
