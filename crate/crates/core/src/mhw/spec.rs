use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::curves::{check_same_span, SwapConventions};
use crate::scalar::Real;
use crate::temporal::{Date, LegSchedule, Tenor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Right to receive fixed `K` (profits when rates fall).
    Receiver,
    /// Right to pay fixed `K`.
    Payer,
}

/// European physically settled swaption whose underlying starts at expiry.
#[derive(Debug, Clone, PartialEq)]
pub struct SwaptionSpec<T> {
    expiry: Date,
    fixed: LegSchedule<T>,
    floating: LegSchedule<T>,
    strike: T,
    side: Side,
}

impl<T: Real> SwaptionSpec<T> {
    pub fn new(
        expiry: Date,
        fixed: LegSchedule<T>,
        floating: LegSchedule<T>,
        strike: T,
        side: Side,
    ) -> Result<Self, ModelError> {
        if fixed.start() != expiry {
            return Err(ModelError::InvalidSpec(format!(
                "expiry {expiry} differs from the first fixed accrual start {}",
                fixed.start()
            )));
        }
        check_same_span(&fixed, &floating).map_err(|e| ModelError::InvalidSpec(e.to_string()))?;
        if !strike.is_finite() {
            return Err(ModelError::InvalidSpec("strike must be finite".into()));
        }
        Ok(Self { expiry, fixed, floating, strike, side })
    }

    /// Swaption on a swap starting `expiry` after `spot` and running for
    /// `tenor`, both legs generated with `conv`.
    pub fn forward_starting(
        spot: Date,
        expiry: Tenor,
        tenor: Tenor,
        strike: T,
        side: Side,
        conv: &SwapConventions,
    ) -> Result<Self, ModelError> {
        let start = expiry.add_to(spot);
        let months = expiry.in_months().zip(tenor.in_months()).map(|(e, t)| e + t);
        let end = match months {
            Some(m) => Tenor::months(m).add_to(spot),
            None => tenor.add_to(start),
        };
        let fixed = conv.fixed_leg(start, end)?;
        let floating = conv.floating_leg(start, end)?;
        Self::new(fixed.start(), fixed, floating, strike, side)
    }

    pub fn expiry(&self) -> Date {
        self.expiry
    }

    pub fn fixed(&self) -> &LegSchedule<T> {
        &self.fixed
    }

    pub fn floating(&self) -> &LegSchedule<T> {
        &self.floating
    }

    pub fn strike(&self) -> T {
        self.strike
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn with_strike(&self, strike: T) -> Self {
        Self { strike, ..self.clone() }
    }

    pub fn with_side(&self, side: Side) -> Self {
        Self { side, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::DayCount;

    fn ymd(y: i32, m: u32, d: u32) -> Date {
        Date::from_ymd_opt(y, m, d).unwrap()
    }

    #[test]
    fn diagonal_1y9y_layout() {
        let spot = ymd(2015, 9, 14);
        let s = SwaptionSpec::<f64>::forward_starting(
            spot,
            Tenor::years(1),
            Tenor::years(9),
            0.01,
            Side::Receiver,
            &SwapConventions::default(),
        )
        .unwrap();
        assert_eq!(s.expiry(), ymd(2016, 9, 14));
        assert_eq!(s.fixed().len(), 9);
        assert_eq!(s.floating().len(), 18);
        assert_eq!(s.fixed().end(), s.floating().end());
    }

    #[test]
    fn expiry_must_match_leg_start() {
        let f = LegSchedule::<f64>::from_dates(ymd(2016, 9, 14), vec![ymd(2017, 9, 14)], DayCount::Thirty360).unwrap();
        let r = SwaptionSpec::new(ymd(2016, 9, 13), f.clone(), f, 0.01, Side::Payer);
        assert!(matches!(r, Err(ModelError::InvalidSpec(_))));
    }
}
