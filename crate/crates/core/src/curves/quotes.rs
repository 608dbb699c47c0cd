use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::CurveError;
use crate::scalar::Real;
use crate::temporal::{Tenor, TenorUnit};

/// Par rate for a tenor (decimal, negative allowed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateQuote<T> {
    pub tenor: Tenor,
    pub rate: T,
}

/// FRA `start × end` in months from spot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FraQuote<T> {
    pub start_months: u32,
    pub end_months: u32,
    pub rate: T,
}

/// Linear-instrument quotes feeding the dual-curve bootstrap.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct QuoteSet<T> {
    pub ois: Vec<RateQuote<T>>,
    pub depo: Vec<RateQuote<T>>,
    pub fra: Vec<FraQuote<T>>,
    pub swaps: Vec<RateQuote<T>>,
}

pub const OIS_FILE: &str = "ois.csv";
pub const DEPO_FILE: &str = "depo.csv";
pub const FRA_FILE: &str = "fra.csv";
pub const SWAP_FILE: &str = "swap6m.csv";

#[derive(Deserialize)]
struct TenorRow {
    tenor: String,
    rate: f64,
}

#[derive(Deserialize)]
struct FraRow {
    start_months: u32,
    end_months: u32,
    rate: f64,
}

/// Reads a headered CSV, reporting `file:line` on any malformed row.
pub(crate) fn read_csv_rows<R: DeserializeOwned>(path: &Path) -> Result<Vec<(u64, R)>, CurveError> {
    if !path.exists() {
        return Err(CurveError::MissingInput(path.to_path_buf()));
    }
    let file_err = |line: u64, message: String| CurveError::QuoteFormat { file: path.to_path_buf(), line, message };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| file_err(0, e.to_string()))?;
    let mut rows = Vec::new();
    for rec in reader.deserialize::<R>() {
        match rec {
            Ok(r) => rows.push((rows.len() as u64 + 2, r)),
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                return Err(file_err(line, e.to_string()));
            }
        }
    }
    Ok(rows)
}

fn to_scalar<T: Real>(x: f64, file: &Path, line: u64) -> Result<T, CurveError> {
    if !x.is_finite() {
        return Err(CurveError::QuoteFormat { file: file.to_path_buf(), line, message: format!("non-finite rate {x}") });
    }
    Ok(T::lit(x))
}

fn read_tenor_file<T: Real>(path: &Path) -> Result<Vec<RateQuote<T>>, CurveError> {
    read_csv_rows::<TenorRow>(path)?
        .into_iter()
        .map(|(line, row)| {
            let tenor = row.tenor.parse::<Tenor>().map_err(|e| CurveError::QuoteFormat {
                file: path.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
            Ok(RateQuote { tenor, rate: to_scalar(row.rate, path, line)? })
        })
        .collect()
}

impl<T: Real> QuoteSet<T> {
    /// Loads `ois.csv`, `depo.csv`, `fra.csv` and `swap6m.csv` from `dir`.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self, CurveError> {
        let dir = dir.as_ref();
        let fra_path: PathBuf = dir.join(FRA_FILE);
        let fra = read_csv_rows::<FraRow>(&fra_path)?
            .into_iter()
            .map(|(line, row)| {
                Ok(FraQuote {
                    start_months: row.start_months,
                    end_months: row.end_months,
                    rate: to_scalar(row.rate, &fra_path, line)?,
                })
            })
            .collect::<Result<Vec<_>, CurveError>>()?;
        let q = Self {
            ois: read_tenor_file(&dir.join(OIS_FILE))?,
            depo: read_tenor_file(&dir.join(DEPO_FILE))?,
            fra,
            swaps: read_tenor_file(&dir.join(SWAP_FILE))?,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        for (name, quotes) in [("ois", &self.ois), ("depo", &self.depo), ("swap", &self.swaps)] {
            let mut seen = HashSet::new();
            for q in quotes.iter() {
                if !seen.insert(q.tenor) {
                    return Err(CurveError::Quotes(format!("duplicate {name} tenor {}", q.tenor)));
                }
                if !q.rate.is_finite() {
                    return Err(CurveError::Quotes(format!("non-finite {name} rate at {}", q.tenor)));
                }
            }
        }
        let mut seen = HashSet::new();
        for f in &self.fra {
            if f.end_months <= f.start_months {
                return Err(CurveError::Quotes(format!("FRA {}x{} ends before it starts", f.start_months, f.end_months)));
            }
            if !seen.insert((f.start_months, f.end_months)) {
                return Err(CurveError::Quotes(format!("duplicate FRA {}x{}", f.start_months, f.end_months)));
            }
        }
        for s in &self.swaps {
            if s.tenor.unit != TenorUnit::Year {
                return Err(CurveError::Quotes(format!("swap tenor {} must be whole years", s.tenor)));
            }
        }
        Ok(())
    }
}

/// Inserts the whole-year tenors missing between the shortest and longest
/// yearly quotes, with par rates linear in tenor. Sub-year quotes are kept.
pub fn fill_annual_gaps<T: Real>(quotes: &[RateQuote<T>]) -> Vec<RateQuote<T>> {
    let mut yearly: Vec<(u32, T)> = quotes
        .iter()
        .filter(|q| q.tenor.unit == TenorUnit::Year)
        .map(|q| (q.tenor.count, q.rate))
        .collect();
    yearly.sort_by_key(|&(y, _)| y);
    let mut out: Vec<RateQuote<T>> = quotes.iter().filter(|q| q.tenor.unit != TenorUnit::Year).copied().collect();
    for w in yearly.windows(2) {
        let ((y0, r0), (y1, r1)) = (w[0], w[1]);
        out.push(RateQuote { tenor: Tenor::years(y0), rate: r0 });
        for y in (y0 + 1)..y1 {
            let w = T::from_u32(y - y0).unwrap() / T::from_u32(y1 - y0).unwrap();
            out.push(RateQuote { tenor: Tenor::years(y), rate: r0 + w * (r1 - r0) });
        }
    }
    if let Some(&(y, r)) = yearly.last() {
        out.push(RateQuote { tenor: Tenor::years(y), rate: r });
    }
    out.sort_by_key(|q| q.tenor.approx_days());
    out
}
