//! The per-trial report row and its CSV form.
//!
//! Floats are printed with 17 significant digits ('.' decimal, no locale),
//! enough to reproduce every f64 bit-exactly, so identical runs diff clean.

use serde::Serialize;

pub const CSV_HEADER: &str = "construction,n,epsilon,d,b,w,t,size,width,error,error_0side,\
error_1side,bound_universal,bound_specific,seed,trial,error_method,mc_half_width";

/// One report row. The first twelve columns follow the sweep contract; the
/// trailing three record the trial index, how the error was measured, and
/// the Monte Carlo half-width (0 for exhaustive rows).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub construction: String,
    pub n: u32,
    pub epsilon: f64,
    pub d: Option<u32>,
    pub b: Option<u32>,
    pub w: Option<u32>,
    pub t: Option<u64>,
    pub size: u64,
    pub width: u32,
    pub error: f64,
    pub error_0side: f64,
    pub error_1side: f64,
    /// 2^n / log2(n).
    pub bound_universal: f64,
    /// The active construction's own bound (see README for the formulas).
    pub bound_specific: f64,
    /// Seed the trial ran with; `verify --row` replays from it.
    pub seed: u64,
    pub trial: u64,
    pub error_method: String,
    pub mc_half_width: f64,
}

/// 17 significant digits: one leading digit plus 16 after the point.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt_u32(v: Option<u32>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Row {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.construction,
            self.n,
            fmt_float(self.epsilon),
            fmt_opt_u32(self.d),
            fmt_opt_u32(self.b),
            fmt_opt_u32(self.w),
            self.t.map(|x| x.to_string()).unwrap_or_default(),
            self.size,
            self.width,
            fmt_float(self.error),
            fmt_float(self.error_0side),
            fmt_float(self.error_1side),
            fmt_float(self.bound_universal),
            fmt_float(self.bound_specific),
            self.seed,
            self.trial,
            self.error_method,
            fmt_float(self.mc_half_width),
        )
    }

    pub fn from_csv_line(line: &str) -> Result<Row, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 18 {
            return Err(format!("expected 18 fields, got {}", fields.len()));
        }
        fn req<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            s.parse().map_err(|e| format!("bad {what} {s:?}: {e}"))
        }
        fn opt<T: std::str::FromStr>(s: &str, what: &str) -> Result<Option<T>, String>
        where
            T::Err: std::fmt::Display,
        {
            if s.is_empty() {
                Ok(None)
            } else {
                req(s, what).map(Some)
            }
        }
        Ok(Row {
            construction: fields[0].to_string(),
            n: req(fields[1], "n")?,
            epsilon: req(fields[2], "epsilon")?,
            d: opt(fields[3], "d")?,
            b: opt(fields[4], "b")?,
            w: opt(fields[5], "w")?,
            t: opt(fields[6], "t")?,
            size: req(fields[7], "size")?,
            width: req(fields[8], "width")?,
            error: req(fields[9], "error")?,
            error_0side: req(fields[10], "error_0side")?,
            error_1side: req(fields[11], "error_1side")?,
            bound_universal: req(fields[12], "bound_universal")?,
            bound_specific: req(fields[13], "bound_specific")?,
            seed: req(fields[14], "seed")?,
            trial: req(fields[15], "trial")?,
            error_method: fields[16].to_string(),
            mc_half_width: req(fields[17], "mc_half_width")?,
        })
    }
}

/// 2^n / log2(n), the universal yardstick column.
pub fn bound_universal(n: u32) -> f64 {
    (n as f64).exp2() / (n as f64).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_line_round_trip() {
        let row = Row {
            construction: "universal".into(),
            n: 12,
            epsilon: 0.2,
            d: Some(1),
            b: None,
            w: None,
            t: None,
            size: 7434,
            width: 11,
            error: 1.0 / 3.0,
            error_0side: 0.25,
            error_1side: 1.0 / 3.0 - 0.25,
            bound_universal: bound_universal(12),
            bound_specific: 24541.038784954293,
            seed: 0xDEADBEEF,
            trial: 3,
            error_method: "exhaustive".into(),
            mc_half_width: 0.0,
        };
        let line = row.to_csv_line();
        assert_eq!(Row::from_csv_line(&line).unwrap(), row);
        assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
    }

    #[test]
    fn float_format_is_17_significant_digits() {
        assert_eq!(fmt_float(0.25), "2.5000000000000000e-1");
        // Parsing the printed form reproduces the exact bits.
        for v in [1.0 / 3.0, 0.1, 12270.519392477147, f64::MIN_POSITIVE] {
            let parsed: f64 = fmt_float(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits());
        }
    }
}
