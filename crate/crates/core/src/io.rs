//! CSV ingestion and the common output schema.
//!
//! Price input is `date,price` with ISO-8601 dates; prices are taken as
//! already adjusted for splits and dividends. Output tables have the columns
//! `timestamp,value[,z_score,flag][,signal]`, with values printed at 9
//! significant digits in their shortest round-tripping form.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finance::SignalSeries;
use crate::rolling::RegimeSeries;
use crate::series::{PriceSeries, TimeSeries, Timestamp};

/// Delimiter of a price file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriceFormat {
    #[default]
    Csv,
    Tsv,
}

impl PriceFormat {
    fn delimiter(self) -> u8 {
        match self {
            PriceFormat::Csv => b',',
            PriceFormat::Tsv => b'\t',
        }
    }
}

fn parse_date(s: &str, line: usize) -> Result<Timestamp> {
    Timestamp::parse_from_str(s.trim(), "%Y-%m-%d").map_err(|e| Error::Ingestion {
        line,
        message: format!("invalid date {s:?}: {e}"),
    })
}

fn parse_number(s: &str, line: usize, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Ingestion {
        line,
        message: format!("invalid {what} {s:?}"),
    })
}

/// Reads `(date, number)` records, reporting 1-based file line numbers.
fn read_pairs<R: Read>(reader: R, delimiter: u8, what: &str) -> Result<Vec<(Timestamp, f64, usize)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Ingestion {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() < 2 {
            return Err(Error::Ingestion {
                line,
                message: "expected at least 2 fields".into(),
            });
        }
        out.push((parse_date(&rec[0], line)?, parse_number(&rec[1], line, what)?, line));
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

/// Sorts by date, rejecting duplicates; unsorted input is an error when `strict`.
fn order_records(mut recs: Vec<(Timestamp, f64, usize)>, strict: bool) -> Result<Vec<(Timestamp, f64, usize)>> {
    if let Some(w) = recs.windows(2).find(|w| w[0].0 > w[1].0) {
        if strict {
            return Err(Error::Ingestion {
                line: w[1].2,
                message: format!("date {} is out of order", w[1].0),
            });
        }
        log::warn!("input dates are not sorted; sorting");
        recs.sort_by_key(|r| r.0);
    }
    if let Some(w) = recs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::Ingestion {
            line: w[1].2,
            message: format!("duplicate date {}", w[1].0),
        });
    }
    Ok(recs)
}

pub fn read_prices<R: Read>(reader: R, format: PriceFormat, strict: bool) -> Result<PriceSeries> {
    let recs = order_records(read_pairs(reader, format.delimiter(), "price")?, strict)?;
    if let Some(r) = recs.iter().find(|r| !(r.1 > 0.0 && r.1.is_finite())) {
        return Err(Error::Ingestion {
            line: r.2,
            message: format!("price {} is not positive", r.1),
        });
    }
    let (ts, px): (Vec<_>, Vec<_>) = recs.into_iter().map(|(t, p, _)| (t, p)).unzip();
    PriceSeries::new(ts, px)
}

/// Loads a `date,price` file.
pub fn load_prices(path: impl AsRef<Path>, format: PriceFormat, strict: bool) -> Result<PriceSeries> {
    let file = std::fs::File::open(path.as_ref())?;
    read_prices(file, format, strict)
}

pub fn read_series<R: Read>(reader: R, strict: bool) -> Result<TimeSeries> {
    let recs = order_records(read_pairs(reader, b',', "value")?, strict)?;
    if let Some(r) = recs.iter().find(|r| !r.1.is_finite()) {
        return Err(Error::Ingestion {
            line: r.2,
            message: "value is not finite".into(),
        });
    }
    let (ts, v): (Vec<_>, Vec<_>) = recs.into_iter().map(|(t, v, _)| (t, v)).unzip();
    TimeSeries::new(ts, v)
}

/// Loads a `timestamp,value[,...]` file, such as one written by [`OutputTable::write_csv`].
pub fn load_series(path: impl AsRef<Path>, strict: bool) -> Result<TimeSeries> {
    let file = std::fs::File::open(path.as_ref())?;
    read_series(file, strict)
}

/// Reads the `signal` column of a table written by [`OutputTable::from_signals`].
pub fn read_signals<R: Read>(reader: R) -> Result<SignalSeries> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Ingestion {
        line: 1,
        message: e.to_string(),
    })?;
    let col = headers
        .iter()
        .position(|h| h == "signal")
        .ok_or_else(|| Error::Ingestion {
            line: 1,
            message: "no signal column".into(),
        })?;
    let (mut ts, mut sig) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Ingestion {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        ts.push(parse_date(&rec[0], line)?);
        let s = rec.get(col).unwrap_or("");
        sig.push(s.parse::<i8>().map_err(|_| Error::Ingestion {
            line,
            message: format!("invalid signal {s:?}"),
        })?);
    }
    if ts.is_empty() {
        return Err(Error::EmptyInput);
    }
    SignalSeries::new(ts, sig)
}

/// Rounds to 9 significant digits and prints the shortest string that parses back to it.
pub fn format_value(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRow {
    pub timestamp: Timestamp,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signal: Option<i8>,
}

/// A time-indexed result table in the common output schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputTable {
    pub name: String,
    pub rows: Vec<OutputRow>,
}

impl OutputTable {
    pub fn from_series(name: &str, s: &TimeSeries) -> Self {
        let rows = s
            .iter()
            .map(|(timestamp, value)| OutputRow {
                timestamp,
                value,
                z_score: None,
                flag: None,
                signal: None,
            })
            .collect();
        Self {
            name: name.into(),
            rows,
        }
    }

    pub fn from_regimes(name: &str, r: &RegimeSeries) -> Self {
        let rows = (0..r.timestamps.len())
            .map(|i| OutputRow {
                timestamp: r.timestamps[i],
                value: r.kl_nats[i],
                z_score: Some(r.z_score[i]),
                flag: Some(r.flag[i]),
                signal: None,
            })
            .collect();
        Self {
            name: name.into(),
            rows,
        }
    }

    /// Signal table; `value` carries the NMI behind each signal.
    pub fn from_signals(name: &str, nmi: &TimeSeries, s: &SignalSeries) -> Result<Self> {
        if nmi.timestamps() != s.timestamps() {
            return Err(Error::Alignment("NMI and signal timestamps differ".into()));
        }
        let rows = nmi
            .iter()
            .zip(s.signals())
            .map(|((timestamp, value), &sig)| OutputRow {
                timestamp,
                value,
                z_score: None,
                flag: None,
                signal: Some(sig),
            })
            .collect();
        Ok(Self {
            name: name.into(),
            rows,
        })
    }

    fn has_z(&self) -> bool {
        self.rows.first().is_some_and(|r| r.z_score.is_some())
    }

    fn has_signal(&self) -> bool {
        self.rows.first().is_some_and(|r| r.signal.is_some())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("timestamp,value");
        if self.has_z() {
            out.push_str(",z_score,flag");
        }
        if self.has_signal() {
            out.push_str(",signal");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{},{}", r.timestamp, format_value(r.value));
            if let (Some(z), Some(f)) = (r.z_score, r.flag) {
                let _ = write!(out, ",{},{}", format_value(z), u8::from(f));
            }
            if let Some(s) = r.signal {
                let _ = write!(out, ",{s}");
            }
            out.push('\n');
        }
        out
    }

    /// Long format: one `(series, timestamp, variable, value)` record per cell.
    pub fn to_plot_data_string(&self) -> String {
        let mut out = String::from("series,timestamp,variable,value\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},value,{}", self.name, r.timestamp, format_value(r.value));
            if let Some(z) = r.z_score {
                let _ = writeln!(out, "{},{},z_score,{}", self.name, r.timestamp, format_value(z));
            }
            if let Some(f) = r.flag {
                let _ = writeln!(out, "{},{},flag,{}", self.name, r.timestamp, u8::from(f));
            }
            if let Some(s) = r.signal {
                let _ = writeln!(out, "{},{},signal,{}", self.name, r.timestamp, s);
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_row_file() {
        let p = read_prices(
            "date,price\n2020-01-02,100\n2020-01-03,110\n".as_bytes(),
            PriceFormat::Csv,
            true,
        )
        .unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.prices(), &[100.0, 110.0]);
    }

    #[test]
    fn tsv_file() {
        let p = read_prices("date\tprice\n2020-01-02\t100\n".as_bytes(), PriceFormat::Tsv, true).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn negative_price_names_line() {
        let err = read_prices(
            "date,price\n2020-01-02,100\n2020-01-03,-5\n".as_bytes(),
            PriceFormat::Csv,
            true,
        );
        assert!(matches!(err, Err(Error::Ingestion { line: 3, .. })), "{err:?}");
    }

    #[test]
    fn empty_input() {
        assert_eq!(
            read_prices("".as_bytes(), PriceFormat::Csv, true),
            Err(Error::EmptyInput)
        );
        assert_eq!(
            read_prices("date,price\n".as_bytes(), PriceFormat::Csv, true),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn parse_errors_name_line() {
        let e = read_prices("date,price\n2020-01-02,abc\n".as_bytes(), PriceFormat::Csv, true);
        assert!(matches!(e, Err(Error::Ingestion { line: 2, .. })));
        let e = read_prices("date,price\n2020-13-02,1\n".as_bytes(), PriceFormat::Csv, true);
        assert!(matches!(e, Err(Error::Ingestion { line: 2, .. })));
    }

    #[test]
    fn unsorted_and_duplicates() {
        let text = "date,price\n2020-01-03,1\n2020-01-02,2\n";
        assert!(matches!(
            read_prices(text.as_bytes(), PriceFormat::Csv, true),
            Err(Error::Ingestion { line: 3, .. })
        ));
        let p = read_prices(text.as_bytes(), PriceFormat::Csv, false).unwrap();
        assert_eq!(p.prices(), &[2.0, 1.0]);
        let dup = "date,price\n2020-01-02,1\n2020-01-02,2\n";
        assert!(read_prices(dup.as_bytes(), PriceFormat::Csv, false).is_err());
    }

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(4.5), "4.5");
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(1.4189385332046727), "1.41893853");
        assert_eq!(format_value(-std::f64::consts::LN_2), "-0.693147181");
        assert_eq!(format_value(1.234567891234e-12), "1.23456789e-12");
        assert_eq!(format_value(123456789012.0), "123456789000");
    }

    #[test]
    fn csv_schema() {
        let s = TimeSeries::with_business_days(vec![1.0, 0.5]).unwrap();
        let t = OutputTable::from_series("entropy", &s);
        assert_eq!(t.to_csv_string(), "timestamp,value\n2000-01-03,1\n2000-01-04,0.5\n");
        let back = read_series(t.to_csv_string().as_bytes(), true).unwrap();
        assert_eq!(back, s);
    }
}
