//! Daily OHLCV bars and their CSV form. The expected layout is the one
//! emitted by common public market-data tooling:
//!
//! ```text
//! Date,Open,High,Low,Close,Adj Close,Volume
//! 2021-01-04,133.52,133.61,126.76,129.41,127.17,143301900
//! ```
//!
//! Header matching is case-insensitive and order-free; extra columns are
//! ignored. Rows violating the bar invariants are rejected with their
//! one-based row number.

use chrono::NaiveDate;

use crate::error::{DataError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OhlcvBar {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub adj_close: f64,
    pub volume: f64,
}

impl OhlcvBar {
    pub fn validate(&self) -> std::result::Result<(), String> {
        let fields = [
            ("open", self.open),
            ("high", self.high),
            ("low", self.low),
            ("close", self.close),
            ("adj close", self.adj_close),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(format!("{name} must be a positive real, got {v}"));
            }
        }
        if !self.volume.is_finite() || self.volume < 0.0 {
            return Err(format!("volume must be nonnegative, got {}", self.volume));
        }
        let body_lo = self.open.min(self.close);
        let body_hi = self.open.max(self.close);
        if self.low > body_lo || body_hi > self.high {
            return Err(format!(
                "price order violated: low {} <= min(open, close) {} <= max(open, close) {} <= high {}",
                self.low, body_lo, body_hi, self.high
            ));
        }
        Ok(())
    }
}

const REQUIRED: [&str; 7] = ["date", "open", "high", "low", "close", "adj close", "volume"];

/// Parse CSV text into bars sorted by ascending date.
pub fn parse_csv(text: &str) -> Result<Vec<OhlcvBar>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| DataError::Format(format!("unreadable header: {e}")))?
        .clone();
    let mut columns = [usize::MAX; 7];
    for (idx, header) in headers.iter().enumerate() {
        let name = header.to_ascii_lowercase();
        if let Some(pos) = REQUIRED.iter().position(|&r| r == name) {
            columns[pos] = idx;
        }
    }
    if let Some(pos) = columns.iter().position(|&c| c == usize::MAX) {
        return Err(DataError::Format(format!("missing column '{}'", REQUIRED[pos])));
    }

    let mut bars = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // one-based, after the header
        let record = record.map_err(|e| DataError::Row { row, msg: format!("unreadable: {e}") })?;
        let field = |pos: usize| -> Result<&str> {
            record
                .get(columns[pos])
                .ok_or_else(|| DataError::Row { row, msg: format!("missing field '{}'", REQUIRED[pos]) })
        };
        let number = |pos: usize| -> Result<f64> {
            let raw = field(pos)?;
            raw.parse().map_err(|_| DataError::Row {
                row,
                msg: format!("bad number '{raw}' in column '{}'", REQUIRED[pos]),
            })
        };
        let raw_date = field(0)?;
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d").map_err(|_| DataError::Row {
            row,
            msg: format!("bad date '{raw_date}' (expected YYYY-MM-DD)"),
        })?;
        let bar = OhlcvBar {
            date,
            open: number(1)?,
            high: number(2)?,
            low: number(3)?,
            close: number(4)?,
            adj_close: number(5)?,
            volume: number(6)?,
        };
        bar.validate().map_err(|msg| DataError::Row { row, msg })?;
        bars.push(bar);
    }
    if bars.is_empty() {
        return Err(DataError::Format("no data rows".into()));
    }
    bars.sort_by_key(|b| b.date);
    for pair in bars.windows(2) {
        if pair[0].date == pair[1].date {
            return Err(DataError::Format(format!("duplicate date {}", pair[0].date)));
        }
    }
    Ok(bars)
}

/// Canonical CSV form; floats use Rust's shortest round-tripping notation, so
/// `parse_csv(emit_csv(bars)) == bars` holds exactly.
pub fn emit_csv(bars: &[OhlcvBar]) -> String {
    let mut out = String::from("Date,Open,High,Low,Close,Adj Close,Volume\n");
    for bar in bars {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            bar.date, bar.open, bar.high, bar.low, bar.close, bar.adj_close, bar.volume
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_ROW: &str = "Date,Open,High,Low,Close,Adj Close,Volume\n2021-01-04,10.0,11.0,9.5,10.5,10.4,12345\n";

    #[test]
    fn single_row_parses_exactly() {
        let bars = parse_csv(ONE_ROW).unwrap();
        assert_eq!(bars.len(), 1);
        let bar = &bars[0];
        assert_eq!(bar.date, NaiveDate::from_ymd_opt(2021, 1, 4).unwrap());
        assert_eq!(bar.open, 10.0);
        assert_eq!(bar.high, 11.0);
        assert_eq!(bar.low, 9.5);
        assert_eq!(bar.close, 10.5);
        assert_eq!(bar.adj_close, 10.4);
        assert_eq!(bar.volume, 12345.0);
    }

    #[test]
    fn low_above_high_rejected_with_row_number() {
        let text = "Date,Open,High,Low,Close,Adj Close,Volume\n\
                    2021-01-04,10.0,11.0,9.5,10.5,10.4,100\n\
                    2021-01-05,10.0,9.0,12.0,10.5,10.4,100\n";
        match parse_csv(text) {
            Err(DataError::Row { row, .. }) => assert_eq!(row, 3),
            other => panic!("expected row error, got {other:?}"),
        }
    }

    #[test]
    fn shuffled_dates_come_out_sorted() {
        let text = "Date,Open,High,Low,Close,Adj Close,Volume\n\
                    2021-01-06,10,11,9,10,10,1\n\
                    2021-01-04,10,11,9,10,10,1\n\
                    2021-01-05,10,11,9,10,10,1\n";
        let bars = parse_csv(text).unwrap();
        let dates: Vec<String> = bars.iter().map(|b| b.date.to_string()).collect();
        assert_eq!(dates, ["2021-01-04", "2021-01-05", "2021-01-06"]);
    }

    #[test]
    fn header_matching_is_case_insensitive_and_order_free() {
        let text = "volume,ADJ CLOSE,close,LOW,high,open,DATE\n\
                    500,10.4,10.5,9.5,11.0,10.0,2021-01-04\n";
        let bars = parse_csv(text).unwrap();
        assert_eq!(bars[0].volume, 500.0);
        assert_eq!(bars[0].adj_close, 10.4);
    }

    #[test]
    fn missing_column_and_empty_file_are_format_errors() {
        assert!(matches!(
            parse_csv("Date,Open,High,Low,Close,Volume\n"),
            Err(DataError::Format(_))
        ));
        assert!(matches!(
            parse_csv("Date,Open,High,Low,Close,Adj Close,Volume\n"),
            Err(DataError::Format(_))
        ));
    }

    #[test]
    fn bad_number_names_row_and_column() {
        let text = "Date,Open,High,Low,Close,Adj Close,Volume\n\
                    2021-01-04,10.0,11.0,9.5,oops,10.4,100\n";
        match parse_csv(text) {
            Err(DataError::Row { row, msg }) => {
                assert_eq!(row, 2);
                assert!(msg.contains("close"));
            }
            other => panic!("expected row error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_dates_rejected() {
        let text = "Date,Open,High,Low,Close,Adj Close,Volume\n\
                    2021-01-04,10,11,9,10,10,1\n\
                    2021-01-04,10,11,9,10,10,1\n";
        assert!(matches!(parse_csv(text), Err(DataError::Format(_))));
    }
}
