//! Measured fluid temperatures from CSV.
//!
//! Header `time_min,T_fluid_C[,err_C]`; other columns are ignored so that a
//! simulation output table can be read back as a series. Lines starting with
//! `#` are comments.

use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::{ExperimentalPoint, ExperimentalSeries};
use crate::units::{celsius_to_kelvin, minutes_to_seconds};

pub const TIME_COLUMN: &str = "time_min";
pub const FLUID_COLUMN: &str = "T_fluid_C";
pub const ERROR_COLUMN: &str = "err_C";

fn cell(record: &csv::StringRecord, idx: usize, name: &str, row: u64) -> Result<f64> {
    let raw = record.get(idx).ok_or_else(|| Error::Csv {
        row,
        message: format!("missing value for `{name}`"),
    })?;
    let v: f64 = raw.trim().parse().map_err(|_| Error::Csv {
        row,
        message: format!("`{name}` is not a number: {raw:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Csv {
            row,
            message: format!("`{name}` must be finite, got {raw:?}"),
        });
    }
    Ok(v)
}

pub fn parse_experimental_csv(bytes: &[u8]) -> Result<ExperimentalSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(bytes);

    let headers = reader
        .headers()
        .map_err(|e| Error::Csv {
            row: 1,
            message: e.to_string(),
        })?
        .clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let time_idx = find(TIME_COLUMN).ok_or_else(|| Error::Csv {
        row: 1,
        message: format!("missing column `{TIME_COLUMN}`"),
    })?;
    let fluid_idx = find(FLUID_COLUMN).ok_or_else(|| Error::Csv {
        row: 1,
        message: format!("missing column `{FLUID_COLUMN}`"),
    })?;
    let err_idx = find(ERROR_COLUMN);

    let mut points: Vec<ExperimentalPoint> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Csv {
            row: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line());
        let time_min = cell(&record, time_idx, TIME_COLUMN, row)?;
        let fluid_c = cell(&record, fluid_idx, FLUID_COLUMN, row)?;
        let uncertainty = match err_idx {
            Some(i) if record.get(i).is_some_and(|s| !s.is_empty()) => {
                let u = cell(&record, i, ERROR_COLUMN, row)?;
                if u < 0.0 {
                    return Err(Error::Csv {
                        row,
                        message: format!("`{ERROR_COLUMN}` must be >= 0, got {u}"),
                    });
                }
                Some(u)
            }
            _ => None,
        };
        let t_fluid = celsius_to_kelvin(fluid_c);
        if t_fluid <= 0.0 {
            return Err(Error::Csv {
                row,
                message: format!("temperature {fluid_c} °C is below absolute zero"),
            });
        }
        let time = minutes_to_seconds(time_min);
        if let Some(prev) = points.last() {
            if time <= prev.time {
                return Err(Error::Csv {
                    row,
                    message: "times must be strictly increasing".into(),
                });
            }
        }
        points.push(ExperimentalPoint {
            time,
            t_fluid,
            uncertainty,
        });
    }
    if points.len() < 2 {
        return Err(Error::Csv {
            row: 1,
            message: format!("at least 2 data rows are required, found {}", points.len()),
        });
    }
    ExperimentalSeries::new(points, None)
}

pub fn load_experimental_csv(path: impl AsRef<Path>) -> Result<ExperimentalSeries> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_experimental_csv(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_rows_convert_to_si() {
        let s = parse_experimental_csv(b"time_min,T_fluid_C\n0,25\n10,30\n").unwrap();
        let p = s.points();
        assert_eq!(p.len(), 2);
        assert_eq!((p[0].time, p[1].time), (0.0, 600.0));
        assert_eq!((p[0].t_fluid, p[1].t_fluid), (298.15, 303.15));
        assert_eq!(p[0].uncertainty, None);
    }

    #[test]
    fn error_column_and_comments() {
        let s = parse_experimental_csv(
            b"# field test, illustrative\ntime_min,T_fluid_C,err_C\n0,25,0.34\n# mid\n10,30,0.34\n",
        )
        .unwrap();
        assert!(s.points().iter().all(|p| p.uncertainty == Some(0.34)));
    }

    #[test]
    fn rejects_bad_input_with_row_numbers() {
        let one = parse_experimental_csv(b"time_min,T_fluid_C\n0,25\n").unwrap_err();
        assert!(one.to_string().contains("at least 2"), "{one}");

        let err = parse_experimental_csv(b"time_min,T_fluid_C\n0,25\n10,abc\n").unwrap_err();
        assert!(matches!(err, Error::Csv { row: 3, .. }), "{err}");

        let err = parse_experimental_csv(b"time_min,T_fluid_C\n0,25\n10,30\n10,31\n").unwrap_err();
        assert!(matches!(err, Error::Csv { row: 4, .. }), "{err}");

        let err = parse_experimental_csv(b"time,T_fluid_C\n0,25\n10,30\n").unwrap_err();
        assert!(err.to_string().contains("time_min"), "{err}");

        let err = parse_experimental_csv(b"time_min,T_fluid_C,err_C\n0,25,-1\n10,30,0\n").unwrap_err();
        assert!(matches!(err, Error::Csv { row: 2, .. }), "{err}");

        let err = parse_experimental_csv(b"time_min,T_fluid_C\n0,25\n10\n").unwrap_err();
        assert!(matches!(err, Error::Csv { row: 3, .. }), "{err}");
    }
}
