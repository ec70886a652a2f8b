//! CSV serialization of run histories and experiment summaries.
//!
//! Floats are written with 9 significant digits in `%g` style, integers
//! plainly, lines end in `\n`. Parsing a file and writing it back yields the
//! same bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::acet::{EpochRecord, IncrementCheck, RunHistory};
use crate::error::{Error, Result};
use crate::harness::aggregate::{Comparison, SummaryRow};

pub const HISTORY_HEADER: &str = "epoch,t,train_loss,train_acc,test_loss,test_acc,wall_s,updates,skipped";
pub const SUMMARY_HEADER: &str = "dataset,method,mean_acc,std_acc,mean_time_s,seeds";
pub const COMPARISON_HEADER: &str = "dataset,acc_delta,time_ratio";
pub const INCREMENTS_HEADER: &str = "t_from,t_to,measured_jump,bound";

/// `x` with 9 significant digits, fixed notation for moderate exponents and
/// scientific otherwise, trailing zeros removed.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn write_lines(path: &Path, header: &str, lines: impl IntoIterator<Item = String>) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut out = String::with_capacity(4096);
    out.push_str(header);
    out.push('\n');
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    fs::File::create(path)?.write_all(out.as_bytes())?;
    Ok(())
}

pub fn history_line(r: &EpochRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.epoch,
        fmt_sig9(r.t_value),
        fmt_sig9(r.train_loss),
        fmt_sig9(r.train_acc),
        fmt_sig9(r.test_loss),
        fmt_sig9(r.test_acc),
        fmt_sig9(r.epoch_wall_seconds),
        r.updates_performed,
        r.updates_skipped
    )
}

pub fn write_history_csv(history: &RunHistory, path: impl AsRef<Path>) -> Result<()> {
    write_records_csv(&history.records, path)
}

pub fn write_records_csv(records: &[EpochRecord], path: impl AsRef<Path>) -> Result<()> {
    write_lines(path.as_ref(), HISTORY_HEADER, records.iter().map(history_line))
}

fn reader(path: &Path, header: &str) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let got = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if got != header {
        return Err(Error::Format(format!(
            "{}: header {got:?}, expected {header:?}",
            path.display()
        )));
    }
    Ok(rdr)
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, path: &Path) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Format(format!("{}: bad field {i} in {rec:?}", path.display())))
}

pub fn read_history_csv(path: impl AsRef<Path>) -> Result<Vec<EpochRecord>> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for rec in reader(path, HISTORY_HEADER)?.records() {
        let rec = rec?;
        out.push(EpochRecord {
            epoch: field(&rec, 0, path)?,
            t_value: field(&rec, 1, path)?,
            train_loss: field(&rec, 2, path)?,
            train_acc: field(&rec, 3, path)?,
            test_loss: field(&rec, 4, path)?,
            test_acc: field(&rec, 5, path)?,
            epoch_wall_seconds: field(&rec, 6, path)?,
            updates_performed: field(&rec, 7, path)?,
            updates_skipped: field(&rec, 8, path)?,
        });
    }
    Ok(out)
}

pub fn write_summary_csv(rows: &[SummaryRow], path: impl AsRef<Path>) -> Result<()> {
    write_lines(
        path.as_ref(),
        SUMMARY_HEADER,
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.dataset,
                r.method,
                fmt_sig9(r.mean_acc),
                fmt_sig9(r.std_acc),
                fmt_sig9(r.mean_time_s),
                r.seeds
            )
        }),
    )
}

pub fn read_summary_csv(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for rec in reader(path, SUMMARY_HEADER)?.records() {
        let rec = rec?;
        out.push(SummaryRow {
            dataset: field(&rec, 0, path)?,
            method: field::<String>(&rec, 1, path)?.parse()?,
            mean_acc: field(&rec, 2, path)?,
            std_acc: field(&rec, 3, path)?,
            mean_time_s: field(&rec, 4, path)?,
            seeds: field(&rec, 5, path)?,
        });
    }
    Ok(out)
}

pub fn write_comparison_csv(rows: &[Comparison], path: impl AsRef<Path>) -> Result<()> {
    write_lines(
        path.as_ref(),
        COMPARISON_HEADER,
        rows.iter().map(|c| {
            format!(
                "{},{},{}",
                c.dataset,
                fmt_sig9(c.acc_delta),
                fmt_sig9(c.time_ratio)
            )
        }),
    )
}

pub fn write_increments_csv(checks: &[IncrementCheck], path: impl AsRef<Path>) -> Result<()> {
    write_lines(
        path.as_ref(),
        INCREMENTS_HEADER,
        checks.iter().map(|c| {
            format!(
                "{},{},{},{}",
                fmt_sig9(c.t_from),
                fmt_sig9(c.t_to),
                fmt_sig9(c.measured_jump),
                fmt_sig9(c.bound)
            )
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acet::Method;

    #[test]
    fn sig9_formatting() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(1.0), "1");
        assert_eq!(fmt_sig9(0.1), "0.1");
        assert_eq!(fmt_sig9(2.0 / 3.0), "0.666666667");
        assert_eq!(fmt_sig9(-123.456), "-123.456");
        assert_eq!(fmt_sig9(1e-7), "1e-7");
        assert_eq!(fmt_sig9(1.5e12), "1.5e12");
        assert_eq!(fmt_sig9(9.999999999), "10");
        assert_eq!(fmt_sig9(0.00012345678912), "0.000123456789");
    }

    fn sample_history() -> RunHistory {
        let mut h = RunHistory {
            method: Method::Acet,
            batches_per_epoch: 3,
            records: Vec::new(),
            increment_checks: Vec::new(),
            best_test_acc: 0.0,
            total_wall_seconds: 0.0,
            stopped_early: false,
            stop_reason: crate::acet::StopReason::EpochBudget,
        };
        for (i, t) in [0.1, 0.1, 0.2].into_iter().enumerate() {
            h.records.push(EpochRecord {
                epoch: i + 1,
                t_value: t,
                train_loss: 1.0 / (i as f64 + 3.0),
                train_acc: 0.5 + i as f64 / 7.0,
                test_loss: std::f64::consts::PI / (i + 1) as f64,
                test_acc: 2.0 / 3.0,
                epoch_wall_seconds: 0.001234,
                updates_performed: 3 - i,
                updates_skipped: i,
            });
        }
        h
    }

    #[test]
    fn history_file_shape_and_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.csv");
        write_history_csv(&sample_history(), &p).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with(&format!("{HISTORY_HEADER}\n")));
        assert!(!text.contains('\r'));

        let parsed = read_history_csv(&p).unwrap();
        let p2 = dir.path().join("h2.csv");
        write_records_csv(&parsed, &p2).unwrap();
        assert_eq!(fs::read(&p).unwrap(), fs::read(&p2).unwrap());
    }

    #[test]
    fn wrong_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        fs::write(&p, "a,b\n1,2\n").unwrap();
        assert!(matches!(read_history_csv(&p), Err(Error::Format(_))));
    }
}
