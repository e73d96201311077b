//! Report and table writers.

use std::fs::File;
use std::path::Path;

use idcalc::report::Outcome;
use idcalc::VerificationReport;
use serde::Serialize;

use crate::CliResult;

#[derive(Debug, Clone, Serialize)]
pub struct ExponentRow {
    pub y: Vec<f64>,
    pub re: f64,
    pub im: f64,
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// CSV columns `y0,…,y{d−1},re,im`, or JSON `{label, points}`.
pub fn write_exponent_table(label: &str, rows: &[ExponentRow], path: &Path) -> CliResult<()> {
    let file = File::create(path)?;
    if is_csv(path) {
        let mut w = csv::Writer::from_writer(file);
        let d = rows.first().map_or(0, |r| r.y.len());
        let mut header: Vec<String> = (0..d).map(|i| format!("y{i}")).collect();
        header.extend(["re".to_string(), "im".to_string()]);
        w.write_record(&header).map_err(std::io::Error::from)?;
        for r in rows {
            let mut rec: Vec<String> = r.y.iter().map(|v| v.to_string()).collect();
            rec.push(format!("{:e}", r.re));
            rec.push(format!("{:e}", r.im));
            w.write_record(&rec).map_err(std::io::Error::from)?;
        }
        w.flush()?;
    } else {
        let doc = serde_json::json!({ "label": label, "points": rows });
        serde_json::to_writer_pretty(file, &doc).map_err(std::io::Error::from)?;
    }
    Ok(())
}

/// A single report is written as an object, several as an array.
pub fn write_reports(reports: &[VerificationReport], path: &Path) -> CliResult<()> {
    let file = File::create(path)?;
    let res = if reports.len() == 1 {
        serde_json::to_writer_pretty(file, &reports[0])
    } else {
        serde_json::to_writer_pretty(file, reports)
    };
    res.map_err(std::io::Error::from)?;
    Ok(())
}

pub fn print_summary(r: &VerificationReport) {
    let verdict = match r.outcome {
        Outcome::Pass => "PASS",
        Outcome::Fail => "FAIL",
        Outcome::Inconclusive => "INCONCLUSIVE",
    };
    let beta = r.beta.map_or(String::new(), |b| format!(" beta={b}"));
    println!(
        "{verdict:<12} {}{beta} [{}] max |diff| = {:.3e} (tol {:.1e})",
        r.identity, r.subject, r.grid_max_abs, r.tolerance
    );
    for n in &r.notes {
        println!("             note: {n}");
    }
}
