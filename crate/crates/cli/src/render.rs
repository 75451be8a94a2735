//! Table, CSV and JSON output.

use relplp_core::relevance::{HypothesisReport, SelectionError, SelectionResult};
use serde_json::{json, Value};

use crate::Format;

pub(crate) fn fixed(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.4}")
    } else if v > 0.0 {
        "inf".into()
    } else if v < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

pub(crate) fn table(r: &HypothesisReport) -> String {
    let header = "Assumption (thought)";
    let width = r
        .rows
        .iter()
        .map(|row| row.query.to_string().len() + 1)
        .chain([header.len()])
        .max()
        .unwrap_or(0)
        + 2;
    let mut out = format!("hypothesis: {}\n", r.label);
    out.push_str(&format!("{header:<width$}{:<11}{:<11}{}\n", "P (prior)", "P (after)", "KLD"));
    for row in &r.rows {
        let name = format!("{}:", row.query);
        out.push_str(&format!(
            "{name:<width$}{:<11}{:<11}{}\n",
            fixed(row.prior),
            fixed(row.posterior),
            fixed(row.kld)
        ));
    }
    out.push_str(&format!("herbrand base: {}, satisfied: {}\n", r.herbrand, r.satisfied));
    out.push_str(&format!("{:<width$}{:<22}{}\n", "total", "", fixed(r.total_kld)));
    out
}

fn csv_rows(writer: &mut csv::Writer<Vec<u8>>, r: &HypothesisReport) {
    let herbrand = r.herbrand.to_string();
    let satisfied = r.satisfied.to_string();
    for row in &r.rows {
        let query = row.query.to_string();
        let prior = row.prior.to_string();
        let posterior = row.posterior.to_string();
        let kld = row.kld.to_string();
        writer
            .write_record([r.label.as_str(), &query, &prior, &posterior, &kld, &herbrand, &satisfied])
            .expect("writing to memory");
    }
    let total = r.total_kld.to_string();
    writer
        .write_record([r.label.as_str(), "total", "", "", &total, &herbrand, &satisfied])
        .expect("writing to memory");
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["label", "query", "prior", "posterior", "kld", "herbrand", "satisfied"])
        .expect("writing to memory");
    writer
}

fn csv_finish(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}

pub(crate) fn report(r: &HypothesisReport, format: Format) -> String {
    match format {
        Format::Table => table(r),
        Format::Csv => {
            let mut writer = csv_writer();
            csv_rows(&mut writer, r);
            csv_finish(writer)
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

fn selection_json(selection: &Result<SelectionResult, SelectionError>) -> Value {
    match selection {
        Ok(s) => serde_json::to_value(s).expect("selection serializes"),
        Err(SelectionError::NoInterpretation { eliminated }) => json!({
            "winner": null,
            "eliminated": eliminated,
            "trace": [],
        }),
        Err(SelectionError::Empty) => Value::Null,
    }
}

pub(crate) fn comparison(
    reports: &[HypothesisReport],
    selection: &Result<SelectionResult, SelectionError>,
    format: Format,
) -> String {
    match format {
        Format::Table => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&table(r));
                out.push('\n');
            }
            out.push_str("selection:\n");
            match selection {
                Ok(s) => {
                    for line in &s.trace {
                        out.push_str(&format!("  {line}\n"));
                    }
                    out.push_str(&format!("winner: {}\n", s.winner));
                }
                Err(SelectionError::NoInterpretation { eliminated }) => {
                    for e in eliminated {
                        out.push_str(&format!("  step 1: {} eliminated, relevance expectations not satisfied\n", e.label));
                    }
                    out.push_str("winner: none\n");
                }
                Err(SelectionError::Empty) => out.push_str("winner: none\n"),
            }
            out
        }
        Format::Csv => {
            let mut writer = csv_writer();
            for r in reports {
                csv_rows(&mut writer, r);
            }
            if let Ok(s) = selection {
                let winner = reports.iter().find(|r| r.label == s.winner).expect("winner is a report");
                let total = winner.total_kld.to_string();
                let herbrand = winner.herbrand.to_string();
                writer
                    .write_record([s.winner.as_str(), "winner", "", "", &total, &herbrand, "true"])
                    .expect("writing to memory");
            }
            csv_finish(writer)
        }
        Format::Json => {
            let value = json!({
                "reports": reports,
                "selection": selection_json(selection),
            });
            let mut s = serde_json::to_string_pretty(&value).expect("comparison serializes");
            s.push('\n');
            s
        }
    }
}
