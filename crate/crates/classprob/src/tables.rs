//! CSV in and out.

use std::io::Read;

use classprob_core::distributions::normal_table_value;
use classprob_core::estimation::LinearSystem;
use classprob_core::markov::TransitionMatrix;
use classprob_core::rational::{self, Rational};
use classprob_core::transforms::GridDensity;

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, String> {
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

/// Points `from, from + step, …` not beyond `to`; empty when `to < from`.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0) || !from.is_finite() || !to.is_finite() {
        return Err("need finite bounds and a positive step".into());
    }
    if to < from {
        return Ok(vec![]);
    }
    let count = ((to - from) / step + 1e-9).floor() as u64 + 1;
    if count > 10_000_000 {
        return Err(format!("{count} rows is too many"));
    }
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

/// `z,value` rows of `Φ₀(z) = Φ(z) − 1/2`.
pub fn normal_table(from: f64, to: f64, step: f64) -> Result<String, String> {
    let mut w = writer();
    w.write_record(["z", "value"]).map_err(|e| e.to_string())?;
    for z in grid(from, to, step)? {
        w.write_record([format!("{z:.2}"), format!("{:.10}", normal_table_value(z))]).map_err(|e| e.to_string())?;
    }
    finish(w)
}

pub fn grid_density(d: &GridDensity) -> Result<String, String> {
    let mut w = writer();
    w.write_record(["x", "density"]).map_err(|e| e.to_string())?;
    for (x, y) in d.abscissae().iter().zip(d.ordinates()) {
        w.write_record([x.to_string(), y.to_string()]).map_err(|e| e.to_string())?;
    }
    finish(w)
}

/// Header `state,<labels>`, then one row per state with `p/q` entries.
pub fn rational_matrix(m: &TransitionMatrix<Rational>) -> Result<String, String> {
    let mut w = writer();
    let mut header = vec!["state".to_string()];
    header.extend(m.labels().iter().cloned());
    w.write_record(&header).map_err(|e| e.to_string())?;
    for (label, row) in m.labels().iter().zip(m.rows()) {
        let mut record = vec![label.clone()];
        record.extend(row.iter().map(rational::to_fraction));
        w.write_record(&record).map_err(|e| e.to_string())?;
    }
    finish(w)
}

pub fn real_matrix(m: &TransitionMatrix<f64>) -> Result<String, String> {
    let mut w = writer();
    let mut header = vec!["state".to_string()];
    header.extend(m.labels().iter().cloned());
    w.write_record(&header).map_err(|e| e.to_string())?;
    for (label, row) in m.labels().iter().zip(m.rows()) {
        let mut record = vec![label.clone()];
        record.extend(row.iter().map(f64::to_string));
        w.write_record(&record).map_err(|e| e.to_string())?;
    }
    finish(w)
}

fn records(input: impl Read) -> Result<(Vec<String>, Vec<Vec<String>>), String> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = r.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    Ok((header, rows))
}

/// Reads `k` coefficient columns followed by the free-term column `w`.
pub fn read_linear_system(input: impl Read) -> Result<LinearSystem, String> {
    let (header, rows) = records(input)?;
    if header.len() < 2 {
        return Err("need at least one coefficient column and a `w` column".into());
    }
    if header.last().map(String::as_str) != Some("w") {
        return Err("the last column must be `w`".into());
    }
    let mut coefficients = Vec::with_capacity(rows.len());
    let mut free = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let values = row
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| format!("row {}: `{t}` is not a number", i + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        let (w, a) = values.split_last().ok_or_else(|| format!("row {} is empty", i + 1))?;
        coefficients.push(a.to_vec());
        free.push(*w);
    }
    LinearSystem::new(coefficients, free).map_err(|e| e.to_string())
}

/// Reads the layout written by [`rational_matrix`].
pub fn read_rational_matrix(input: impl Read) -> Result<TransitionMatrix<Rational>, String> {
    let (header, rows) = records(input)?;
    let labels: Vec<String> = header.into_iter().skip(1).collect();
    let mut m = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != labels.len() + 1 {
            return Err(format!("row {} has {} entries, expected {}", i + 1, row.len().saturating_sub(1), labels.len()));
        }
        if row[0] != labels.get(i).map_or("", String::as_str) {
            return Err(format!("row {} is labelled `{}`, expected `{}`", i + 1, row[0], labels.get(i).map_or("", String::as_str)));
        }
        m.push(row[1..].iter().map(|t| rational::parse_rational(t).map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>()?);
    }
    TransitionMatrix::with_labels(labels, m).map_err(|e| e.to_string())
}
