//! Point files and output sinks.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use cloneregion::region::RegionSample;
use cloneregion::report::SCHEMA_VERSION;
use cloneregion::Partition;
use serde::Serialize;

/// `-` is standard output.
pub fn open_out(path: &str) -> Result<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let file = File::create(path).with_context(|| format!("cannot create {path}"))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

/// Pretty JSON with a top-level `"schema"` field, newline-terminated.
pub fn write_json<T: Serialize>(path: &str, value: &T) -> Result<()> {
    let mut v = serde_json::to_value(value)?;
    if let serde_json::Value::Object(map) = &mut v {
        map.insert("schema".into(), SCHEMA_VERSION.into());
    }
    let mut out = open_out(path)?;
    serde_json::to_writer_pretty(&mut out, &v)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// One CSV row per sampled point: `lambda, a1..aD, F12..F1n`, where `D` is the
/// largest irrep dimension and shorter amplitude vectors leave cells empty.
/// A `#` comment line records the schema, `n`, seed and sample size.
pub fn write_sample_csv(path: &str, sample: &RegionSample) -> Result<()> {
    let width = sample
        .clouds
        .iter()
        .map(|c| c.lambda.dimension())
        .max()
        .unwrap_or(1);
    let mut out = open_out(path)?;
    writeln!(
        out,
        "# schema={SCHEMA_VERSION} n={} seed={} per_lambda={}",
        sample.n, sample.seed, sample.samples_per_lambda
    )?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["lambda".to_string()];
    header.extend((1..=width).map(|i| format!("a{i}")));
    header.extend((2..=sample.n).map(|k| format!("F1{k}")));
    w.write_record(&header)?;
    for cloud in &sample.clouds {
        let label = cloud
            .lambda
            .parts()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",");
        for point in &cloud.points {
            let mut row = Vec::with_capacity(header.len());
            row.push(label.clone());
            for i in 0..width {
                row.push(
                    point
                        .amplitudes
                        .get(i)
                        .map_or(String::new(), |a| a.to_string()),
                );
            }
            row.extend(point.fidelities.iter().map(|f| f.to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointRow {
    pub lambda: Partition,
    pub amplitudes: Vec<f64>,
    pub fidelities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFile {
    pub n: usize,
    pub seed: Option<u64>,
    pub rows: Vec<PointRow>,
}

fn header_field(line: &str, key: &str) -> Option<String> {
    line.trim_start_matches('#')
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
        .map(str::to_string)
}

/// Reads a file written by [`write_sample_csv`].
pub fn read_sample_csv(path: &Path) -> Result<PointFile> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut reader = BufReader::new(file);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    if !first.starts_with('#') {
        bail!("{}: missing '# schema=...' header line", path.display());
    }
    match header_field(&first, "schema").as_deref() {
        Some(v) if v == SCHEMA_VERSION.to_string() => {}
        other => bail!("{}: unsupported schema {other:?}", path.display()),
    }
    let seed = header_field(&first, "seed").and_then(|s| s.parse().ok());

    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = csv.headers()?.clone();
    if headers.get(0) != Some("lambda") {
        bail!("{}: first column must be 'lambda'", path.display());
    }
    let amp_cols: Vec<usize> = (0..headers.len())
        .filter(|&i| headers[i].starts_with('a'))
        .collect();
    let f_cols: Vec<usize> = (0..headers.len())
        .filter(|&i| headers[i].starts_with("F1"))
        .collect();
    let n = f_cols.len() + 1;
    if let Some(declared) = header_field(&first, "n").and_then(|s| s.parse::<usize>().ok()) {
        if declared != n {
            bail!(
                "{}: header says n={declared} but there are {} F columns",
                path.display(),
                n - 1
            );
        }
    }
    let parse = |s: &str, line: usize| -> Result<f64> {
        s.parse::<f64>()
            .with_context(|| format!("{}: bad number {s:?} on record {line}", path.display()))
    };
    let mut rows = Vec::new();
    for (line, record) in csv.records().enumerate() {
        let record = record?;
        let lambda: Partition = record[0].parse()?;
        let mut amplitudes = Vec::new();
        for &i in &amp_cols {
            if !record[i].is_empty() {
                amplitudes.push(parse(&record[i], line + 1)?);
            }
        }
        let fidelities = f_cols
            .iter()
            .map(|&i| parse(&record[i], line + 1))
            .collect::<Result<Vec<_>>>()?;
        rows.push(PointRow {
            lambda,
            amplitudes,
            fidelities,
        });
    }
    Ok(PointFile { n, seed, rows })
}

/// Comma-separated reals, e.g. `1,1,1` or `0.5, -0.25`.
pub fn parse_reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .with_context(|| format!("bad number {t:?}"))
        })
        .collect()
}
