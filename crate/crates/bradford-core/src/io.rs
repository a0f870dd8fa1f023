//! File formats: bibliography ingestion (two CSV schemas), CSV artifact
//! writers and their round-trip readers, and input checksums.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::curve::{CurveSample, Zone};
use crate::error::{Error, Result};
use crate::model::{FrequencyTable, RankedBibliography};

fn ingest_err(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Ingest {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Hex SHA-256 of a file's contents.
pub fn sha256_hex(path: &Path) -> Result<String> {
    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

fn parse_u64(path: &Path, line: u64, what: &str, raw: &str) -> Result<u64> {
    raw.trim().parse::<u64>().map_err(|_| {
        ingest_err(
            path,
            line,
            format!("{what} '{raw}' is not a nonnegative integer"),
        )
    })
}

fn parse_f64(path: &Path, line: u64, what: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| ingest_err(path, line, format!("{what} '{raw}' is not a number")))
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn field<'a>(
    path: &Path,
    record: &'a csv::StringRecord,
    idx: usize,
    what: &str,
) -> Result<&'a str> {
    record
        .get(idx)
        .ok_or_else(|| ingest_err(path, record_line(record), format!("missing {what} column")))
}

/// Reads a bibliography in either accepted schema, detected by header:
/// frequency form `n,count` (count journals holding exactly n papers) or
/// ranked form `rank,articles` (one journal per row). All values must be
/// nonnegative integers; every journal holds at least one paper.
pub fn read_bibliography(path: &Path) -> Result<RankedBibliography> {
    const MAX_JOURNALS: u64 = 100_000_000;

    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let frequency_form = match headers
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .as_slice()
    {
        ["n", "count"] => true,
        ["rank", "articles"] => false,
        other => {
            return Err(ingest_err(
                path,
                1,
                format!(
                    "unrecognized header '{}'; expected 'n,count' or 'rank,articles'",
                    other.join(",")
                ),
            ))
        }
    };

    let mut sizes: Vec<u64> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record_line(&record);
        if frequency_form {
            let n = parse_u64(path, line, "productivity", field(path, &record, 0, "n")?)?;
            let count = parse_u64(path, line, "count", field(path, &record, 1, "count")?)?;
            if n == 0 {
                return Err(ingest_err(path, line, "productivity must be at least 1"));
            }
            if sizes.len() as u64 + count > MAX_JOURNALS {
                return Err(ingest_err(
                    path,
                    line,
                    format!("more than {MAX_JOURNALS} journals"),
                ));
            }
            sizes.extend(std::iter::repeat_n(n, count as usize));
        } else {
            let _rank = parse_u64(path, line, "rank", field(path, &record, 0, "rank")?)?;
            let articles = parse_u64(path, line, "articles", field(path, &record, 1, "articles")?)?;
            if articles == 0 {
                return Err(ingest_err(path, line, "articles must be at least 1"));
            }
            sizes.push(articles);
        }
    }
    if sizes.is_empty() {
        return Err(ingest_err(path, 1, "no journals in file"));
    }
    RankedBibliography::new(sizes)
}

/// Writes a frequency table as `n,count`; counts keep full f64 precision
/// so ensemble means round-trip.
pub fn write_frequency_csv(path: &Path, table: &FrequencyTable) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["n", "count"])?;
    for (n, count) in table.iter() {
        writer.write_record([n.to_string(), count.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a real-valued frequency table written by [`write_frequency_csv`].
pub fn read_frequency_csv(path: &Path) -> Result<FrequencyTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut table = FrequencyTable::new();
    for record in reader.records() {
        let record = record?;
        let line = record_line(&record);
        let n = parse_u64(path, line, "productivity", field(path, &record, 0, "n")?)?;
        let count = parse_f64(path, line, "count", field(path, &record, 1, "count")?)?;
        if n == 0 || count.is_nan() || count < 0.0 {
            return Err(ingest_err(path, line, "invalid frequency row"));
        }
        table.add(n, count);
    }
    Ok(table)
}

/// Writes a ranked bibliography as `rank,articles`, rank 1 first.
pub fn write_ranked_csv(path: &Path, ranked: &RankedBibliography) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["rank", "articles"])?;
    for (i, &size) in ranked.sizes().iter().enumerate() {
        writer.write_record([(i + 1).to_string(), size.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes curve samples as `r,R,zone`.
pub fn write_curve_csv(path: &Path, samples: &[CurveSample]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["r", "R", "zone"])?;
    for s in samples {
        writer.write_record([
            s.rank.to_string(),
            s.cumulative.to_string(),
            s.zone.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads curve samples written by [`write_curve_csv`].
pub fn read_curve_csv(path: &Path) -> Result<Vec<CurveSample>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record_line(&record);
        let rank = parse_f64(path, line, "rank", field(path, &record, 0, "r")?)?;
        let cumulative = parse_f64(path, line, "cumulative", field(path, &record, 1, "R")?)?;
        let zone = match field(path, &record, 2, "zone")? {
            "core" => Zone::Core,
            "normal" => Zone::Normal,
            other => {
                return Err(ingest_err(
                    path,
                    line,
                    format!("zone '{other}' is neither 'core' nor 'normal'"),
                ))
            }
        };
        samples.push(CurveSample {
            rank,
            cumulative,
            zone,
        });
    }
    Ok(samples)
}

/// Writes a dense cumulative curve (entry i is R at rank i+1) as `r,R`.
pub fn write_cumulative_csv(path: &Path, values: &[f64]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["r", "R"])?;
    for (i, &v) in values.iter().enumerate() {
        writer.write_record([(i + 1).to_string(), v.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a dense cumulative curve written by [`write_cumulative_csv`],
/// checking that ranks run 1, 2, 3, ...
pub fn read_cumulative_csv(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record_line(&record);
        let rank = parse_u64(path, line, "rank", field(path, &record, 0, "r")?)?;
        let value = parse_f64(path, line, "cumulative", field(path, &record, 1, "R")?)?;
        if rank as usize != values.len() + 1 {
            return Err(ingest_err(
                path,
                line,
                format!("rank {rank} out of order; expected {}", values.len() + 1),
            ));
        }
        values.push(value);
    }
    Ok(values)
}
