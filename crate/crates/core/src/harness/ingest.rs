//! Two-column CSV input.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::data::Sample;
use crate::error::{Error, Result};

/// Reads the first two columns of a CSV file. A first row that does not
/// parse as numbers is taken as a header.
pub fn ingest_csv(path: impl AsRef<Path>) -> Result<Sample> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_csv(file)
}

pub fn parse_csv<R: Read>(reader: R) -> Result<Sample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(i as u64 + 1, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() < 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected two columns, found {}", record.len()),
            });
        }
        let cell = |j: usize| record[j].parse::<f64>().ok().filter(|v| v.is_finite());
        match (cell(0), cell(1)) {
            (Some(a), Some(b)) => {
                x.push(a);
                y.push(b);
            }
            _ if i == 0 => continue,
            (a, _) => {
                let bad = if a.is_none() { &record[0] } else { &record[1] };
                return Err(Error::Parse {
                    line,
                    message: format!("'{bad}' is not a finite number"),
                });
            }
        }
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: x.len(),
        });
    }
    Sample::new(x, y)
}
