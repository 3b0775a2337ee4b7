//! `correlate`: Pearson correlation between the metric columns of two
//! sweep CSVs sharing the same lambda grid.

use std::path::Path;

use crate::cli::{format_sig6, CliError, CorrelateArgs};
use crate::metrics::pearson;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Lambda column, kept as the printed labels for exact grid comparison.
    pub lambdas: Vec<String>,
    pub columns: Vec<String>,
    /// Column-major metric values.
    pub values: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|i| self.values[i].as_slice())
    }
}

pub fn read_sweep_csv(path: &Path) -> Result<SweepTable, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot open {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::data(format!("{}: empty file", path.display())))?;
    let mut fields = header.split(',');
    if fields.next() != Some("lambda") {
        return Err(CliError::data(format!(
            "{}: first column must be `lambda`",
            path.display()
        )));
    }
    let columns: Vec<String> = fields.map(str::to_string).collect();
    let mut lambdas = Vec::new();
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); columns.len()];
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() + 1 {
            return Err(CliError::data(format!(
                "{}: line {}: expected {} fields, got {}",
                path.display(),
                idx + 1,
                columns.len() + 1,
                cells.len()
            )));
        }
        lambdas.push(cells[0].to_string());
        for (col, cell) in cells[1..].iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| {
                CliError::data(format!(
                    "{}: line {}: `{cell}` is not a number",
                    path.display(),
                    idx + 1
                ))
            })?;
            values[col].push(value);
        }
    }
    Ok(SweepTable {
        lambdas,
        columns,
        values,
    })
}

pub fn cmd_correlate(args: &CorrelateArgs) -> Result<(), CliError> {
    let left = read_sweep_csv(&args.left)?;
    let right = read_sweep_csv(&args.right)?;
    if left.lambdas.len() != right.lambdas.len() {
        return Err(CliError::data(format!(
            "lambda grids differ in length: {} vs {}",
            left.lambdas.len(),
            right.lambdas.len()
        )));
    }
    for (i, (a, b)) in left.lambdas.iter().zip(&right.lambdas).enumerate() {
        if a != b {
            return Err(CliError::data(format!(
                "lambda grids differ at row {}: {a} vs {b}",
                i + 1
            )));
        }
    }
    let columns: Vec<String> = match &args.columns {
        Some(requested) => requested.clone(),
        None => left
            .columns
            .iter()
            .filter(|c| right.columns.contains(c))
            .cloned()
            .collect(),
    };
    if columns.is_empty() {
        return Err(CliError::data("no shared metric columns to correlate"));
    }
    println!("{:<16} r", "column");
    for name in &columns {
        let x = left.column(name).ok_or_else(|| {
            CliError::data(format!("{}: no column `{name}`", args.left.display()))
        })?;
        let y = right.column(name).ok_or_else(|| {
            CliError::data(format!("{}: no column `{name}`", args.right.display()))
        })?;
        let r = pearson(x, y).map_err(|e| CliError::data(format!("column `{name}`: {e}")))?;
        println!("{name:<16} {}", format_sig6(r));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_sweep_csv() {
        let f = write_temp("lambda,r1_iou_0.5,r1_miou\n0.001,50,33.3\n0.002,25,10\n");
        let table = read_sweep_csv(f.path()).unwrap();
        assert_eq!(table.lambdas, vec!["0.001", "0.002"]);
        assert_eq!(table.columns, vec!["r1_iou_0.5", "r1_miou"]);
        assert_eq!(table.column("r1_miou").unwrap(), &[33.3, 10.0]);
        assert!(table.column("nope").is_none());
    }

    #[test]
    fn rejects_missing_lambda_header() {
        let f = write_temp("metric,value\nr1,50\n");
        assert!(read_sweep_csv(f.path()).is_err());
    }

    #[test]
    fn rejects_ragged_rows() {
        let f = write_temp("lambda,a,b\n0.001,50\n");
        let err = read_sweep_csv(f.path()).unwrap_err();
        assert!(err.message().contains("line 2"), "{}", err.message());
    }
}
