//! CSV renderings of the reference tables and the equipoise CDF curves.

use serde::{Deserialize, Serialize};

use crate::equipoise::{EquipoiseModel, JointEquipoiseModel};
use crate::error::{Error, Result};
use crate::gs::{table2, LrConvention};
use crate::odds::table1;
use crate::plan::table4;

/// Percentiles tabulated for the product of two independent BP(1,1) odds.
pub const TABLE3_PERCENTILES: [f64; 7] = [0.5, 0.8, 0.85, 0.9, 0.95, 0.975, 0.99];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table3Row {
    pub percentile: f64,
    pub threshold: f64,
}

pub fn table3() -> Result<Vec<Table3Row>> {
    let joint = JointEquipoiseModel::BP11_SQUARED;
    TABLE3_PERCENTILES
        .iter()
        .map(|&p| Ok(Table3Row { percentile: p, threshold: joint.product_quantile(p)? }))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Figure1Row {
    pub odds: f64,
    pub cdf_bp11: f64,
    pub cdf_bp0505: f64,
    pub cdf_bp12: f64,
}

/// Odds grid: twentieths up to 1, then every integer up to 200.
pub fn figure1_grid() -> Vec<f64> {
    (1..=20).map(|k| k as f64 / 20.0).chain((2..=200).map(f64::from)).collect()
}

pub fn figure1() -> Result<Vec<Figure1Row>> {
    let grid = figure1_grid();
    let curves = [EquipoiseModel::BP11, EquipoiseModel::BP0505, EquipoiseModel::BP12]
        .iter()
        .map(|m| m.figure1_curve(&grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(grid
        .iter()
        .enumerate()
        .map(|(i, &odds)| Figure1Row {
            odds,
            cdf_bp11: curves[0][i].1,
            cdf_bp0505: curves[1][i].1,
            cdf_bp12: curves[2][i].1,
        })
        .collect())
}

/// Reproducible outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Table1,
    Table2,
    Table3,
    Table4,
    Figure1,
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "table1" => Target::Table1,
            "table2" => Target::Table2,
            "table3" => Target::Table3,
            "table4" => Target::Table4,
            "figure1" => Target::Figure1,
            other => return Err(Error::Config(format!("unknown target `{other}`"))),
        })
    }
}

/// Integral values print without a trailing `.0`; everything else keeps the
/// shortest representation that round-trips.
fn trim_number(field: &str) -> &str {
    match field.strip_suffix(".0") {
        Some(head) if field.parse::<f64>().is_ok() => head,
        _ => field,
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let err = |e: csv::Error| Error::Config(e.to_string());
    let mut raw = csv::Writer::from_writer(Vec::new());
    for row in rows {
        raw.serialize(row).map_err(err)?;
    }
    let raw = raw.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(raw.as_slice());
    let mut out = csv::Writer::from_writer(Vec::new());
    for record in reader.records() {
        let record = record.map_err(err)?;
        out.write_record(record.iter().map(trim_number)).map_err(err)?;
    }
    let bytes = out.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// CSV text for `target`, full precision.
pub fn render(target: Target, convention: LrConvention) -> Result<String> {
    match target {
        Target::Table1 => to_csv(&table1()),
        Target::Table2 => to_csv(&table2(convention)?),
        Target::Table3 => to_csv(&table3()?),
        Target::Table4 => to_csv(&table4(convention)?),
        Target::Figure1 => to_csv(&figure1()?),
    }
}
