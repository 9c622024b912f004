//! Coefficient tables as plain rows: `(coefficient, category, subcategory,
//! estimate, calibration)`. Each model turns the rows into its own typed
//! parameter struct.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::categories::Employment;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientRow {
    pub coefficient: String,
    pub category: String,
    pub subcategory: String,
    pub estimate: f64,
    pub calibration: f64,
}

impl CoefficientRow {
    pub fn new(coefficient: &str, category: &str, subcategory: &str, estimate: f64) -> Self {
        CoefficientRow {
            coefficient: coefficient.into(),
            category: category.into(),
            subcategory: subcategory.into(),
            estimate,
            calibration: 0.0,
        }
    }

    pub fn calibrated(mut self, calibration: f64) -> Self {
        self.calibration = calibration;
        self
    }

    /// Estimate plus calibration offset.
    pub fn value(&self) -> f64 {
        self.estimate + self.calibration
    }
}

pub(crate) type RowKey = (String, String, String);

/// Rows keyed by `(coefficient, category, subcategory)`, duplicates rejected.
pub(crate) fn index_rows(rows: &[CoefficientRow], known: &[&str]) -> Result<BTreeMap<RowKey, CoefficientRow>> {
    let mut out = BTreeMap::new();
    for row in rows {
        if !known.contains(&row.coefficient.as_str()) {
            return Err(Error::InvalidParams(format!(
                "unknown coefficient `{}`",
                row.coefficient
            )));
        }
        if !row.estimate.is_finite() || !row.calibration.is_finite() {
            return Err(Error::InvalidParams(format!(
                "non-finite value for `{}/{}/{}`",
                row.coefficient, row.category, row.subcategory
            )));
        }
        let key = (row.coefficient.clone(), row.category.clone(), row.subcategory.clone());
        if out.insert(key, row.clone()).is_some() {
            return Err(Error::InvalidParams(format!(
                "duplicate row `{}/{}/{}`",
                row.coefficient, row.category, row.subcategory
            )));
        }
    }
    Ok(out)
}

/// Employment levels addressed by a table category. `student` stands for all
/// three student levels.
pub(crate) fn employment_levels(category: &str) -> Result<Vec<Employment>> {
    if category == "student" {
        return Ok(alloc::vec![
            Employment::StudentPrimary,
            Employment::StudentSecondary,
            Employment::StudentTertiary,
        ]);
    }
    Ok(alloc::vec![category.parse()?])
}
