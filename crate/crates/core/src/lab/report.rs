//! Tabular experiment reports.

use crate::solver::sci;
use serde::Serialize;
use std::io::Write;

/// One pass/fail criterion of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A labelled row of numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    /// The configuration the report was produced from.
    pub config: serde_json::Value,
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: &impl Serialize, columns: &[&str]) -> Self {
        Self {
            experiment: experiment.into(),
            config: serde_json::to_value(config).unwrap_or(serde_json::Value::Null),
            notes: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn row(&mut self, label: impl Into<String>, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(Row { label: label.into(), values });
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Column `name` of every row.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The table as CSV with a leading `label` column.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "label,{}", self.columns.join(","))?;
        for r in &self.rows {
            let v: Vec<String> = r.values.iter().map(|x| sci(*x)).collect();
            writeln!(w, "{},{}", r.label, v.join(","))?;
        }
        Ok(())
    }
}
