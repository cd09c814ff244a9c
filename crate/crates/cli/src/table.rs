//! CSV tables with provenance metadata.

use std::fmt::Write;

/// Where a column's numbers come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Input,
    Numeric,
    ClosedForm,
}

impl Provenance {
    fn name(self) -> &'static str {
        match self {
            Provenance::Input => "input",
            Provenance::Numeric => "numeric",
            Provenance::ClosedForm => "closed-form",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
    pub provenance: Provenance,
}

pub const fn col(name: &'static str, unit: &'static str, provenance: Provenance) -> Column {
    Column { name, unit, provenance }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k}={v}");
        }
        for c in &self.columns {
            let _ = writeln!(s, "# column {}: unit={}, source={}", c.name, c.unit, c.provenance.name());
        }
        let header: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
        s.push_str(&header.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Gnuplot script plotting every non-input column against the first.
    pub fn gnuplot_script(&self, csv_path: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set datafile commentschars '#'");
        let _ = writeln!(s, "set key autotitle columnhead");
        let _ = writeln!(s, "set logscale x");
        let _ = writeln!(s, "set xlabel '{}'", self.columns[0].name);
        let plots: Vec<String> = self
            .columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.provenance != Provenance::Input)
            .map(|(j, _)| format!("'{csv_path}' using 1:{} with linespoints", j + 1))
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        s
    }
}
