//! Per-node field tables written as CSV.

use std::io::Write;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Flag(bool),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Flag(b) => u8::from(b).to_string(),
        }
    }
}

/// Rows of `(u1, u2, fields...)`, one per grid node, with the fields in
/// alphabetical order.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDump {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl FieldDump {
    /// `fields` is sorted and deduplicated; `value(node, field)` fills the
    /// table.
    pub fn build<F>(nodes: &[(f64, f64)], fields: &[String], mut value: F) -> Result<FieldDump, CliError>
    where
        F: FnMut(usize, &str) -> Result<Cell, CliError>,
    {
        let mut names: Vec<String> = fields.to_vec();
        names.sort();
        names.dedup();
        let mut rows = Vec::with_capacity(nodes.len());
        for (i, &(a, b)) in nodes.iter().enumerate() {
            let mut row = vec![Cell::Real(a), Cell::Real(b)];
            for n in &names {
                row.push(value(i, n)?);
            }
            rows.push(row);
        }
        let mut header = vec!["u1".to_string(), "u2".to_string()];
        header.extend(names);
        Ok(FieldDump { header, rows })
    }

    pub fn write<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| c.render()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is ascii")
    }
}
