//! CSV reports: one or more blocks, each a header row followed by data rows,
//! separated by a blank line. Numbers carry 12 significant digits.

use std::fmt::Write as _;

/// Renders `x` in scientific notation with 12 significant digits.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.11e}")
    }
}

pub fn flag(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

/// Inverse of [`number`].
pub fn parse_number(s: &str) -> Option<f64> {
    match s {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Block {
    pub fn new(header: &[&str]) -> Block {
        Block {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric value of column `name` in row `row`.
    pub fn value(&self, row: usize, name: &str) -> Option<f64> {
        parse_number(self.rows.get(row)?.get(self.column(name)?)?)
    }

    pub fn values(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.column(name)?;
        self.rows.iter().map(|r| parse_number(&r[c])).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub blocks: Vec<Block>,
}

impl Report {
    pub fn push(&mut self, block: Block) {
        self.blocks.push(block);
    }

    /// First block whose header contains `column`.
    pub fn block_with(&self, column: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.column(column).is_some())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "{}", b.header.join(","));
            for row in &b.rows {
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Report {
        let mut report = Report::default();
        let mut current: Option<Block> = None;
        for line in text.lines() {
            if line.is_empty() {
                report.blocks.extend(current.take());
                continue;
            }
            let cells: Vec<String> = line.split(',').map(str::to_string).collect();
            match current.as_mut() {
                None => {
                    current = Some(Block {
                        header: cells,
                        rows: Vec::new(),
                    })
                }
                Some(b) => b.rows.push(cells),
            }
        }
        report.blocks.extend(current);
        report
    }
}
