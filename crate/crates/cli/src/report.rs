//! Report rendering: one table per command, emitted as aligned text, CSV,
//! or line-delimited JSON. All numeric output carries 12 significant
//! digits and the rendering is byte-deterministic for a fixed table.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Num(f64),
    Bool(bool),
}

impl Cell {
    fn as_unquoted(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => format_sig(*x),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn as_json(&self) -> String {
        match self {
            Cell::Text(s) => format!("\"{}\"", escape_json(s)),
            Cell::Num(x) => format_sig(*x),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// 12 significant digits, scientific notation, negative zero normalized.
pub fn format_sig(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn escape_json(s: &str) -> String {
    s.chars()
        .flat_map(|c| match c {
            '"' => "\\\"".chars().collect::<Vec<_>>(),
            '\\' => "\\\\".chars().collect(),
            '\n' => "\\n".chars().collect(),
            c => vec![c],
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, title: &str) -> String {
        match format {
            Format::Text => self.render_text(title),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_text(&self, title: &str) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(Cell::as_unquoted).collect())
            .collect();
        for row in &cells {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        out.push_str("# ");
        out.push_str(title);
        out.push('\n');
        for (i, col) in self.columns.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!("{col:<width$}", width = widths[i]));
        }
        out.push('\n');
        for row in &cells {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(&format!("{cell:<width$}", width = widths[i]));
            }
            out.push('\n');
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| {
                    let s = c.as_unquoted();
                    if s.contains(',') || s.contains('"') {
                        format!("\"{}\"", s.replace('"', "\"\""))
                    } else {
                        s
                    }
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row.iter())
                .map(|(col, cell)| format!("\"{}\":{}", col, cell.as_json()))
                .collect();
            out.push('{');
            out.push_str(&fields.join(","));
            out.push_str("}\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(format_sig(-0.0), "0.00000000000e0");
        assert_eq!(format_sig(2.0678338484619295e-15), "2.06783384846e-15");
    }

    #[test]
    fn csv_and_json_shapes() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Cell::Num(1.0), Cell::Bool(true)]);
        assert_eq!(t.render(Format::Csv, ""), "a,b\n1.00000000000e0,true\n");
        assert_eq!(
            t.render(Format::Json, ""),
            "{\"a\":1.00000000000e0,\"b\":true}\n"
        );
    }
}
