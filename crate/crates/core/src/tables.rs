//! Table rendering shared by the report emitters: one value grid with
//! row/column labels, rendered as CSV or Markdown with an optional header
//! comment carrying provenance (config hash, seed).

#[derive(Debug, Clone)]
pub struct Table {
    pub title: String,
    pub corner: String,
    pub col_labels: Vec<String>,
    pub row_labels: Vec<String>,
    pub cells: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, corner: &str, col_labels: Vec<String>) -> Self {
        Self {
            title: title.to_string(),
            corner: corner.to_string(),
            col_labels,
            row_labels: Vec::new(),
            cells: Vec::new(),
        }
    }

    pub fn push_row(&mut self, label: &str, cells: Vec<String>) {
        assert_eq!(cells.len(), self.col_labels.len(), "ragged table row");
        self.row_labels.push(label.to_string());
        self.cells.push(cells);
    }

    fn csv_quote(field: &str) -> String {
        if field.contains([',', '"', '\n']) {
            format!("\"{}\"", field.replace('"', "\"\""))
        } else {
            field.to_string()
        }
    }

    pub fn to_csv(&self, header_comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(h) = header_comment {
            out.push_str(&format!("# {h}\n"));
        }
        out.push_str(&format!("# {}\n", self.title));
        let mut head = vec![Self::csv_quote(&self.corner)];
        head.extend(self.col_labels.iter().map(|c| Self::csv_quote(c)));
        out.push_str(&head.join(","));
        out.push('\n');
        for (label, row) in self.row_labels.iter().zip(&self.cells) {
            let mut line = vec![Self::csv_quote(label)];
            line.extend(row.iter().map(|c| Self::csv_quote(c)));
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self, header_comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(h) = header_comment {
            out.push_str(&format!("<!-- {h} -->\n"));
        }
        out.push_str(&format!("### {}\n\n", self.title));
        out.push_str(&format!("| {} |", self.corner));
        for c in &self.col_labels {
            out.push_str(&format!(" {c} |"));
        }
        out.push('\n');
        out.push_str(&"| --- ".repeat(self.col_labels.len() + 1));
        out.push_str("|\n");
        for (label, row) in self.row_labels.iter().zip(&self.cells) {
            out.push_str(&format!("| {label} |"));
            for c in row {
                out.push_str(&format!(" {c} |"));
            }
            out.push('\n');
        }
        out.push('\n');
        out
    }
}

/// Grid labels in the style the reports use ("TG 0%", "SG +10%", ...).
pub fn growth_label(prefix: &str, g: crate::Rat) -> String {
    let pct = crate::exact::to_f64(g) * 100.0;
    if pct == 0.0 {
        format!("{prefix} 0%")
    } else if pct < 0.0 {
        format!("{prefix} {pct:.0}%")
    } else {
        format!("{prefix} +{pct:.0}%")
    }
}
