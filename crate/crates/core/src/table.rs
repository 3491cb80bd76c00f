//! Deterministic tabular output: '#'-prefixed metadata lines followed by
//! comma-separated blocks, one per observable, with 12-significant-digit
//! values. Identical configuration text yields byte-identical output.

/// One observable block: a title line, a header row and data rows.
#[derive(Debug, Clone)]
pub struct Block {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct OutputTable {
    pub metadata: Vec<String>,
    pub blocks: Vec<Block>,
}

/// 12 significant digits, locale-free.
pub fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        // Avoid the -0.0e0 artifact so reruns stay byte-identical.
        "0.00000000000e0".into()
    } else {
        format!("{v:.11e}")
    }
}

pub fn fmt_bool(b: bool) -> String {
    if b {
        "true".into()
    } else {
        "false".into()
    }
}

impl OutputTable {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.metadata {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        for block in &self.blocks {
            out.push_str("#\n# observable: ");
            out.push_str(&block.title);
            out.push('\n');
            out.push_str(&block.header.join(","));
            out.push('\n');
            for row in &block.rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        out
    }
}
