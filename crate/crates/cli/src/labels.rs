//! Predicted-label files.
//!
//! ```text
//! psc-labels v1 <n> <K> <method>
//! <n lines, one 1-based label each>
//! ```

use crate::dataset::label;
use crate::text::{field, header, Lines, ParseError};

const MAGIC: &str = "psc-labels";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    /// 0-based class indices.
    pub labels: Vec<usize>,
    pub num_classes: usize,
    /// Name of the method that produced the labels, e.g. `PSC-SSMM`.
    pub method: String,
}

pub fn write_labels(l: &Labels) -> String {
    let mut out = format!("{MAGIC} v1 {} {} {}\n", l.labels.len(), l.num_classes, l.method);
    for v in &l.labels {
        out.push_str(&format!("{}\n", v + 1));
    }
    out
}

pub fn parse_labels(text: &str) -> Result<Labels, ParseError> {
    let mut lines = Lines::new(text);
    let (hl, h) = lines.expect("labels header")?;
    let fields: Vec<&str> = header(hl, h, MAGIC)?.collect();
    if fields.len() != 3 {
        return Err(ParseError::new(hl, "header must be `psc-labels v1 <n> <K> <method>`"));
    }
    let n: usize = field(hl, "label count", fields[0])?;
    let k: usize = field(hl, "class count", fields[1])?;
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, text) = lines.expect("label")?;
        labels.push(label(line, text, k)?);
    }
    lines.finish("the last label")?;
    Ok(Labels {
        labels,
        num_classes: k,
        method: fields[2].to_string(),
    })
}
