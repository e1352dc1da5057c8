//! Plain-text dataset and encoded-matrix files.
//!
//! ```text
//! psc-dataset v1 <n> <K> [<H> <W>]
//! <class name 1>
//! …
//! <class name K>
//! hh_re hh_im hv_re hv_im vh_re vh_im vv_re vv_im label [row col]
//! ```
//!
//! Labels are 1-based on disk and 0-based in memory. Values are written with
//! Rust's shortest round-trip formatting, so write-then-read is exact.

use psc_core::{Dataset, PscMatrix, Sample, ScatteringMatrix};

use crate::text::{field, finite, header, join, Lines, ParseError};

const DATASET_MAGIC: &str = "psc-dataset";
const ENCODED_MAGIC: &str = "psc-encoded";

pub fn write_dataset(d: &Dataset) -> String {
    let mut out = format!("{DATASET_MAGIC} v1 {} {}", d.samples.len(), d.class_names.len());
    if let Some((h, w)) = d.image_dims {
        out.push_str(&format!(" {h} {w}"));
    }
    out.push('\n');
    for name in &d.class_names {
        out.push_str(name);
        out.push('\n');
    }
    for s in &d.samples {
        out.push_str(&join(s.s.components()));
        out.push_str(&format!(" {}", s.label + 1));
        if let Some((r, c)) = s.pixel {
            out.push_str(&format!(" {r} {c}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_dataset(text: &str) -> Result<Dataset, ParseError> {
    let mut lines = Lines::new(text);
    let (hl, h) = lines.expect("dataset header")?;
    let fields: Vec<&str> = header(hl, h, DATASET_MAGIC)?.collect();
    if fields.len() != 2 && fields.len() != 4 {
        return Err(ParseError::new(hl, "header must be `psc-dataset v1 <n> <K> [<H> <W>]`"));
    }
    let n: usize = field(hl, "sample count", fields[0])?;
    let k: usize = field(hl, "class count", fields[1])?;
    if k == 0 {
        return Err(ParseError::new(hl, "class count must be positive"));
    }
    let image_dims = match fields.len() {
        4 => Some((field(hl, "image height", fields[2])?, field(hl, "image width", fields[3])?)),
        _ => None,
    };

    let mut class_names = Vec::with_capacity(k);
    for _ in 0..k {
        class_names.push(lines.expect("class name")?.1.to_string());
    }

    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, text) = lines.expect("sample record")?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 9 && parts.len() != 11 {
            return Err(ParseError::new(line, format!("expected 9 or 11 fields, found {}", parts.len())));
        }
        let mut c = [0.0; 8];
        for (v, s) in c.iter_mut().zip(&parts) {
            *v = finite(line, "value", s)?;
        }
        let label = label(line, parts[8], k)?;
        let pixel = match parts.len() {
            11 => {
                let p = (field(line, "row", parts[9])?, field(line, "column", parts[10])?);
                if let Some((h, w)) = image_dims {
                    if p.0 >= h || p.1 >= w {
                        return Err(ParseError::new(line, format!("pixel ({}, {}) outside {h}x{w} image", p.0, p.1)));
                    }
                }
                Some(p)
            }
            _ => None,
        };
        samples.push(Sample {
            s: ScatteringMatrix::from_components(c),
            label,
            pixel,
        });
    }
    lines.finish("the last sample record")?;
    Ok(Dataset {
        samples,
        class_names,
        image_dims,
    })
}

/// Parses a 1-based label and returns it 0-based.
pub(crate) fn label(line: usize, s: &str, k: usize) -> Result<usize, ParseError> {
    let v: usize = field(line, "label", s)?;
    if v == 0 || v > k {
        return Err(ParseError::new(line, format!("label {v} out of range 1..={k}")));
    }
    Ok(v - 1)
}

/// `psc-encoded v1`, then one record per line: the 16 row-major entries of the
/// coded matrix and the 1-based label.
pub fn write_encoded(records: &[(PscMatrix, usize)]) -> String {
    let mut out = format!("{ENCODED_MAGIC} v1\n");
    for (m, label) in records {
        out.push_str(&join(m.as_slice()));
        out.push_str(&format!(" {}\n", label + 1));
    }
    out
}

pub fn parse_encoded(text: &str) -> Result<Vec<(PscMatrix, usize)>, ParseError> {
    let mut lines = Lines::new(text);
    let (hl, h) = lines.expect("encoded header")?;
    if header(hl, h, ENCODED_MAGIC)?.next().is_some() {
        return Err(ParseError::new(hl, "header must be `psc-encoded v1`"));
    }
    let mut out = Vec::new();
    while let Some((line, text)) = lines.next_line() {
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 17 {
            return Err(ParseError::new(line, format!("expected 17 fields, found {}", parts.len())));
        }
        let mut m = [0.0; 16];
        for (v, s) in m.iter_mut().zip(&parts) {
            *v = finite(line, "value", s)?;
        }
        out.push((PscMatrix(m), label(line, parts[16], usize::MAX)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "psc-dataset v1 2 2 3 4\nWater\nStem beans\n\
        1 -2 0.5 0 -0 3 1e-3 -4.25 2 0 1\n\
        0.1 0.2 0.3 0.4 0.5 0.6 0.7 0.8 1 2 3\n";

    #[test]
    fn parses_and_rewrites() {
        let d = parse_dataset(SMALL).unwrap();
        assert_eq!(d.class_names, ["Water", "Stem beans"]);
        assert_eq!(d.image_dims, Some((3, 4)));
        assert_eq!(d.samples[0].label, 1);
        assert_eq!(d.samples[1].pixel, Some((2, 3)));
        assert_eq!(d.samples[0].s.hh.im, -2.0);
        assert_eq!(parse_dataset(&write_dataset(&d)).unwrap(), d);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let seven = "psc-dataset v1 1 2\na\nb\n1 2 3 4 5 6 7\n";
        assert_eq!(parse_dataset(seven).unwrap_err().line, 4);
        let range = "psc-dataset v1 1 15\n".to_string()
            + &"x\n".repeat(15)
            + "1 2 3 4 5 6 7 8 16\n";
        let err = parse_dataset(&range).unwrap_err();
        assert_eq!(err.line, 17);
        assert!(err.message.contains("out of range"), "{err}");
        assert_eq!(parse_dataset("psc-dataset v2 1 1\n").unwrap_err().line, 1);
        assert_eq!(parse_dataset("hello\n").unwrap_err().line, 1);
        let short = "psc-dataset v1 2 1\na\n1 2 3 4 5 6 7 8 1\n";
        assert!(parse_dataset(short).unwrap_err().message.contains("end of file"));
        let long = "psc-dataset v1 1 1\na\n1 2 3 4 5 6 7 8 1\n1 2 3 4 5 6 7 8 1\n";
        assert_eq!(parse_dataset(long).unwrap_err().line, 4);
        let nan = "psc-dataset v1 1 1\na\n1 NaN 3 4 5 6 7 8 1\n";
        assert!(parse_dataset(nan).unwrap_err().message.contains("non-finite"));
        let outside = "psc-dataset v1 1 1 2 2\na\n1 2 3 4 5 6 7 8 1 2 0\n";
        assert!(parse_dataset(outside).unwrap_err().message.contains("outside"));
    }

    #[test]
    fn encoded_round_trip() {
        let mut m = [0.0; 16];
        m[0] = 1.5;
        m[7] = 0.1;
        let records = vec![(PscMatrix(m), 0), (PscMatrix([0.25; 16]), 4)];
        let text = write_encoded(&records);
        assert!(text.starts_with("psc-encoded v1\n"));
        assert_eq!(parse_encoded(&text).unwrap(), records);
        assert_eq!(parse_encoded("psc-encoded v1\n1 2\n").unwrap_err().line, 2);
    }
}
