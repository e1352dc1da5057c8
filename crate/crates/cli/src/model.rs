//! Text model files.
//!
//! A binary model is
//!
//! ```text
//! psc-smm-model v1 <m> <d>
//! <m lines of d weights>
//! <b>
//! <variant> <gamma> <tau> <C>
//! ```
//!
//! and a one-vs-rest model is `psc-smm-ovr v1 <K>` followed by `K` binary
//! models and then `K` class-name lines.

use psc_core::{BinaryModel, Matrix, MulticlassModel, ObjectiveSpec, Variant};

use crate::text::{field, finite, header, join, Lines, ParseError};

const MODEL_MAGIC: &str = "psc-smm-model";
const OVR_MAGIC: &str = "psc-smm-ovr";

pub fn write_binary_model(model: &BinaryModel, spec: &ObjectiveSpec) -> String {
    let (m, d) = model.shape();
    let mut out = format!("{MODEL_MAGIC} v1 {m} {d}\n");
    for r in 0..m {
        out.push_str(&join(model.w.row(r).iter()));
        out.push('\n');
    }
    out.push_str(&format!("{}\n", model.b));
    out.push_str(&format!("{} {} {} {}\n", spec.variant, spec.gamma, spec.tau, spec.c));
    out
}

pub fn parse_binary_model(text: &str) -> Result<(BinaryModel, ObjectiveSpec), ParseError> {
    let mut lines = Lines::new(text);
    let out = read_binary(&mut lines)?;
    lines.finish("the model")?;
    Ok(out)
}

fn read_binary(lines: &mut Lines) -> Result<(BinaryModel, ObjectiveSpec), ParseError> {
    let (hl, h) = lines.expect("model header")?;
    let fields: Vec<&str> = header(hl, h, MODEL_MAGIC)?.collect();
    if fields.len() != 2 {
        return Err(ParseError::new(hl, "header must be `psc-smm-model v1 <m> <d>`"));
    }
    let m: usize = field(hl, "row count", fields[0])?;
    let d: usize = field(hl, "column count", fields[1])?;
    if m == 0 || d == 0 {
        return Err(ParseError::new(hl, "model shape must be nonzero"));
    }
    let mut w = Matrix::zeros(m, d);
    for r in 0..m {
        let (line, text) = lines.expect("weight row")?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != d {
            return Err(ParseError::new(line, format!("expected {d} weights, found {}", parts.len())));
        }
        for (c, s) in parts.iter().enumerate() {
            w[(r, c)] = finite(line, "weight", s)?;
        }
    }
    let (bl, b) = lines.expect("bias")?;
    let b = finite(bl, "bias", b)?;
    let (sl, s) = lines.expect("objective line")?;
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(ParseError::new(sl, "objective line must be `<variant> <gamma> <tau> <C>`"));
    }
    let spec = ObjectiveSpec {
        variant: parts[0]
            .parse::<Variant>()
            .map_err(|_| ParseError::new(sl, format!("unknown variant `{}`", parts[0])))?,
        gamma: finite(sl, "gamma", parts[1])?,
        tau: finite(sl, "tau", parts[2])?,
        c: finite(sl, "C", parts[3])?,
    };
    spec.validate().map_err(|e| ParseError::new(sl, e.to_string()))?;
    Ok((BinaryModel { w, b }, spec))
}

pub fn write_multiclass_model(model: &MulticlassModel) -> String {
    let mut out = format!("{OVR_MAGIC} v1 {}\n", model.num_classes());
    for m in &model.models {
        out.push_str(&write_binary_model(m, &model.spec));
    }
    for name in &model.class_names {
        out.push_str(name);
        out.push('\n');
    }
    out
}

pub fn parse_multiclass_model(text: &str) -> Result<MulticlassModel, ParseError> {
    let mut lines = Lines::new(text);
    let (hl, h) = lines.expect("model header")?;
    let fields: Vec<&str> = header(hl, h, OVR_MAGIC)?.collect();
    if fields.len() != 1 {
        return Err(ParseError::new(hl, "header must be `psc-smm-ovr v1 <K>`"));
    }
    let k: usize = field(hl, "class count", fields[0])?;
    if k < 2 {
        return Err(ParseError::new(hl, "a one-vs-rest model needs at least 2 classes"));
    }
    let mut models = Vec::with_capacity(k);
    let mut spec: Option<ObjectiveSpec> = None;
    for _ in 0..k {
        let start = lines.line() + 1;
        let (m, s) = read_binary(&mut lines)?;
        match spec {
            Some(first) if first != s => {
                return Err(ParseError::new(lines.line(), "objective differs from the first class model"))
            }
            Some(_) => {}
            None => spec = Some(s),
        }
        if let Some(first) = models.first().map(BinaryModel::shape) {
            if m.shape() != first {
                return Err(ParseError::new(start, "model shape differs from the first class model"));
            }
        }
        models.push(m);
    }
    let mut class_names = Vec::with_capacity(k);
    for _ in 0..k {
        class_names.push(lines.expect("class name")?.1.to_string());
    }
    lines.finish("the class names")?;
    let input_shape = models[0].shape();
    let spec = spec.expect("k >= 2");
    if input_shape != spec.variant.input_shape() {
        return Err(ParseError::new(1, format!("{} models must be {:?}", spec.variant, spec.variant.input_shape())));
    }
    Ok(MulticlassModel {
        models,
        class_names,
        spec,
        input_shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> BinaryModel {
        BinaryModel {
            w: Matrix::from_row_slice(2, 3, &[0.1, -0.0, 1e-300, 2.5e10, -1.0 / 3.0, f64::MIN_POSITIVE]),
            b: -0.7,
        }
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let spec = ObjectiveSpec::ssmm(0.3, 0.1, 0.7);
        let text = write_binary_model(&model(), &spec);
        assert!(text.starts_with("psc-smm-model v1 2 3\n"));
        let (back, back_spec) = parse_binary_model(&text).unwrap();
        assert_eq!(back_spec, spec);
        assert_eq!(back.b.to_bits(), model().b.to_bits());
        for (a, b) in back.w.iter().zip(model().w.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn multiclass_round_trip() {
        let spec = ObjectiveSpec::svm(0.7);
        let models: Vec<_> = (0..3)
            .map(|k| BinaryModel {
                w: Matrix::from_fn(1, 16, |_, c| (c as f64 - k as f64) / 7.0),
                b: k as f64 * 0.1,
            })
            .collect();
        let m = MulticlassModel {
            models,
            class_names: vec!["Water".into(), "Stem beans".into(), "Wheat3".into()],
            spec,
            input_shape: (1, 16),
        };
        assert_eq!(parse_multiclass_model(&write_multiclass_model(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_bad_models() {
        let spec = ObjectiveSpec::ssmm(0.3, 0.1, 0.7);
        let text = write_binary_model(&model(), &spec);
        let short = text.replacen("0.1 -0 ", "0.1 ", 1);
        assert_eq!(parse_binary_model(&short).unwrap_err().line, 2);
        let bad_spec = text.replace("ssmm 0.3", "svm 0.3");
        assert!(parse_binary_model(&bad_spec).is_err());
        assert!(parse_binary_model("psc-smm-model v1 2\n").is_err());
        assert!(parse_multiclass_model("psc-smm-ovr v1 1\n").is_err());
    }
}
