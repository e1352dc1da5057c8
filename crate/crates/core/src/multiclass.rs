//! One-vs-rest reduction over coded matrices.

use alloc::string::String;
use alloc::vec::Vec;

use crate::encode::PscMatrix;
use crate::machine::{decision_value, BinaryLabel, BinaryModel, LabeledMatrix, ModelError, ObjectiveSpec};
use crate::solver::{train_binary, SolverConfig, TrainReport};
use crate::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassModel {
    /// Model `k` separates class `k` from all others.
    pub models: Vec<BinaryModel>,
    pub class_names: Vec<String>,
    pub spec: ObjectiveSpec,
    pub input_shape: (usize, usize),
}

impl MulticlassModel {
    pub fn num_classes(&self) -> usize {
        self.models.len()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.models.len() < 2 {
            return Err(ModelError::TooFewClasses(self.models.len()));
        }
        if self.models.len() != self.class_names.len() {
            return Err(ModelError::InvalidModel("class name count differs from model count"));
        }
        if self.models.iter().any(|m| m.shape() != self.input_shape) {
            return Err(ModelError::InvalidModel("binary model shape differs from input shape"));
        }
        Ok(())
    }

    /// Decision value of every class for an input already in `input_shape`.
    pub fn decision_values(&self, x: &Matrix) -> Result<Vec<f64>, ModelError> {
        self.models.iter().map(|m| decision_value(m, x)).collect()
    }
}

/// Binary training set for class `class` against the rest.
pub fn one_vs_rest(encoded: &[(PscMatrix, usize)], class: usize, shape: (usize, usize)) -> Result<Vec<LabeledMatrix>, ModelError> {
    encoded
        .iter()
        .map(|(m, label)| {
            let x = m.to_shape(shape).ok_or(ModelError::InputShape {
                expected: shape,
                found: (PscMatrix::ROWS, PscMatrix::COLS),
            })?;
            let y = if *label == class { BinaryLabel::Positive } else { BinaryLabel::Negative };
            Ok(LabeledMatrix::new(x, y))
        })
        .collect()
}

/// Checks the labels of `encoded` against `k` classes, each of which must be present.
pub fn check_classes(encoded: &[(PscMatrix, usize)], k: usize) -> Result<(), ModelError> {
    if k < 2 {
        return Err(ModelError::TooFewClasses(k));
    }
    let mut seen = alloc::vec![false; k];
    for (i, (_, label)) in encoded.iter().enumerate() {
        if *label >= k {
            return Err(ModelError::LabelOutOfRange {
                sample: i,
                label: *label,
                classes: k,
            });
        }
        seen[*label] = true;
    }
    match seen.iter().position(|s| !s) {
        Some(class) => Err(ModelError::EmptyClass(class)),
        None => Ok(()),
    }
}

/// Trains `k` one-vs-rest machines in class order.
///
/// Vector variants see each coded matrix as its 1×16 row-major vectorization.
/// `class_names` defaults to `c1..ck` when empty.
pub fn train_multiclass(
    encoded: &[(PscMatrix, usize)],
    k: usize,
    class_names: &[String],
    spec: &ObjectiveSpec,
    cfg: &SolverConfig,
) -> Result<(MulticlassModel, Vec<TrainReport>), ModelError> {
    check_classes(encoded, k)?;
    spec.validate()?;
    cfg.validate()?;
    let shape = spec.variant.input_shape();
    let mut models = Vec::with_capacity(k);
    let mut reports = Vec::with_capacity(k);
    for class in 0..k {
        let data = one_vs_rest(encoded, class, shape)?;
        let (model, report) = train_binary(&data, spec, cfg)?;
        models.push(model);
        reports.push(report);
    }
    Ok((assemble(models, class_names, k, spec, shape)?, reports))
}

/// Wraps per-class models (in class order) into a [`MulticlassModel`].
pub fn assemble(
    models: Vec<BinaryModel>,
    class_names: &[String],
    k: usize,
    spec: &ObjectiveSpec,
    shape: (usize, usize),
) -> Result<MulticlassModel, ModelError> {
    let class_names = if class_names.is_empty() {
        (1..=k).map(|i| alloc::format!("c{i}")).collect()
    } else {
        class_names.to_vec()
    };
    let model = MulticlassModel {
        models,
        class_names,
        spec: *spec,
        input_shape: shape,
    };
    model.validate()?;
    Ok(model)
}

/// Index of the largest value; ties go to the lowest index and NaN never wins.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some((_, b)) if !(v > b) => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// Predicted class and the decision value of every class.
pub fn predict(model: &MulticlassModel, x: &PscMatrix) -> Result<(usize, Vec<f64>), ModelError> {
    let input = x.to_shape(model.input_shape).ok_or(ModelError::InputShape {
        expected: model.input_shape,
        found: (PscMatrix::ROWS, PscMatrix::COLS),
    })?;
    let values = model.decision_values(&input)?;
    let class = argmax(&values).ok_or(ModelError::TooFewClasses(0))?;
    Ok((class, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn psc(values: [f64; 16]) -> PscMatrix {
        PscMatrix(values)
    }

    fn biased(biases: &[f64], shape: (usize, usize)) -> MulticlassModel {
        MulticlassModel {
            models: biases
                .iter()
                .map(|&b| BinaryModel {
                    w: Matrix::zeros(shape.0, shape.1),
                    b,
                })
                .collect(),
            class_names: (0..biases.len()).map(|i| alloc::format!("c{i}")).collect(),
            spec: ObjectiveSpec::ssmm(0.3, 0.1, 0.7),
            input_shape: shape,
        }
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(argmax(&[0.1, 0.9, -0.3]), Some(1));
        assert_eq!(argmax(&[0.5, 0.5]), Some(0));
        assert_eq!(argmax(&[]), None);
    }

    #[test]
    fn bias_ordering_decides() {
        let model = biased(&[0.0, 1.0, 2.0, 3.0], (4, 4));
        let (class, values) = predict(&model, &psc([0.7; 16])).unwrap();
        assert_eq!(class, 3);
        assert_eq!(values, vec![0.0, 1.0, 2.0, 3.0]);
        let vector = biased(&[0.5, 0.5], (1, 16));
        assert_eq!(predict(&vector, &psc([1.0; 16])).unwrap().0, 0);
    }

    #[test]
    fn shape_mismatch() {
        let model = biased(&[0.0, 1.0], (2, 8));
        assert!(matches!(predict(&model, &psc([0.0; 16])), Err(ModelError::InputShape { .. })));
    }

    #[test]
    fn empty_class_named() {
        let data: Vec<_> = (0..10).map(|i| (psc([i as f64; 16]), if i < 5 { 0 } else { 2 })).collect();
        let err = train_multiclass(&data, 3, &[], &ObjectiveSpec::svm(1.0), &SolverConfig::default()).unwrap_err();
        assert_eq!(err, ModelError::EmptyClass(1));
        assert_eq!(alloc::string::ToString::to_string(&err), "class 1 has no samples");
        assert!(matches!(check_classes(&data, 1), Err(ModelError::TooFewClasses(1))));
        assert!(matches!(check_classes(&data, 2), Err(ModelError::LabelOutOfRange { sample: 5, .. })));
    }

    #[test]
    fn two_separable_classes() {
        let mut data = Vec::new();
        for i in 0..10 {
            let mut a = [0.0; 16];
            a[0] = 1.0 + 0.1 * i as f64;
            a[5] = 0.2;
            data.push((psc(a), 0));
            let mut b = [0.0; 16];
            b[10] = 1.0 + 0.05 * i as f64;
            b[5] = 0.3;
            data.push((psc(b), 1));
        }
        for spec in [ObjectiveSpec::ssmm(0.3, 0.1, 10.0), ObjectiveSpec::svm(10.0)] {
            let (model, reports) = train_multiclass(&data, 2, &[], &spec, &SolverConfig::default()).unwrap();
            assert_eq!(reports.len(), 2);
            assert_eq!(model.class_names, vec![String::from("c1"), String::from("c2")]);
            for class in 0..2 {
                let binary = one_vs_rest(&data, class, model.input_shape).unwrap();
                for s in &binary {
                    assert!(decision_value(&model.models[class], &s.x).unwrap() * s.y.sign() > 0.0);
                }
            }
            for (x, label) in &data {
                assert_eq!(predict(&model, x).unwrap().0, *label);
            }
        }
    }

    proptest! {
        #[test]
        fn bias_shift_keeps_predictions(
            biases in proptest::collection::vec(-3.0..3.0f64, 2..6),
            shift in -10.0..10.0f64,
            x in proptest::array::uniform16(0.0..2.0f64),
            w_seed in proptest::collection::vec(-1.0..1.0f64, 16 * 6),
        ) {
            let mut model = biased(&biases, (4, 4));
            for (k, m) in model.models.iter_mut().enumerate() {
                m.w = Matrix::from_column_slice(4, 4, &w_seed[16 * k..16 * (k + 1)]);
            }
            let before = predict(&model, &psc(x)).unwrap();
            let mut shifted = model.clone();
            shifted.models.iter_mut().for_each(|m| m.b += shift);
            let after = predict(&shifted, &psc(x)).unwrap();
            // an exact shift can merge two values only through rounding
            let gap = before.1.iter().enumerate()
                .filter(|(i, _)| *i != before.0)
                .map(|(_, v)| before.1[before.0] - v)
                .fold(f64::INFINITY, f64::min);
            prop_assume!(gap > 1e-9);
            prop_assert_eq!(before.0, after.0);
        }

        #[test]
        fn relabeling_is_equivariant(
            biases in proptest::collection::vec(-3.0..3.0f64, 3..6),
            w_seed in proptest::collection::vec(-1.0..1.0f64, 16 * 6),
            x in proptest::array::uniform16(0.0..2.0f64),
            rot in 0usize..6,
        ) {
            let mut model = biased(&biases, (4, 4));
            for (k, m) in model.models.iter_mut().enumerate() {
                m.w = Matrix::from_column_slice(4, 4, &w_seed[16 * k..16 * (k + 1)]);
            }
            let k = model.num_classes();
            // permuted[j] = original[(j + rot) % k]
            let mut permuted = model.clone();
            for j in 0..k {
                permuted.models[j] = model.models[(j + rot) % k].clone();
            }
            let original = predict(&model, &psc(x)).unwrap();
            let moved = predict(&permuted, &psc(x)).unwrap();
            let mut sorted = original.1.clone();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            prop_assume!(sorted[0] > sorted[1]);
            prop_assert_eq!((moved.0 + rot) % k, original.0);
        }
    }
}
