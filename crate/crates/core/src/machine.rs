//! Binary matrix classifiers and their objectives.
//!
//! All four variants share the decision function `tr(WᵀX) + b` and the hinge
//! term `C·Σᵢ max(0, 1 − yᵢ(tr(WᵀXᵢ) + b))`; they differ in the penalty on `W`:
//!
//! | variant | penalty                      |
//! |---------|------------------------------|
//! | SSMM    | `γ‖W‖₁ + τ‖W‖_*`             |
//! | SMM     | `½tr(WᵀW) + τ‖W‖_*`          |
//! | SVM     | `½tr(WᵀW)`                   |
//! | SSVM    | `γ‖W‖₁`                      |
//!
//! The bias `b` is never penalized.

use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::hinge::hinge;
use crate::prox::{l1_norm, nuclear_norm};
use crate::Matrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("sample {sample}: shape {found:?} does not match expected {expected:?}")]
    ShapeMismatch {
        sample: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("input shape {found:?} does not match model shape {expected:?}")]
    InputShape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("threshold must be finite and nonnegative, got {0}")]
    InvalidThreshold(f64),
    #[error("singular value decomposition did not converge")]
    SvdFailed,
    #[error("invalid objective: {0}")]
    InvalidSpec(&'static str),
    #[error("invalid solver config: {0}")]
    InvalidConfig(&'static str),
    #[error("training data is empty")]
    EmptyData,
    #[error("training data has only {0} labels; both classes are required")]
    SingleClass(BinaryLabel),
    #[error("class {0} has no samples")]
    EmptyClass(usize),
    #[error("need at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("sample {sample}: class {label} out of range for {classes} classes")]
    LabelOutOfRange {
        sample: usize,
        label: usize,
        classes: usize,
    },
    #[error("model is inconsistent: {0}")]
    InvalidModel(&'static str),
}

/// Binary target `y ∈ {−1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryLabel {
    Negative,
    Positive,
}

impl BinaryLabel {
    pub fn sign(self) -> f64 {
        match self {
            BinaryLabel::Negative => -1.0,
            BinaryLabel::Positive => 1.0,
        }
    }

    pub fn from_sign(v: f64) -> Option<Self> {
        if v == 1.0 {
            Some(BinaryLabel::Positive)
        } else if v == -1.0 {
            Some(BinaryLabel::Negative)
        } else {
            None
        }
    }
}

impl fmt::Display for BinaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinaryLabel::Negative => "-1",
            BinaryLabel::Positive => "+1",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub x: Matrix,
    pub y: BinaryLabel,
}

impl LabeledMatrix {
    pub fn new(x: Matrix, y: BinaryLabel) -> Self {
        LabeledMatrix { x, y }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryModel {
    /// Regression matrix.
    pub w: Matrix,
    pub b: f64,
}

impl BinaryModel {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryModel {
            w: Matrix::zeros(rows, cols),
            b: 0.0,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.w.shape()
    }

    pub fn is_finite(&self) -> bool {
        self.b.is_finite() && self.w.iter().all(|v| v.is_finite())
    }

    /// Number of exactly-zero entries of `W`.
    pub fn zero_entries(&self) -> usize {
        self.w.iter().filter(|v| **v == 0.0).count()
    }
}

/// `tr(WᵀX) + b`.
pub fn decision_value(model: &BinaryModel, x: &Matrix) -> Result<f64, ModelError> {
    if model.w.shape() != x.shape() {
        return Err(ModelError::InputShape {
            expected: model.w.shape(),
            found: x.shape(),
        });
    }
    Ok(model.w.dot(x) + model.b)
}

/// `Σᵢ max(0, 1 − yᵢ(tr(WᵀXᵢ) + b))`.
pub fn hinge_loss_sum(model: &BinaryModel, data: &[LabeledMatrix]) -> Result<f64, ModelError> {
    let mut total = 0.0;
    for (i, sample) in data.iter().enumerate() {
        if sample.x.shape() != model.w.shape() {
            return Err(ModelError::ShapeMismatch {
                sample: i,
                expected: model.w.shape(),
                found: sample.x.shape(),
            });
        }
        total += hinge(sample.y.sign() * (model.w.dot(&sample.x) + model.b));
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Sparse support matrix machine: L1 + nuclear penalties.
    Ssmm,
    /// Support matrix machine: Frobenius + nuclear penalties.
    Smm,
    /// Linear SVM on the vectorized input: Frobenius penalty.
    Svm,
    /// L1-penalized linear SVM on the vectorized input.
    Ssvm,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Ssmm, Variant::Smm, Variant::Svm, Variant::Ssvm];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Ssmm => "ssmm",
            Variant::Smm => "smm",
            Variant::Svm => "svm",
            Variant::Ssvm => "ssvm",
        }
    }

    /// Vector variants see the 1×16 vectorization of the coded matrix.
    pub fn is_vector(self) -> bool {
        matches!(self, Variant::Svm | Variant::Ssvm)
    }

    /// Input shape expected for a 4×4 coded matrix.
    pub fn input_shape(self) -> (usize, usize) {
        if self.is_vector() {
            (1, 16)
        } else {
            (4, 4)
        }
    }

    /// Name used in reports, e.g. `PSC-SSMM`.
    pub fn method_name(self) -> &'static str {
        match self {
            Variant::Ssmm => "PSC-SSMM",
            Variant::Smm => "PSC-SMM",
            Variant::Svm => "PSC-SVM",
            Variant::Ssvm => "PSC-SSVM",
        }
    }

    fn has_frobenius(self) -> bool {
        matches!(self, Variant::Smm | Variant::Svm)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or(ModelError::InvalidSpec("unknown variant"))
    }
}

/// Which objective to minimize and its weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    pub variant: Variant,
    /// L1 weight γ.
    pub gamma: f64,
    /// Nuclear-norm weight τ.
    pub tau: f64,
    /// Hinge weight C.
    pub c: f64,
}

/// The weighted terms an objective is made of, independent of the variant name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Terms {
    pub frobenius: bool,
    pub l1: f64,
    pub nuclear: f64,
    pub c: f64,
}

impl ObjectiveSpec {
    pub const DEFAULT_GAMMA: f64 = 0.3;
    pub const DEFAULT_TAU: f64 = 0.1;
    pub const DEFAULT_C: f64 = 0.7;

    pub fn ssmm(gamma: f64, tau: f64, c: f64) -> Self {
        ObjectiveSpec {
            variant: Variant::Ssmm,
            gamma,
            tau,
            c,
        }
    }

    pub fn smm(tau: f64, c: f64) -> Self {
        ObjectiveSpec {
            variant: Variant::Smm,
            gamma: 0.0,
            tau,
            c,
        }
    }

    pub fn svm(c: f64) -> Self {
        ObjectiveSpec {
            variant: Variant::Svm,
            gamma: 0.0,
            tau: 0.0,
            c,
        }
    }

    pub fn ssvm(gamma: f64, c: f64) -> Self {
        ObjectiveSpec {
            variant: Variant::Ssvm,
            gamma,
            tau: 0.0,
            c,
        }
    }

    /// Builds the spec for `variant`, dropping the weights the variant fixes at zero.
    pub fn for_variant(variant: Variant, gamma: f64, tau: f64, c: f64) -> Self {
        match variant {
            Variant::Ssmm => Self::ssmm(gamma, tau, c),
            Variant::Smm => Self::smm(tau, c),
            Variant::Svm => Self::svm(c),
            Variant::Ssvm => Self::ssvm(gamma, c),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let finite = self.gamma.is_finite() && self.tau.is_finite() && self.c.is_finite();
        if !finite {
            return Err(ModelError::InvalidSpec("weights must be finite"));
        }
        if self.c <= 0.0 {
            return Err(ModelError::InvalidSpec("C must be positive"));
        }
        let (gamma_ok, tau_ok) = match self.variant {
            Variant::Ssmm => (self.gamma > 0.0, self.tau > 0.0),
            Variant::Smm => (self.gamma == 0.0, self.tau > 0.0),
            Variant::Svm => (self.gamma == 0.0, self.tau == 0.0),
            Variant::Ssvm => (self.gamma > 0.0, self.tau == 0.0),
        };
        if !gamma_ok {
            return Err(ModelError::InvalidSpec(match self.variant {
                Variant::Ssmm | Variant::Ssvm => "gamma must be positive",
                _ => "gamma must be zero for this variant",
            }));
        }
        if !tau_ok {
            return Err(ModelError::InvalidSpec(match self.variant {
                Variant::Ssmm | Variant::Smm => "tau must be positive",
                _ => "tau must be zero for this variant",
            }));
        }
        Ok(())
    }

    pub fn terms(&self) -> Terms {
        Terms {
            frobenius: self.variant.has_frobenius(),
            l1: if self.variant.has_frobenius() { 0.0 } else { self.gamma },
            nuclear: self.tau,
            c: self.c,
        }
    }
}

/// Value of the variant's objective at `model`.
///
/// Evaluates the formula for whatever weights `spec` carries; it does not
/// call [`ObjectiveSpec::validate`].
pub fn objective(model: &BinaryModel, spec: &ObjectiveSpec, data: &[LabeledMatrix]) -> Result<f64, ModelError> {
    let loss = hinge_loss_sum(model, data)?;
    Ok(penalty(&model.w, &spec.terms())? + spec.c * loss)
}

pub(crate) fn penalty(w: &Matrix, terms: &Terms) -> Result<f64, ModelError> {
    let mut value = 0.0;
    if terms.frobenius {
        value += 0.5 * w.norm_squared();
    }
    if terms.l1 != 0.0 {
        value += terms.l1 * l1_norm(w);
    }
    if terms.nuclear != 0.0 {
        value += terms.nuclear * nuclear_norm(w)?;
    }
    Ok(value)
}
