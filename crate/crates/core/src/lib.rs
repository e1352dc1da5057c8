//! Pixel-wise PolSAR classification with polarimetric scattering coding (PSC)
//! and regularized matrix classifiers.
//!
//! The pipeline is:
//!
//! 1. [`encode`] turns each 2×2 complex scattering matrix into a sparse 4×4
//!    nonnegative real matrix.
//! 2. [`machine`] trains binary hinge-loss classifiers on those matrices
//!    (SSMM, SMM and the vector baselines SVM/SSVM) with a consensus ADMM
//!    solver built on the proximal operators in [`prox`].
//! 3. [`multiclass`] reduces the K-class problem to K one-vs-rest machines.
//! 4. [`metrics`] scores predictions with OA, AA and Cohen's kappa.
//!
//! [`synth`] generates reproducible Flevoland-shaped datasets.
//!
//! The crate is `no_std` and only needs `alloc`; all file formats live in the
//! companion `psc-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod encode;
pub mod hinge;
pub mod machine;
pub mod metrics;
pub mod multiclass;
pub mod prox;
pub mod scattering;
pub mod solver;
pub mod synth;

pub use encode::{encode_complex, encode_dataset, encode_scattering, Block, EncodeError, PscMatrix};
pub use machine::{
    decision_value, hinge_loss_sum, objective, BinaryLabel, BinaryModel, LabeledMatrix, ModelError,
    ObjectiveSpec, Variant,
};
pub use metrics::{average_accuracy, confusion, kappa, overall_accuracy, ConfusionMatrix, MetricsError};
pub use multiclass::{predict, train_multiclass, MulticlassModel};
pub use prox::{prox_nuclear, prox_soft_threshold};
pub use scattering::{validate_dataset, Component, ComplexValue, Dataset, Polarization, Sample, ScatteringMatrix, Violation};
pub use solver::{train_binary, SolverConfig, TrainReport};
pub use synth::{default_flevoland_shape, generate, ClassTemplate, SynthConfig, SynthError};

/// Dense real matrix used for classifier weights and inputs.
pub type Matrix = nalgebra::DMatrix<f64>;
