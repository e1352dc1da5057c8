//! Reproducible synthetic PolSAR data shaped like the Flevoland experiment.
//!
//! Each class is a template scattering matrix; a sample is the template plus
//! independent `N(0, σ²)` noise on each of its 8 real components. The ratio of
//! template spacing to `σ` is the separability knob.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::scattering::{ComplexValue, Dataset, Sample, ScatteringMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("no class templates")]
    NoTemplates,
    #[error("{templates} templates but {counts} test counts")]
    CountMismatch { templates: usize, counts: usize },
    #[error("class {class}: noise sigma must be finite and positive, got {sigma}")]
    InvalidSigma { class: usize, sigma: f64 },
    #[error("class {class}: template mean is not finite")]
    NonFiniteMean { class: usize },
    #[error("train_per_class and every test count must be positive")]
    ZeroCount,
    #[error("class patches need {needed} columns of height {height} but the image has {width}")]
    LayoutOverflow { needed: usize, height: usize, width: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassTemplate {
    pub name: String,
    /// Class center.
    pub mean: ScatteringMatrix,
    /// Standard deviation of the noise on each real component.
    pub noise_sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub templates: Vec<ClassTemplate>,
    pub train_per_class: usize,
    /// Test sample count of each class, in template order.
    pub test_counts: Vec<usize>,
    pub seed: u64,
    /// `(height, width)`; when set, samples are laid out in per-class patches.
    pub image_dims: Option<(usize, usize)>,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.templates.is_empty() {
            return Err(SynthError::NoTemplates);
        }
        if self.test_counts.len() != self.templates.len() {
            return Err(SynthError::CountMismatch {
                templates: self.templates.len(),
                counts: self.test_counts.len(),
            });
        }
        if self.train_per_class == 0 || self.test_counts.contains(&0) {
            return Err(SynthError::ZeroCount);
        }
        for (class, t) in self.templates.iter().enumerate() {
            if !(t.noise_sigma > 0.0 && t.noise_sigma.is_finite()) {
                return Err(SynthError::InvalidSigma {
                    class,
                    sigma: t.noise_sigma,
                });
            }
            if t.mean.non_finite().is_some() {
                return Err(SynthError::NonFiniteMean { class });
            }
        }
        Ok(())
    }

    /// Sets the same noise level on every template.
    pub fn with_sigma(mut self, sigma: f64) -> Self {
        for t in &mut self.templates {
            t.noise_sigma = sigma;
        }
        self
    }

    pub fn class_names(&self) -> Vec<String> {
        self.templates.iter().map(|t| t.name.clone()).collect()
    }
}

pub const FLEVOLAND_CLASSES: [&str; 15] = [
    "Water",
    "Barely",
    "Peas",
    "Stem beans",
    "Beet",
    "Forest",
    "Bare soil",
    "Grasses",
    "Rapeseed",
    "Lucerne",
    "Wheat2",
    "Wheat1",
    "Buildings",
    "Potatoes",
    "Wheat3",
];

/// Test samples per class in the Flevoland ground truth.
pub const FLEVOLAND_TEST_COUNTS: [usize; 15] = [
    12732, 7095, 9082, 5838, 9533, 17544, 4609, 6558, 13363, 9681, 10659, 15886, 535, 15656, 21741,
];

pub const FLEVOLAND_TRAIN_PER_CLASS: usize = 500;
pub const FLEVOLAND_IMAGE_DIMS: (usize, usize) = (750, 1024);
pub const DEFAULT_SEED: u64 = 2019;
pub const DEFAULT_SIGMA: f64 = 0.5;

/// Sign quadrant of each of HH, HV, VH, VV per class, coded 0: (+,+), 1: (−,+),
/// 2: (−,−), 3: (+,−). The rows are 15 words of a length-4 MDS code over GF(4),
/// so any two classes differ in at least three entries.
const QUADRANT_CODES: [[u8; 4]; 15] = [
    [0, 1, 1, 2],
    [0, 2, 2, 3],
    [0, 3, 3, 1],
    [1, 0, 1, 1],
    [1, 1, 0, 3],
    [1, 2, 3, 2],
    [1, 3, 2, 0],
    [2, 0, 2, 2],
    [2, 1, 3, 0],
    [2, 2, 0, 1],
    [2, 3, 1, 3],
    [3, 0, 3, 3],
    [3, 1, 2, 1],
    [3, 2, 1, 0],
    [3, 3, 0, 2],
];

/// `(|re|, |im|)` of HH, HV, VH, VV, shared by all templates so every coded
/// template has the same Euclidean norm.
const ENTRY_MAGNITUDES: [(f64, f64); 4] = [(1.0, 0.8), (0.5, 0.4), (0.45, 0.5), (0.9, 1.0)];

fn template_mean(code: [u8; 4]) -> ScatteringMatrix {
    let mut entries = [ComplexValue::ZERO; 4];
    for ((entry, q), (re, im)) in entries.iter_mut().zip(code).zip(ENTRY_MAGNITUDES) {
        let (sr, si) = match q {
            0 => (1.0, 1.0),
            1 => (-1.0, 1.0),
            2 => (-1.0, -1.0),
            _ => (1.0, -1.0),
        };
        *entry = ComplexValue::new(sr * re, si * im);
    }
    ScatteringMatrix::new(entries[0], entries[1], entries[2], entries[3])
}

/// 15 classes, 500 training samples each, the Flevoland per-class test
/// counts and a 750×1024 image.
pub fn default_flevoland_shape() -> SynthConfig {
    SynthConfig {
        templates: FLEVOLAND_CLASSES
            .iter()
            .zip(QUADRANT_CODES)
            .map(|(name, code)| ClassTemplate {
                name: name.to_string(),
                mean: template_mean(code),
                noise_sigma: DEFAULT_SIGMA,
            })
            .collect(),
        train_per_class: FLEVOLAND_TRAIN_PER_CLASS,
        test_counts: FLEVOLAND_TEST_COUNTS.to_vec(),
        seed: DEFAULT_SEED,
        image_dims: Some(FLEVOLAND_IMAGE_DIMS),
    }
}

/// Column-major patch layout: class `k` fills whole columns of height `H`
/// starting where class `k − 1` ended, training pixels first.
fn layout(cfg: &SynthConfig, (height, width): (usize, usize)) -> Result<Vec<usize>, SynthError> {
    let mut starts = Vec::with_capacity(cfg.templates.len());
    let mut col = 0;
    for &test in &cfg.test_counts {
        starts.push(col);
        col += (cfg.train_per_class + test).div_ceil(height.max(1));
    }
    if height == 0 || col > width {
        return Err(SynthError::LayoutOverflow {
            needed: col,
            height,
            width,
        });
    }
    Ok(starts)
}

/// Generates `(train, test)` datasets; identical configs give identical output.
pub fn generate(cfg: &SynthConfig) -> Result<(Dataset, Dataset), SynthError> {
    cfg.validate()?;
    let starts = cfg.image_dims.map(|dims| layout(cfg, dims)).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let class_names = cfg.class_names();
    let mut train = Dataset {
        samples: Vec::with_capacity(cfg.train_per_class * cfg.templates.len()),
        class_names: class_names.clone(),
        image_dims: cfg.image_dims,
    };
    let mut test = Dataset {
        samples: Vec::with_capacity(cfg.test_counts.iter().sum()),
        class_names,
        image_dims: cfg.image_dims,
    };

    for (class, (template, &test_count)) in cfg.templates.iter().zip(&cfg.test_counts).enumerate() {
        let noise = Normal::new(0.0, template.noise_sigma).map_err(|_| SynthError::InvalidSigma {
            class,
            sigma: template.noise_sigma,
        })?;
        let mean = template.mean.components();
        for i in 0..cfg.train_per_class + test_count {
            let mut c = [0.0; 8];
            for (v, m) in c.iter_mut().zip(mean) {
                *v = m + noise.sample(&mut rng);
            }
            let pixel = match (&starts, cfg.image_dims) {
                (Some(starts), Some((height, _))) => Some((i % height, starts[class] + i / height)),
                _ => None,
            };
            let sample = Sample {
                s: ScatteringMatrix::from_components(c),
                label: class,
                pixel,
            };
            if i < cfg.train_per_class {
                train.samples.push(sample);
            } else {
                test.samples.push(sample);
            }
        }
    }
    Ok((train, test))
}
