//! Polarimetric scattering coding.
//!
//! Each complex value `x + yi` becomes a 2×2 nonnegative block whose nonzero
//! positions are fixed by the sign quadrant of `(x, y)`:
//!
//! | quadrant       | block                  |
//! |----------------|------------------------|
//! | `x ≥ 0, y ≥ 0` | `[[x, y], [0, 0]]`     |
//! | `x < 0, y ≥ 0` | `[[0, y], [|x|, 0]]`   |
//! | `x < 0, y < 0` | `[[0, 0], [|x|, |y|]]` |
//! | `x ≥ 0, y < 0` | `[[x, 0], [0, |y|]]`   |
//!
//! Zero components count as nonnegative. A scattering matrix
//! `[[HH, HV], [VH, VV]]` maps to the 4×4 matrix holding the four blocks in
//! the same arrangement.

use alloc::vec::Vec;
use thiserror::Error;

use crate::scattering::{Component, ComplexValue, Dataset, Polarization, ScatteringMatrix};
use crate::Matrix;

/// 2×2 real block, `block[row][col]`.
pub type Block = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("non-finite {component} component")]
    NonFinite { component: Component },
    #[error("non-finite {entry}.{component}")]
    NonFiniteEntry { entry: Polarization, component: Component },
    #[error("sample {sample}: non-finite {entry}.{component}")]
    NonFiniteSample {
        sample: usize,
        entry: Polarization,
        component: Component,
    },
}

/// Sign quadrant of a complex value under the zero-is-nonnegative convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrant {
    /// `re ≥ 0, im ≥ 0`
    First,
    /// `re < 0, im ≥ 0`
    Second,
    /// `re < 0, im < 0`
    Third,
    /// `re ≥ 0, im < 0`
    Fourth,
}

impl Quadrant {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn of(z: ComplexValue) -> Quadrant {
        // `!(v < 0.0)` keeps -0.0 on the nonnegative side.
        match (!(z.re < 0.0), !(z.im < 0.0)) {
            (true, true) => Quadrant::First,
            (false, true) => Quadrant::Second,
            (false, false) => Quadrant::Third,
            (true, false) => Quadrant::Fourth,
        }
    }

    /// Block positions `(row, col)` holding `|re|` and `|im|`.
    pub fn positions(self) -> [(usize, usize); 2] {
        match self {
            Quadrant::First => [(0, 0), (0, 1)],
            Quadrant::Second => [(1, 0), (0, 1)],
            Quadrant::Third => [(1, 0), (1, 1)],
            Quadrant::Fourth => [(0, 0), (1, 1)],
        }
    }
}

pub fn encode_complex(z: ComplexValue) -> Result<Block, EncodeError> {
    if let Some(component) = z.non_finite_component() {
        return Err(EncodeError::NonFinite { component });
    }
    let [(rr, rc), (ir, ic)] = Quadrant::of(z).positions();
    let mut block = [[0.0; 2]; 2];
    block[rr][rc] = z.re.abs();
    block[ir][ic] = z.im.abs();
    Ok(block)
}

/// The 4×4 coded matrix of one pixel, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PscMatrix(pub [f64; 16]);

impl PscMatrix {
    pub const ROWS: usize = 4;
    pub const COLS: usize = 4;

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[row * 4 + col]
    }

    pub fn as_slice(&self) -> &[f64; 16] {
        &self.0
    }

    /// The 2×2 block at block coordinates `(br, bc)`; `(0, 1)` is the HV block.
    pub fn block(&self, br: usize, bc: usize) -> Block {
        let mut out = [[0.0; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.get(2 * br + r, 2 * bc + c);
            }
        }
        out
    }

    fn set_block(&mut self, br: usize, bc: usize, block: &Block) {
        for (r, row) in block.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                self.0[(2 * br + r) * 4 + 2 * bc + c] = v;
            }
        }
    }

    pub fn nonzeros(&self) -> usize {
        self.0.iter().filter(|v| **v != 0.0).count()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_row_slice(4, 4, &self.0)
    }

    /// Row-major 1×16 vectorization, the input of the vector classifiers.
    pub fn to_row_vector(&self) -> Matrix {
        Matrix::from_row_slice(1, 16, &self.0)
    }

    /// Reshapes into a classifier input of the given shape: 4×4 or 1×16.
    pub fn to_shape(&self, shape: (usize, usize)) -> Option<Matrix> {
        match shape {
            (4, 4) => Some(self.to_matrix()),
            (1, 16) => Some(self.to_row_vector()),
            _ => None,
        }
    }
}

pub fn encode_scattering(s: &ScatteringMatrix) -> Result<PscMatrix, EncodeError> {
    let mut out = PscMatrix::default();
    for (pol, (br, bc)) in Polarization::ALL.into_iter().zip([(0, 0), (0, 1), (1, 0), (1, 1)]) {
        let block = encode_complex(s.entry(pol)).map_err(|e| match e {
            EncodeError::NonFinite { component } => EncodeError::NonFiniteEntry { entry: pol, component },
            other => other,
        })?;
        out.set_block(br, bc, &block);
    }
    Ok(out)
}

/// Encodes every sample of `d`, in order, paired with its class index.
pub fn encode_dataset(d: &Dataset) -> Result<Vec<(PscMatrix, usize)>, EncodeError> {
    d.samples
        .iter()
        .enumerate()
        .map(|(i, sample)| {
            encode_scattering(&sample.s)
                .map(|m| (m, sample.label))
                .map_err(|e| match e {
                    EncodeError::NonFiniteEntry { entry, component } => EncodeError::NonFiniteSample {
                        sample: i,
                        entry,
                        component,
                    },
                    other => other,
                })
        })
        .collect()
}
