//! Complex scattering data, labelled samples and datasets.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Real or imaginary part of a complex value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Re,
    Im,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Re => "re",
            Component::Im => "im",
        })
    }
}

/// Transmit/receive polarization pair naming one entry of a scattering matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Hh,
    Hv,
    Vh,
    Vv,
}

impl Polarization {
    pub const ALL: [Polarization; 4] = [Polarization::Hh, Polarization::Hv, Polarization::Vh, Polarization::Vv];
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::Hh => "HH",
            Polarization::Hv => "HV",
            Polarization::Vh => "VH",
            Polarization::Vv => "VV",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    pub const ZERO: ComplexValue = ComplexValue { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        ComplexValue { re, im }
    }

    /// First non-finite component, if any.
    pub fn non_finite_component(&self) -> Option<Component> {
        if !self.re.is_finite() {
            Some(Component::Re)
        } else if !self.im.is_finite() {
            Some(Component::Im)
        } else {
            None
        }
    }

    pub fn is_finite(&self) -> bool {
        self.non_finite_component().is_none()
    }

    /// `|re| + |im|`, the mass this value contributes to its PSC block.
    pub fn l1_mass(&self) -> f64 {
        self.re.abs() + self.im.abs()
    }
}

/// One pixel's 2×2 complex scattering matrix `[[HH, HV], [VH, VV]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScatteringMatrix {
    pub hh: ComplexValue,
    pub hv: ComplexValue,
    pub vh: ComplexValue,
    pub vv: ComplexValue,
}

impl ScatteringMatrix {
    pub const fn new(hh: ComplexValue, hv: ComplexValue, vh: ComplexValue, vv: ComplexValue) -> Self {
        ScatteringMatrix { hh, hv, vh, vv }
    }

    /// Builds a matrix from `[hh_re, hh_im, hv_re, hv_im, vh_re, vh_im, vv_re, vv_im]`.
    pub fn from_components(c: [f64; 8]) -> Self {
        ScatteringMatrix {
            hh: ComplexValue::new(c[0], c[1]),
            hv: ComplexValue::new(c[2], c[3]),
            vh: ComplexValue::new(c[4], c[5]),
            vv: ComplexValue::new(c[6], c[7]),
        }
    }

    /// Inverse of [`ScatteringMatrix::from_components`].
    pub fn components(&self) -> [f64; 8] {
        [
            self.hh.re, self.hh.im, self.hv.re, self.hv.im, self.vh.re, self.vh.im, self.vv.re, self.vv.im,
        ]
    }

    pub fn entry(&self, pol: Polarization) -> ComplexValue {
        match pol {
            Polarization::Hh => self.hh,
            Polarization::Hv => self.hv,
            Polarization::Vh => self.vh,
            Polarization::Vv => self.vv,
        }
    }

    /// First non-finite entry and component, scanning HH, HV, VH, VV.
    pub fn non_finite(&self) -> Option<(Polarization, Component)> {
        Polarization::ALL
            .iter()
            .find_map(|&p| self.entry(p).non_finite_component().map(|c| (p, c)))
    }

    pub fn l1_mass(&self) -> f64 {
        Polarization::ALL.iter().map(|&p| self.entry(p).l1_mass()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub s: ScatteringMatrix,
    /// 0-based class index into the owning dataset's `class_names`.
    pub label: usize,
    /// `(row, col)` position in the image grid, when known.
    pub pixel: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub class_names: Vec<String>,
    /// `(height, width)` of the image the samples were taken from.
    pub image_dims: Option<(usize, usize)>,
}

impl Dataset {
    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.label).collect()
    }
}

/// A broken dataset invariant, reported by [`validate_dataset`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoClasses,
    LabelOutOfRange {
        sample: usize,
        label: usize,
        classes: usize,
    },
    NonFinite {
        sample: usize,
        entry: Polarization,
        component: Component,
    },
    PixelOutsideGrid {
        sample: usize,
        pixel: (usize, usize),
        dims: (usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoClasses => write!(f, "dataset has no class names"),
            Violation::LabelOutOfRange { sample, label, classes } => {
                write!(f, "sample {sample}: label out of range ({label} not in 0..{classes})")
            }
            Violation::NonFinite { sample, entry, component } => {
                write!(f, "sample {sample}: non-finite entry {entry}.{component}")
            }
            Violation::PixelOutsideGrid { sample, pixel, dims } => write!(
                f,
                "sample {sample}: pixel ({}, {}) outside {}x{} grid",
                pixel.0, pixel.1, dims.0, dims.1
            ),
        }
    }
}

/// Lists every broken invariant of `d`; empty means the dataset is valid.
pub fn validate_dataset(d: &Dataset) -> Vec<Violation> {
    let mut out = Vec::new();
    let k = d.class_names.len();
    if k == 0 {
        out.push(Violation::NoClasses);
    }
    for (i, sample) in d.samples.iter().enumerate() {
        if sample.label >= k {
            out.push(Violation::LabelOutOfRange {
                sample: i,
                label: sample.label,
                classes: k,
            });
        }
        for pol in Polarization::ALL {
            let z = sample.s.entry(pol);
            for (component, value) in [(Component::Re, z.re), (Component::Im, z.im)] {
                if !value.is_finite() {
                    out.push(Violation::NonFinite {
                        sample: i,
                        entry: pol,
                        component,
                    });
                }
            }
        }
        if let (Some(dims), Some(pixel)) = (d.image_dims, sample.pixel) {
            if pixel.0 >= dims.0 || pixel.1 >= dims.1 {
                out.push(Violation::PixelOutsideGrid { sample: i, pixel, dims });
            }
        }
    }
    out
}
