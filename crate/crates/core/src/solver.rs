//! Consensus ADMM for the matrix-machine objectives.
//!
//! The objective is split into up to three terms, each owning a local copy
//! `Zⱼ` of the regression matrix tied to the global `W` by `Zⱼ = W`:
//!
//! * loss block: `C·Σ h_μ(yᵢ(⟨Z, Xᵢ⟩ + b))` plus `½‖Z‖²` for SMM/SVM, minimized
//!   jointly with the bias by damped Newton steps on the smoothed hinge;
//! * L1 block: `γ‖Z‖₁`, closed-form soft threshold;
//! * nuclear block: `τ‖Z‖_*`, closed-form singular value thresholding.
//!
//! Each iteration runs the scaled-form updates
//!
//! ```text
//! Zⱼ ← prox_{fⱼ/ρ}(W − Uⱼ)
//! W  ← mean(Zⱼ + Uⱼ)
//! Uⱼ ← Uⱼ + Zⱼ − W
//! ```
//!
//! A phase ends once the primal residual `sqrt(Σ‖Zⱼ − W‖²)` and the dual
//! residual `ρ·sqrt(N)·‖W − W_prev‖` are both under tolerance; the solver then
//! moves to the next, narrower smoothing width and stops after the last.

use alloc::vec;
use alloc::vec::Vec;

use crate::hinge::{hinge, smoothed_hinge, smoothed_hinge_curvature, smoothed_hinge_grad, SMOOTHING};

/// Smoothing widths used in turn: the main phase at [`SMOOTHING`], then
/// warm-started continuation phases that shrink the surrogate's bias.
pub const SMOOTHING_SCHEDULE: [f64; 4] = [SMOOTHING, 1e-4, 1e-5, 1e-6];
use crate::machine::{penalty, BinaryLabel, BinaryModel, LabeledMatrix, ModelError, ObjectiveSpec, Terms};
use crate::prox::{prox_nuclear, soft_threshold};
use crate::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// ADMM penalty ρ.
    pub rho: f64,
    pub max_iters: usize,
    pub tol_primal: f64,
    pub tol_dual: f64,
    /// Newton steps allowed per loss-block solve.
    pub inner_iters: usize,
    /// Initial step length of the loss-block line search.
    pub inner_step: f64,
    /// Recorded with the model; the solver itself draws no random numbers.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rho: 1.0,
            max_iters: 2_000,
            tol_primal: 1e-5,
            tol_dual: 1e-5,
            inner_iters: 50,
            inner_step: 1.0,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.rho) {
            return Err(ModelError::InvalidConfig("rho must be positive"));
        }
        if self.max_iters == 0 {
            return Err(ModelError::InvalidConfig("max_iters must be positive"));
        }
        if !positive(self.tol_primal) || !positive(self.tol_dual) {
            return Err(ModelError::InvalidConfig("tolerances must be positive"));
        }
        if self.inner_iters == 0 {
            return Err(ModelError::InvalidConfig("inner_iters must be positive"));
        }
        if !positive(self.inner_step) {
            return Err(ModelError::InvalidConfig("inner_step must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// Both residuals fell under tolerance before `max_iters`.
    pub converged: bool,
    /// Objective of the candidate model after every iteration.
    pub objective_trace: Vec<f64>,
    /// Objective of the returned model.
    pub objective: f64,
}

/// Flattened training set: sample `i` occupies `x[i*p..(i+1)*p]` in `W`'s storage order.
struct Problem {
    x: Vec<f64>,
    y: Vec<f64>,
    n: usize,
    p: usize,
    shape: (usize, usize),
}

impl Problem {
    fn new(data: &[LabeledMatrix]) -> Result<Self, ModelError> {
        let first = data.first().ok_or(ModelError::EmptyData)?;
        let shape = first.x.shape();
        let p = shape.0 * shape.1;
        let mut x = Vec::with_capacity(data.len() * p);
        let mut y = Vec::with_capacity(data.len());
        let (mut pos, mut neg) = (false, false);
        for (i, sample) in data.iter().enumerate() {
            if sample.x.shape() != shape {
                return Err(ModelError::ShapeMismatch {
                    sample: i,
                    expected: shape,
                    found: sample.x.shape(),
                });
            }
            if sample.x.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::InvalidModel("training input contains non-finite values"));
            }
            x.extend_from_slice(sample.x.as_slice());
            y.push(sample.y.sign());
            match sample.y {
                BinaryLabel::Positive => pos = true,
                BinaryLabel::Negative => neg = true,
            }
        }
        if !pos {
            return Err(ModelError::SingleClass(BinaryLabel::Negative));
        }
        if !neg {
            return Err(ModelError::SingleClass(BinaryLabel::Positive));
        }
        Ok(Problem {
            x,
            y,
            n: data.len(),
            p,
            shape,
        })
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.p..(i + 1) * self.p]
    }

    fn margins(&self, w: &[f64], b: f64, out: &mut [f64]) {
        for (i, m) in out.iter_mut().enumerate() {
            *m = self.y[i] * (dot(self.row(i), w) + b);
        }
    }

    fn hinge_sum(&self, w: &[f64], b: f64) -> f64 {
        (0..self.n).map(|i| hinge(self.y[i] * (dot(self.row(i), w) + b))).sum()
    }

    /// Bias minimizing the exact hinge sum for fixed `w`, chosen as the point
    /// of the minimizing interval closest to `b`.
    ///
    /// A positive sample is active for `b < 1 − sᵢ` (slope −1), a negative one
    /// for `b > −1 − sᵢ` (slope +1), with `sᵢ = ⟨w, xᵢ⟩`.
    fn refit_bias(&self, w: &[f64], b: f64) -> f64 {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for i in 0..self.n {
            let s = dot(self.row(i), w);
            if self.y[i] > 0.0 {
                pos.push(1.0 - s);
            } else {
                neg.push(-1.0 - s);
            }
        }
        pos.sort_by(f64::total_cmp);
        neg.sort_by(f64::total_cmp);
        // slope just right / left of t
        let right = |t: f64| neg.partition_point(|&v| v <= t) as i64 - (pos.len() - pos.partition_point(|&v| v <= t)) as i64;
        let left = |t: f64| neg.partition_point(|&v| v < t) as i64 - (pos.len() - pos.partition_point(|&v| v < t)) as i64;
        let mut breaks: Vec<f64> = pos.iter().chain(&neg).copied().collect();
        breaks.sort_by(f64::total_cmp);
        if right(b) < 0 {
            // slope is nondecreasing, so the first breakpoint past b with a nonnegative right slope
            let start = breaks.partition_point(|&t| t <= b);
            let idx = start + breaks[start..].partition_point(|&t| right(t) < 0);
            breaks.get(idx).copied().unwrap_or(b)
        } else if left(b) > 0 {
            let end = breaks.partition_point(|&t| t < b);
            let idx = breaks[..end].partition_point(|&t| left(t) <= 0);
            if idx == 0 {
                b
            } else {
                breaks[idx - 1]
            }
        } else {
            b
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Minimizes `C·Σ h_μ(yᵢ(⟨z, xᵢ⟩ + b)) + (κ/2)‖z − center‖²` over `(z, b)`.
struct LossBlock<'a> {
    problem: &'a Problem,
    c: f64,
    kappa: f64,
    mu: f64,
    /// Extra curvature on `b` in the Newton system; `b` itself is unpenalized.
    b_damping: f64,
    margins: Vec<f64>,
    trial: Vec<f64>,
    slope: Vec<f64>,
}

impl<'a> LossBlock<'a> {
    fn new(problem: &'a Problem, terms: &Terms, rho: f64) -> Self {
        let kappa = rho + if terms.frobenius { 1.0 } else { 0.0 };
        LossBlock {
            problem,
            c: terms.c,
            kappa,
            mu: SMOOTHING,
            b_damping: rho,
            margins: vec![0.0; problem.n],
            trial: vec![0.0; problem.n],
            slope: vec![0.0; problem.n],
        }
    }

    fn value(&self, margins: &[f64], z: &[f64], center: &[f64]) -> f64 {
        let loss: f64 = margins.iter().map(|&m| smoothed_hinge(m, self.mu)).sum();
        self.c * loss + 0.5 * self.kappa * dist_sq(z, center)
    }

    /// Warm-started from `(z, b)`; `v` is the ADMM point `W − U` for this block.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn solve(&mut self, z: &mut [f64], b: &mut f64, v: &[f64], rho: f64, cfg: &SolverConfig) {
        let p = self.problem.p;
        let dim = p + 1;
        let center: Vec<f64> = v.iter().map(|x| rho * x / self.kappa).collect();
        let grad_tol = 1e-3 * cfg.tol_primal.min(cfg.tol_dual) * self.kappa;
        let mut grad = vec![0.0; dim];
        let mut hess = Matrix::zeros(dim, dim);

        self.problem.margins(z, *b, &mut self.margins);
        let mut value = self.value(&self.margins, z, &center);

        for _ in 0..cfg.inner_iters {
            grad.iter_mut().for_each(|g| *g = 0.0);
            hess.fill(0.0);
            for i in 0..self.problem.n {
                let m = self.margins[i];
                let g = smoothed_hinge_grad(m, self.mu);
                if g == 0.0 {
                    continue;
                }
                let row = self.problem.row(i);
                let coef = self.c * g * self.problem.y[i];
                for (gk, xk) in grad[..p].iter_mut().zip(row) {
                    *gk += coef * xk;
                }
                grad[p] += coef;
                let curv = smoothed_hinge_curvature(m, self.mu);
                if curv != 0.0 {
                    let w = self.c * curv;
                    for r in 0..dim {
                        let xr = if r < p { row[r] } else { 1.0 };
                        for col in 0..=r {
                            let xc = if col < p { row[col] } else { 1.0 };
                            hess[(r, col)] += w * xr * xc;
                        }
                    }
                }
            }
            for k in 0..p {
                grad[k] += self.kappa * (z[k] - center[k]);
            }
            if grad.iter().all(|g| g.abs() <= grad_tol) {
                break;
            }
            for k in 0..p {
                hess[(k, k)] += self.kappa;
            }
            hess[(p, p)] += self.b_damping;
            for r in 0..dim {
                for col in r + 1..dim {
                    hess[(r, col)] = hess[(col, r)];
                }
            }
            let Some(chol) = hess.clone().cholesky() else {
                break;
            };
            let rhs = nalgebra::DVector::from_iterator(dim, grad.iter().map(|g| -g));
            let dir = chol.solve(&rhs);
            let descent: f64 = dir.iter().zip(&grad).map(|(d, g)| d * g).sum();
            if !(descent < 0.0) {
                break;
            }

            for i in 0..self.problem.n {
                self.slope[i] = self.problem.y[i] * (dot(self.problem.row(i), &dir.as_slice()[..p]) + dir[p]);
            }
            let mut step = cfg.inner_step;
            let mut accepted = false;
            let mut z_trial = vec![0.0; p];
            for _ in 0..60 {
                for i in 0..self.problem.n {
                    self.trial[i] = self.margins[i] + step * self.slope[i];
                }
                for k in 0..p {
                    z_trial[k] = z[k] + step * dir[k];
                }
                let trial_value = self.value(&self.trial, &z_trial, &center);
                if trial_value <= value + 1e-4 * step * descent {
                    z.copy_from_slice(&z_trial);
                    *b += step * dir[p];
                    core::mem::swap(&mut self.margins, &mut self.trial);
                    accepted = trial_value < value;
                    value = trial_value;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
    }
}

/// Trains one binary machine on `data` by consensus ADMM.
///
/// Starts from `W = 0`, `b = 0` and zero duals. Returns the iterate with the
/// lowest exact objective, its bias refit against the exact hinge;
/// `converged` is false when `max_iters` ran out before the last smoothing
/// phase met both tolerances.
pub fn train_binary(
    data: &[LabeledMatrix],
    spec: &ObjectiveSpec,
    cfg: &SolverConfig,
) -> Result<(BinaryModel, TrainReport), ModelError> {
    spec.validate()?;
    cfg.validate()?;
    let problem = Problem::new(data)?;
    let terms = spec.terms();
    let (rows, cols) = problem.shape;
    let p = problem.p;
    let rho = cfg.rho;
    let use_l1 = terms.l1 > 0.0;
    let use_nuclear = terms.nuclear > 0.0;
    let blocks = 1 + usize::from(use_l1) + usize::from(use_nuclear);

    let mut w = vec![0.0; p];
    let mut b = 0.0;
    let mut z_loss = vec![0.0; p];
    let mut u_loss = vec![0.0; p];
    let mut z_l1 = vec![0.0; p];
    let mut u_l1 = vec![0.0; p];
    let mut z_nuc = vec![0.0; p];
    let mut u_nuc = vec![0.0; p];
    let mut v = vec![0.0; p];
    let mut w_new = vec![0.0; p];

    let mut loss_block = LossBlock::new(&problem, &terms, rho);
    let mut trace = Vec::new();
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let (mut primal, mut dual) = (f64::INFINITY, f64::INFINITY);
    let mut converged = false;
    let mut iterations = 0;
    let mut phase = 0;

    for _ in 0..cfg.max_iters {
        iterations += 1;
        loss_block.mu = SMOOTHING_SCHEDULE[phase];

        for k in 0..p {
            v[k] = w[k] - u_loss[k];
        }
        loss_block.solve(&mut z_loss, &mut b, &v, rho, cfg);

        if use_l1 {
            let t = terms.l1 / rho;
            for k in 0..p {
                z_l1[k] = soft_threshold(w[k] - u_l1[k], t);
            }
        }
        if use_nuclear {
            for k in 0..p {
                v[k] = w[k] - u_nuc[k];
            }
            let shrunk = prox_nuclear(&Matrix::from_column_slice(rows, cols, &v), terms.nuclear / rho)?;
            z_nuc.copy_from_slice(shrunk.as_slice());
        }

        for k in 0..p {
            let mut sum = z_loss[k] + u_loss[k];
            if use_l1 {
                sum += z_l1[k] + u_l1[k];
            }
            if use_nuclear {
                sum += z_nuc[k] + u_nuc[k];
            }
            w_new[k] = sum / blocks as f64;
        }

        let mut primal_sq = 0.0;
        for k in 0..p {
            let r = z_loss[k] - w_new[k];
            u_loss[k] += r;
            primal_sq += r * r;
            if use_l1 {
                let r = z_l1[k] - w_new[k];
                u_l1[k] += r;
                primal_sq += r * r;
            }
            if use_nuclear {
                let r = z_nuc[k] - w_new[k];
                u_nuc[k] += r;
                primal_sq += r * r;
            }
        }
        primal = libm::sqrt(primal_sq);
        dual = rho * libm::sqrt(blocks as f64) * libm::sqrt(dist_sq(&w_new, &w));
        core::mem::swap(&mut w, &mut w_new);

        // The sparse (or low-rank) block carries the exact structure the penalty induces.
        let candidate = if use_l1 {
            &z_l1
        } else if use_nuclear {
            &z_nuc
        } else {
            &w
        };
        let value = penalty(&Matrix::from_column_slice(rows, cols, candidate), &terms)?
            + terms.c * problem.hinge_sum(candidate, b);
        trace.push(value);
        if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
            best = Some((value, candidate.clone(), b));
        }

        if primal <= cfg.tol_primal && dual <= cfg.tol_dual {
            phase += 1;
            if phase == SMOOTHING_SCHEDULE.len() {
                converged = true;
                break;
            }
        }
    }

    let (mut value, best_w, mut best_b) = best.expect("at least one iteration ran");
    // The loss block sees a smoothed hinge; refitting b against the exact hinge
    // removes the part of the smoothing bias carried by the unpenalized bias.
    let refit = problem.refit_bias(&best_w, best_b);
    let w_penalty = value - terms.c * problem.hinge_sum(&best_w, best_b);
    let refit_value = w_penalty + terms.c * problem.hinge_sum(&best_w, refit);
    if refit_value < value {
        value = refit_value;
        best_b = refit;
    }
    Ok((
        BinaryModel {
            w: Matrix::from_column_slice(rows, cols, &best_w),
            b: best_b,
        },
        TrainReport {
            iterations,
            primal_residual: primal,
            dual_residual: dual,
            converged,
            objective_trace: trace,
            objective: value,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{decision_value, objective};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalar(v: f64) -> Matrix {
        Matrix::from_element(1, 1, v)
    }

    fn separable(rng: &mut ChaCha8Rng, n: usize, rows: usize, cols: usize) -> Vec<LabeledMatrix> {
        let dir = Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0));
        let mut out = Vec::new();
        while out.len() < n {
            let x = Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0));
            let s = dir.dot(&x);
            if s.abs() < 0.3 {
                continue;
            }
            let y = if out.len() % 2 == 0 { BinaryLabel::Positive } else { BinaryLabel::Negative };
            let x = if (s > 0.0) == (y == BinaryLabel::Positive) { x } else { -x };
            out.push(LabeledMatrix::new(x, y));
        }
        out
    }

    #[test]
    fn one_dimensional_separable() {
        let data = [
            LabeledMatrix::new(scalar(1.0), BinaryLabel::Positive),
            LabeledMatrix::new(scalar(-1.0), BinaryLabel::Negative),
        ];
        let (model, report) = train_binary(&data, &ObjectiveSpec::svm(10.0), &SolverConfig::default()).unwrap();
        assert!(decision_value(&model, &scalar(1.0)).unwrap() > 0.0);
        assert!(decision_value(&model, &scalar(-1.0)).unwrap() < 0.0);
        assert!(report.converged);
        // minimizer of ½w² + 10·(2·max(0, 1 − w)) is w = 1, b = 0
        assert!((model.w[0] - 1.0).abs() < 1e-3, "{}", model.w[0]);
    }

    #[test]
    fn rejects_single_class_and_bad_shapes() {
        let data = [
            LabeledMatrix::new(scalar(1.0), BinaryLabel::Positive),
            LabeledMatrix::new(scalar(2.0), BinaryLabel::Positive),
        ];
        let spec = ObjectiveSpec::svm(1.0);
        let cfg = SolverConfig::default();
        assert_eq!(
            train_binary(&data, &spec, &cfg).unwrap_err(),
            ModelError::SingleClass(BinaryLabel::Positive)
        );
        let data = [
            LabeledMatrix::new(scalar(1.0), BinaryLabel::Positive),
            LabeledMatrix::new(Matrix::zeros(2, 1), BinaryLabel::Negative),
        ];
        assert!(matches!(
            train_binary(&data, &spec, &cfg),
            Err(ModelError::ShapeMismatch { sample: 1, .. })
        ));
        assert_eq!(train_binary(&[], &spec, &cfg).unwrap_err(), ModelError::EmptyData);
        let bad_cfg = SolverConfig { rho: 0.0, ..cfg };
        let data = [
            LabeledMatrix::new(scalar(1.0), BinaryLabel::Positive),
            LabeledMatrix::new(scalar(-1.0), BinaryLabel::Negative),
        ];
        assert!(matches!(train_binary(&data, &spec, &bad_cfg), Err(ModelError::InvalidConfig(_))));
    }

    #[test]
    fn all_variants_converge_on_separable_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let data = separable(&mut rng, 20, 2, 2);
        for spec in [
            ObjectiveSpec::ssmm(0.3, 0.1, 10.0),
            ObjectiveSpec::smm(0.1, 10.0),
            ObjectiveSpec::svm(10.0),
            ObjectiveSpec::ssvm(0.3, 10.0),
        ] {
            let (model, report) = train_binary(&data, &spec, &SolverConfig::default()).unwrap();
            assert!(report.converged, "{spec:?} {report:?}");
            for s in &data {
                assert!(decision_value(&model, &s.x).unwrap() * s.y.sign() > 0.0, "{spec:?}");
            }
            let direct = objective(&model, &spec, &data).unwrap();
            assert!((direct - report.objective).abs() <= 1e-9 * direct.max(1.0));
        }
    }

    #[test]
    fn objective_trace_ends_near_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let data = separable(&mut rng, 10, 2, 2);
        let spec = ObjectiveSpec::ssmm(0.3, 0.1, 0.7);
        let (_, report) = train_binary(&data, &spec, &SolverConfig::default()).unwrap();
        let start = 0.7 * data.len() as f64;
        assert!(report.objective < start);
        assert_eq!(report.objective_trace.len(), report.iterations);
        let min = report.objective_trace.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(report.objective <= min);
    }

    #[test]
    fn deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let data = separable(&mut rng, 12, 3, 2);
        let spec = ObjectiveSpec::ssmm(0.3, 0.1, 0.7);
        let cfg = SolverConfig { seed: 42, ..SolverConfig::default() };
        let a = train_binary(&data, &spec, &cfg).unwrap();
        let b = train_binary(&data, &spec, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_convergence_returns_best_iterate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let data = separable(&mut rng, 12, 2, 2);
        let spec = ObjectiveSpec::ssmm(0.3, 0.1, 0.7);
        let cfg = SolverConfig {
            max_iters: 3,
            ..SolverConfig::default()
        };
        let (model, report) = train_binary(&data, &spec, &cfg).unwrap();
        assert!(!report.converged);
        assert_eq!(report.iterations, 3);
        let min = report.objective_trace.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(report.objective <= min);
        assert!((objective(&model, &spec, &data).unwrap() - report.objective).abs() < 1e-12);
    }
}
