//! Proximal operators of the entrywise L1 norm and the nuclear norm.

use alloc::vec::Vec;
use nalgebra::DVector;

use crate::machine::ModelError;
use crate::Matrix;

const SVD_MAX_ITERS: usize = 10_000;

/// `sign(v) * max(0, |v| - t)`.
#[inline]
pub fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Entrywise soft threshold, the minimizer of `½‖X − V‖_F² + t‖X‖₁`.
pub fn prox_soft_threshold(v: &Matrix, t: f64) -> Result<Matrix, ModelError> {
    check_threshold(t)?;
    Ok(v.map(|x| soft_threshold(x, t)))
}

/// Singular value thresholding, the minimizer of `½‖X − V‖_F² + t‖X‖_*`.
pub fn prox_nuclear(v: &Matrix, t: f64) -> Result<Matrix, ModelError> {
    check_threshold(t)?;
    let svd = v
        .clone()
        .try_svd(true, true, f64::EPSILON, SVD_MAX_ITERS)
        .ok_or(ModelError::SvdFailed)?;
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(ModelError::SvdFailed),
    };
    let shrunk: DVector<f64> = svd.singular_values.map(|s| (s - t).max(0.0));
    Ok(u * Matrix::from_diagonal(&shrunk) * v_t)
}

pub fn singular_values(w: &Matrix) -> Result<Vec<f64>, ModelError> {
    if w.is_empty() {
        return Ok(Vec::new());
    }
    let svd = w
        .clone()
        .try_svd(false, false, f64::EPSILON, SVD_MAX_ITERS)
        .ok_or(ModelError::SvdFailed)?;
    Ok(svd.singular_values.iter().copied().collect())
}

/// Sum of singular values.
pub fn nuclear_norm(w: &Matrix) -> Result<f64, ModelError> {
    Ok(singular_values(w)?.iter().sum())
}

/// Entrywise L1 norm.
pub fn l1_norm(w: &Matrix) -> f64 {
    w.iter().map(|x| x.abs()).sum()
}

fn check_threshold(t: f64) -> Result<(), ModelError> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidThreshold(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> Matrix {
        Matrix::from_fn(r, c, |_, _| rng.random_range(-scale..scale))
    }

    /// Singular values through the eigenvalues of WᵀW, sorted descending.
    fn singular_values_by_eigen(w: &Matrix) -> Vec<f64> {
        let gram = w.transpose() * w;
        let mut ev: Vec<f64> = SymmetricEigen::new(gram)
            .eigenvalues
            .iter()
            .map(|l| libm::sqrt(l.max(0.0)))
            .collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        ev.truncate(w.nrows().min(w.ncols()));
        ev
    }

    #[test]
    fn soft_threshold_examples() {
        let v = Matrix::from_row_slice(1, 2, &[3.0, -1.0]);
        assert_eq!(prox_soft_threshold(&v, 2.0).unwrap(), Matrix::from_row_slice(1, 2, &[1.0, 0.0]));
        assert_eq!(prox_soft_threshold(&v, 0.0).unwrap(), v);
        assert_eq!(soft_threshold(-5.0, 1.5), -3.5);
    }

    #[test]
    fn negative_threshold_rejected() {
        let v = Matrix::zeros(2, 2);
        assert!(matches!(prox_soft_threshold(&v, -0.1), Err(ModelError::InvalidThreshold(_))));
        assert!(matches!(prox_nuclear(&v, -1.0), Err(ModelError::InvalidThreshold(_))));
    }

    #[test]
    fn nuclear_examples() {
        let v = Matrix::from_diagonal(&DVector::from_vec(alloc::vec![5.0, 1.0]));
        let out = prox_nuclear(&v, 2.0).unwrap();
        let expected = Matrix::from_diagonal(&DVector::from_vec(alloc::vec![3.0, 0.0]));
        assert!((out - expected).abs().max() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random(&mut rng, 3, 4, 2.0);
        assert!((prox_nuclear(&v, 0.0).unwrap() - &v).abs().max() < 1e-10);
    }

    #[test]
    fn soft_threshold_matches_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v = random(&mut rng, 3, 3, 3.0);
        let t = 0.7;
        let out = prox_soft_threshold(&v, t).unwrap();
        for (x, &vi) in out.iter().zip(v.iter()) {
            // grid over [-4, 4] at 1e-4 spacing
            let mut best = (f64::INFINITY, 0.0);
            for k in -40_000..=40_000 {
                let cand = k as f64 * 1e-4;
                let f = 0.5 * (cand - vi) * (cand - vi) + t * cand.abs();
                if f < best.0 {
                    best = (f, cand);
                }
            }
            assert!((x - best.1).abs() <= 1e-4, "{x} vs {}", best.1);
        }
    }

    #[test]
    fn nuclear_dominates_random_candidates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = random(&mut rng, 3, 3, 2.0);
        let t = 1.0;
        let f = |x: &Matrix| 0.5 * (x - &v).norm_squared() + t * nuclear_norm(x).unwrap();
        let out = prox_nuclear(&v, t).unwrap();
        let best = f(&out);
        for i in 0..10_000 {
            let scale = if i % 2 == 0 { 0.05 } else { 1.0 };
            let cand = &out + random(&mut rng, 3, 3, scale);
            assert!(best <= f(&cand) + 1e-12);
        }
    }

    #[test]
    fn svt_shrinks_each_singular_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let v = random(&mut rng, 3, 5, 2.0);
            let t = rng.random_range(0.0..2.0);
            let before = singular_values_by_eigen(&v);
            let after = singular_values_by_eigen(&prox_nuclear(&v, t).unwrap());
            for (s, s_new) in before.iter().zip(&after) {
                assert!((s_new - (s - t).max(0.0)).abs() < 1e-7, "{s} {t} {s_new}");
            }
        }
    }

    #[test]
    fn norms_of_diagonal() {
        let w = Matrix::from_diagonal(&DVector::from_vec(alloc::vec![2.0, 3.0]));
        assert_eq!(l1_norm(&w), 5.0);
        assert!((nuclear_norm(&w).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(nuclear_norm(&Matrix::zeros(0, 0)).unwrap(), 0.0);
    }
}
