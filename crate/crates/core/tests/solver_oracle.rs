mod common;

use common::oracle::nelder_mead;
use psc_core::{objective, train_binary, BinaryLabel, BinaryModel, LabeledMatrix, Matrix, ObjectiveSpec, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_problem(rng: &mut ChaCha8Rng) -> Vec<LabeledMatrix> {
    let n = rng.random_range(6..=10);
    let dir = Matrix::from_fn(2, 2, |_, _| rng.random_range(-1.0..1.0));
    let mut out = Vec::new();
    while out.len() < n {
        let x = Matrix::from_fn(2, 2, |_, _| rng.random_range(-2.0..2.0));
        let s = dir.dot(&x);
        if s.abs() < 0.2 {
            continue;
        }
        let y = if out.len() % 2 == 0 { BinaryLabel::Positive } else { BinaryLabel::Negative };
        let x = if (s > 0.0) == (y == BinaryLabel::Positive) { x } else { -x };
        out.push(LabeledMatrix::new(x, y));
    }
    out
}

#[test]
fn ssmm_matches_derivative_free_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20190);
    let spec = ObjectiveSpec::ssmm(0.3, 0.1, 0.7);
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let data = random_problem(&mut rng);
        let (model, report) = train_binary(&data, &spec, &SolverConfig::default()).unwrap();
        let solver = objective(&model, &spec, &data).unwrap();
        let f = |v: &[f64]| {
            let m = BinaryModel { w: Matrix::from_column_slice(2, 2, &v[..4]), b: v[4] };
            objective(&m, &spec, &data).unwrap()
        };
        let mut best = f(&[0.0; 5]);
        for _ in 0..50 {
            let start: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
            let (_, v) = nelder_mead(&f, &start, 0.5, 20_000);
            best = best.min(v);
        }
        let rel = (solver - best) / best.abs();
        worst = worst.max(rel);
        eprintln!("case {case}: solver {solver:.9} oracle {best:.9} rel {rel:+.2e} iters {} conv {}", report.iterations, report.converged);
    }
    eprintln!("worst relative excess {worst:.3e}");
    assert!(worst <= 1e-3);
}
