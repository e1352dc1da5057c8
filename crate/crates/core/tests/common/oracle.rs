//! Derivative-free reference minimizer for small objectives.

/// Nelder–Mead from `start` with initial simplex edge `scale`, restarted from
/// its own result until a restart stops improving.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, start: &[f64], scale: f64, max_evals: usize) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut best_x = start.to_vec();
    let mut best_f = f(start);
    let mut evals = 1;
    let mut edge = scale;
    while evals < max_evals {
        let (x, fx, used) = simplex_run(f, &best_x, edge, max_evals - evals);
        evals += used;
        let improved = fx < best_f - 1e-13 * best_f.abs().max(1.0);
        if fx < best_f {
            best_f = fx;
            best_x = x;
        }
        if !improved {
            if edge < 1e-9 {
                break;
            }
            edge *= 0.1;
        }
    }
    let _ = n;
    (best_x, best_f)
}

fn simplex_run<F: Fn(&[f64]) -> f64>(f: &F, start: &[f64], edge: f64, budget: usize) -> (Vec<f64>, f64, usize) {
    let n = start.len();
    let mut pts: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += edge;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut evals = n + 1;
    while evals < budget {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        let spread = vals[n] - vals[0];
        let size: f64 = pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)).fold(0.0, f64::max);
        if spread <= 1e-15 * vals[0].abs().max(1.0) && size < 1e-12 {
            break;
        }
        let centroid: Vec<f64> = (0..n).map(|k| pts[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|k| centroid[k] + t * (pts[n][k] - centroid[k])).collect() };
        let xr = along(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            let (xc, fc) = if fr < vals[n] {
                let x = along(-0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = along(0.5);
                let v = f(&x);
                (x, v)
            };
            evals += 1;
            if fc < vals[n].min(fr) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                let best = pts[0].clone();
                for i in 1..=n {
                    for (p, b) in pts[i].iter_mut().zip(&best) {
                        *p = b + 0.5 * (*p - b);
                    }
                    vals[i] = f(&pts[i]);
                }
                evals += n;
            }
        }
    }
    let i = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    (pts[i].clone(), vals[i], evals)
}
