//! Small dense-vector helpers shared by the solvers and probes.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

pub fn all_finite(x: &[f64]) -> bool {
    x.iter().all(|v| v.is_finite())
}

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Largest singular value of a row-major `rows x cols` matrix by power iteration on `AᵀA`.
pub fn spectral_norm(data: &[f64], rows: usize, cols: usize, iters: usize) -> f64 {
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let mut v: Vec<f64> = (0..cols).map(|j| 1.0 + (j as f64) * 1e-3).collect();
    let mut sigma = 0.0;
    for _ in 0..iters {
        let nv = norm(&v);
        if nv == 0.0 {
            return 0.0;
        }
        scale(1.0 / nv, &mut v);
        let av: Vec<f64> = (0..rows).map(|i| dot(&data[i * cols..(i + 1) * cols], &v)).collect();
        sigma = norm(&av);
        let mut atav = vec![0.0; cols];
        for (i, a) in av.iter().enumerate() {
            axpy(*a, &data[i * cols..(i + 1) * cols], &mut atav);
        }
        v = atav;
    }
    sigma
}
