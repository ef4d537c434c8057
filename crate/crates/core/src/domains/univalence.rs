use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{boundary_points, NumericMap};

/// Roots of `z′` must lie outside `|w| ≤ 1 + ROOT_MARGIN`.
pub const ROOT_MARGIN: f64 = 1e-9;
/// Minimum admissible `|z′(e^{iτ})|` on the sample grid.
pub const MIN_BOUNDARY_DERIVATIVE: f64 = 1e-6;
pub const BOUNDARY_SAMPLES: usize = 2048;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnivalenceReport {
    pub univalent: bool,
    /// `min |root of z′|`; `None` when `z′` is constant.
    pub min_root_modulus: Option<f64>,
    pub min_boundary_derivative: f64,
    pub self_intersections: usize,
}

/// Roots of `Σ a_i w^i` via eigenvalues of the companion matrix.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut a = coeffs.to_vec();
    while a.len() > 1 && a.last().is_some_and(|c| c.norm() == 0.0) {
        a.pop();
    }
    let deg = a.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = a[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -a[i] / lead;
    }
    m.schur().eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
}

/// Proper intersection test for segments `pq` and `rs`.
pub fn segments_intersect(p: Complex64, q: Complex64, r: Complex64, s: Complex64) -> bool {
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let d1 = cross(r, s, p);
    let d2 = cross(r, s, q);
    let d3 = cross(p, q, r);
    let d4 = cross(p, q, s);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0
}

fn count_self_intersections(pts: &[Complex64]) -> usize {
    let n = pts.len();
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    // sort segments by left x-extent and sweep
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| seg(i).0.re.min(seg(i).1.re);
    let xmax = |i: usize| seg(i).0.re.max(seg(i).1.re);
    order.sort_by(|&a, &b| xmin(a).total_cmp(&xmin(b)));
    let mut hits = 0;
    for (pos, &i) in order.iter().enumerate() {
        let right = xmax(i);
        for &j in &order[pos + 1..] {
            if xmin(j) > right {
                break;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            let (p, q) = seg(i);
            let (r, s) = seg(j);
            if segments_intersect(p, q, r, s) {
                hits += 1;
            }
        }
    }
    hits
}

/// Certifies that `z(w)` is univalent on the closed unit disk: derivative
/// roots strictly outside it, no near-cusp on the boundary, and a simple
/// sampled boundary curve.
pub fn univalence_check(map: &NumericMap) -> UnivalenceReport {
    let c = map.coefficients();
    let dz: Vec<Complex64> = (1..c.len()).map(|j| c[j] * j as f64).collect();
    let min_root_modulus = polynomial_roots(&dz).iter().map(|r| r.norm()).reduce(f64::min);
    let min_boundary_derivative = (0..BOUNDARY_SAMPLES)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / BOUNDARY_SAMPLES as f64;
            map.derivative(Complex64::from_polar(1.0, t)).norm()
        })
        .fold(f64::INFINITY, f64::min);
    let self_intersections = count_self_intersections(&boundary_points(map, BOUNDARY_SAMPLES));
    let univalent = map.r > 0.0
        && min_root_modulus.is_none_or(|m| m >= 1.0 + ROOT_MARGIN)
        && min_boundary_derivative >= MIN_BOUNDARY_DERIVATIVE
        && self_intersections == 0;
    UnivalenceReport { univalent, min_root_modulus, min_boundary_derivative, self_intersections }
}
