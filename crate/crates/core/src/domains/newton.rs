use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;

use super::moments::{moments_numeric, poly_mul, residue_against_conj};
use super::{univalence_check, DomainError, NumericMap};

pub const NEWTON_MAX_ITERATIONS: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct MapSolution {
    pub map: NumericMap,
    pub iterations: usize,
    pub residual: f64,
}

/// Real residual vector `(Re F₀, Re F₁, Im F₁, ..)` with `F_p = M_p/π − target_p`.
fn residual(map: &NumericMap, targets: &[Complex64]) -> Vec<f64> {
    let m = moments_numeric(map, targets.len() - 1);
    let mut out = vec![m[0].re - targets[0].re];
    for p in 1..targets.len() {
        let d = m[p] - targets[p];
        out.push(d.re);
        out.push(d.im);
    }
    out
}

/// Jacobian of [`residual`] in the real unknowns `(r, Re u₁, Im u₁, ..)`.
///
/// `F_p = Σ_j c̄_j A_p[j−1]` with `A_p = (z − z₁)^p z′` holomorphic in the
/// coefficients `c_j`, so `∂F/∂c̄_j = A_p[j−1]` and
/// `∂F/∂c_k = Σ_j c̄_j ∂A_p[j−1]/∂c_k`, where
/// `∂A_p/∂c_k = p(z − z₁)^{p−1} w^k z′ + k(z − z₁)^p w^{k−1}`.
fn jacobian(map: &NumericMap, pmax: usize) -> DMatrix<f64> {
    let c = map.coefficients();
    let deg = c.len() - 1;
    let shifted: Vec<Complex64> = std::iter::once(Complex64::zero()).chain(c[1..].iter().copied()).collect();
    let dz: Vec<Complex64> = (1..c.len()).map(|j| c[j] * j as f64).collect();
    let mut pw = vec![vec![Complex64::new(1.0, 0.0)]];
    for p in 0..pmax {
        let next = poly_mul(&pw[p], &shifted);
        pw.push(next);
    }
    // (∂F_p/∂c_k, ∂F_p/∂c̄_k) for k = 1..=deg
    let mut grads = vec![vec![(Complex64::zero(), Complex64::zero()); deg + 1]; pmax + 1];
    for p in 0..=pmax {
        let a = poly_mul(&pw[p], &dz);
        for k in 1..=deg {
            let mut wk = vec![Complex64::zero(); k + 1];
            wk[k] = Complex64::new(1.0, 0.0);
            let mut da: Vec<Complex64> = if p > 0 {
                poly_mul(&poly_mul(&pw[p - 1], &wk), &dz).iter().map(|v| v * p as f64).collect()
            } else {
                Vec::new()
            };
            let mut wk1 = vec![Complex64::zero(); k];
            wk1[k - 1] = Complex64::new(k as f64, 0.0);
            let extra = poly_mul(&pw[p], &wk1);
            if da.len() < extra.len() {
                da.resize(extra.len(), Complex64::zero());
            }
            for (d, e) in da.iter_mut().zip(&extra) {
                *d += e;
            }
            let d_c = residue_against_conj(&c, &da);
            let d_cbar = a.get(k - 1).copied().unwrap_or_default();
            grads[p][k] = (d_c, d_cbar);
        }
    }
    let n = 1 + 2 * (deg - 1);
    let mut jac = DMatrix::<f64>::zeros(n, n);
    let put_row = |jac: &mut DMatrix<f64>, row: usize, p: usize, take_im: bool| {
        let part = |v: Complex64| if take_im { v.im } else { v.re };
        let (dc, dcb) = grads[p][1];
        jac[(row, 0)] = part(dc + dcb);
        for k in 2..=deg {
            let (dc, dcb) = grads[p][k];
            jac[(row, 2 * (k - 2) + 1)] = part(dc + dcb);
            jac[(row, 2 * (k - 2) + 2)] = part(Complex64::i() * (dc - dcb));
        }
    };
    put_row(&mut jac, 0, 0, false);
    for p in 1..=pmax {
        put_row(&mut jac, 2 * p - 1, p, false);
        put_row(&mut jac, 2 * p, p, true);
    }
    jac
}

fn apply_step(map: &NumericMap, step: &DVector<f64>, scale: f64) -> NumericMap {
    let mut out = map.clone();
    out.r -= scale * step[0];
    for (i, u) in out.u.iter_mut().enumerate() {
        *u -= scale * Complex64::new(step[2 * i + 1], step[2 * i + 2]);
    }
    out
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Damped Newton on the moments. `targets[p]` is `M_p/π`; the unknowns are
/// `r > 0` and `u₁..u_k̃` with `k̃ = targets.len() − 1`. Without a guess the
/// iteration starts from the disk of the same area.
pub fn solve_map_from_moments(
    z1: Complex64,
    targets: &[Complex64],
    guess: Option<&NumericMap>,
) -> Result<MapSolution, DomainError> {
    if targets.is_empty() {
        return Err(DomainError::InvalidMoments("no targets".into()));
    }
    if targets[0].re.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || !targets.iter().all(|t| t.re.is_finite() && t.im.is_finite())
    {
        return Err(DomainError::InvalidMoments(format!("area moment must be positive, got {}", targets[0])));
    }
    let ktilde = targets.len() - 1;
    let mut map = match guess {
        Some(g) => {
            let mut g = g.clone();
            g.z1 = z1;
            g.u.resize(ktilde, Complex64::zero());
            if g.r.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                g.r = targets[0].re.sqrt();
            }
            g
        }
        None => NumericMap { z1, r: targets[0].re.sqrt(), u: vec![Complex64::zero(); ktilde] },
    };
    let scale = 1.0 + norm(&targets.iter().flat_map(|t| [t.re, t.im]).collect::<Vec<_>>());
    let tol = 1e-12 * scale;
    let mut f = residual(&map, targets);
    let mut fnorm = norm(&f);
    for it in 0..=NEWTON_MAX_ITERATIONS {
        if fnorm <= tol {
            let report = univalence_check(&map);
            if !report.univalent {
                return Err(DomainError::NonUnivalent(Box::new(report)));
            }
            return Ok(MapSolution { map, iterations: it, residual: fnorm });
        }
        if it == NEWTON_MAX_ITERATIONS {
            break;
        }
        let jac = jacobian(&map, ktilde);
        let Some(step) = jac.lu().solve(&DVector::from_vec(f.clone())) else {
            break;
        };
        let mut lambda = 1.0;
        loop {
            let cand = apply_step(&map, &step, lambda);
            if cand.r > 0.0 {
                let fc = residual(&cand, targets);
                let nc = norm(&fc);
                if nc < fnorm || lambda < 1e-6 {
                    map = cand;
                    f = fc;
                    fnorm = nc;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-10 {
                return Err(DomainError::NoConvergence { iterations: it, residual: fnorm });
            }
        }
    }
    Err(DomainError::NoConvergence { iterations: NEWTON_MAX_ITERATIONS, residual: fnorm })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let map = NumericMap { z1: c(2.0, 0.5), r: 1.1, u: vec![c(0.1, -0.05), c(0.02, 0.03)] };
        let targets = vec![Complex64::zero(); 3];
        let jac = jacobian(&map, 2);
        let h = 1e-6;
        for col in 0..5 {
            let mut e = DVector::zeros(5);
            e[col] = -h;
            let fp = residual(&apply_step(&map, &e, 1.0), &targets);
            e[col] = h;
            let fm = residual(&apply_step(&map, &e, 1.0), &targets);
            for row in 0..5 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                assert!((fd - jac[(row, col)]).abs() < 1e-7, "row {row} col {col}: {fd} vs {}", jac[(row, col)]);
            }
        }
    }

    #[test]
    fn disk_is_a_fixed_point() {
        let sol = solve_map_from_moments(c(2.0, 0.0), &[c(4.0, 0.0), c(0.0, 0.0)], None).unwrap();
        assert!((sol.map.r - 2.0).abs() < 1e-14);
        assert!(sol.map.u[0].norm() < 1e-14);
    }

    #[test]
    fn round_trip_one_coefficient() {
        let truth = NumericMap { z1: c(2.0, 0.0), r: 1.0, u: vec![c(0.25, 0.0)] };
        let targets = moments_numeric(&truth, 1);
        let sol = solve_map_from_moments(truth.z1, &targets, None).unwrap();
        assert!(sol.map.max_coefficient_distance(&truth) < 1e-12);
    }

    #[test]
    fn rejects_negative_area() {
        assert!(matches!(
            solve_map_from_moments(c(0.0, 0.0), &[c(-1.0, 0.0)], None),
            Err(DomainError::InvalidMoments(_))
        ));
    }
}
