//! Trigonometric ring in `u = e^{iθ}` with an attached power of `ρ = |z|`.
//!
//! An element `ρ^p Σ c_m u^m` converts to a polynomial in `(z, z̄)` exactly
//! when every harmonic satisfies `|m| ≤ p` and `m ≡ p (mod 2)`, since
//! `ρ^p u^m = z^{(p+m)/2} z̄^{(p−m)/2}`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{AlgebraError, GaussRat, LaurentPoly, Poly2};

#[derive(Clone, Debug, PartialEq)]
pub struct TrigElem {
    pub harmonics: LaurentPoly,
    pub rho_power: i64,
}

impl TrigElem {
    pub fn zero() -> Self {
        TrigElem { harmonics: LaurentPoly::zero(), rho_power: 0 }
    }

    pub fn one() -> Self {
        TrigElem::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        TrigElem { harmonics: LaurentPoly::constant(c), rho_power: 0 }
    }

    pub fn from_harmonics(harmonics: LaurentPoly) -> Self {
        TrigElem { harmonics, rho_power: 0 }
    }

    /// `sin(kθ + qπ/2)`.
    pub fn sin_phase(k: i64, quarter_turns: i64) -> Self {
        // (i^q u^k − i^{−q} u^{−k}) / 2i
        let half_inv_i = &GaussRat::ratio(-1, 2) * &GaussRat::i();
        let plus = &GaussRat::i_pow(quarter_turns) * &half_inv_i;
        let minus = -(&GaussRat::i_pow(-quarter_turns) * &half_inv_i);
        TrigElem::from_harmonics(LaurentPoly::from_terms([(k, plus), (-k, minus)]))
    }

    /// `sin(kθ)`.
    pub fn sin(k: i64) -> Self {
        TrigElem::sin_phase(k, 0)
    }

    /// `cos(kθ)`.
    pub fn cos(k: i64) -> Self {
        TrigElem::sin_phase(k, 1)
    }

    pub fn rho(p: i64) -> Self {
        TrigElem { harmonics: LaurentPoly::constant(GaussRat::one()), rho_power: p }
    }

    pub fn is_zero(&self) -> bool {
        self.harmonics.is_zero()
    }

    pub fn with_rho_power(&self, p: i64) -> Self {
        TrigElem { harmonics: self.harmonics.clone(), rho_power: p }
    }

    /// `∂_θ`, using `∂_θ u^m = i m u^m`.
    pub fn d_theta(&self) -> Self {
        let i = GaussRat::i();
        TrigElem {
            harmonics: self.harmonics.map_coeffs(|m, c| &(c * &i) * &GaussRat::from_int(m)),
            rho_power: self.rho_power,
        }
    }

    pub fn d_theta_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.d_theta())
    }

    pub fn scale(&self, k: &GaussRat) -> Self {
        TrigElem { harmonics: self.harmonics.scale(k), rho_power: self.rho_power }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(TrigElem::one(), |acc, _| &acc * self)
    }

    /// Real-valued: `c(−m) = conj(c(m))`.
    pub fn is_real_valued(&self) -> bool {
        self.harmonics.terms().all(|(m, c)| self.harmonics.coeff(-m) == c.conj())
    }

    /// Exact quotient; `ρ` powers subtract.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        Ok(TrigElem {
            harmonics: self.harmonics.exact_divide(&divisor.harmonics)?,
            rho_power: self.rho_power - divisor.rho_power,
        })
    }

    /// Converts `ρ^p Σ c_m u^m` into a homogeneous polynomial in `(z, z̄)`.
    pub fn to_poly2(&self) -> Result<Poly2, AlgebraError> {
        let p = self.rho_power;
        let mut out = Poly2::zero();
        for (m, c) in self.harmonics.terms() {
            if m.abs() > p || (p - m).rem_euclid(2) != 0 {
                return Err(AlgebraError::NotPolynomial);
            }
            out.add_term(super::poly2::Mono::new(((p + m) / 2) as u32, ((p - m) / 2) as u32), c);
        }
        Ok(out)
    }

    /// Inverse of [`TrigElem::to_poly2`] for homogeneous input.
    pub fn from_poly2(p: &Poly2) -> Result<Self, AlgebraError> {
        let Some(deg) = p.total_degree() else {
            return Ok(TrigElem::zero());
        };
        if !p.is_homogeneous() {
            return Err(AlgebraError::NotHomogeneous);
        }
        let harmonics = LaurentPoly::from_terms(p.terms().map(|(m, c)| (m.a as i64 - m.b as i64, c.clone())));
        Ok(TrigElem { harmonics, rho_power: deg as i64 })
    }
}

impl<'b> Add<&'b TrigElem> for &TrigElem {
    type Output = TrigElem;
    /// Both operands must carry the same `ρ` power unless one is zero.
    fn add(self, rhs: &'b TrigElem) -> TrigElem {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.rho_power, rhs.rho_power, "adding trig elements with different ρ powers");
        TrigElem { harmonics: &self.harmonics + &rhs.harmonics, rho_power: self.rho_power }
    }
}

impl<'b> Sub<&'b TrigElem> for &TrigElem {
    type Output = TrigElem;
    fn sub(self, rhs: &'b TrigElem) -> TrigElem {
        self + &(-rhs)
    }
}

impl Neg for &TrigElem {
    type Output = TrigElem;
    fn neg(self) -> TrigElem {
        TrigElem { harmonics: -&self.harmonics, rho_power: self.rho_power }
    }
}

impl<'b> Mul<&'b TrigElem> for &TrigElem {
    type Output = TrigElem;
    fn mul(self, rhs: &'b TrigElem) -> TrigElem {
        TrigElem { harmonics: &self.harmonics * &rhs.harmonics, rho_power: self.rho_power + rhs.rho_power }
    }
}

impl Zero for TrigElem {
    fn zero() -> Self {
        TrigElem::zero()
    }
    fn is_zero(&self) -> bool {
        TrigElem::is_zero(self)
    }
}

impl One for TrigElem {
    fn one() -> Self {
        TrigElem::one()
    }
}

impl Add for TrigElem {
    type Output = TrigElem;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for TrigElem {
    type Output = TrigElem;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for TrigElem {
    type Output = TrigElem;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for TrigElem {
    type Output = TrigElem;
    fn neg(self) -> Self {
        -&self
    }
}

/// Determinant by cofactor expansion over column subsets (`O(2^n n)`).
pub fn determinant<T>(m: &[Vec<T>]) -> T
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let cols = m[0].len();
    assert!(cols == n && m.iter().all(|r| r.len() == n), "determinant needs a square matrix");
    // minors[mask] = det of rows (n - popcount(mask))..n restricted to columns in mask
    let mut minors: Vec<Option<T>> = vec![None; 1 << n];
    minors[0] = Some(T::one());
    for mask in 1usize..(1 << n) {
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc = T::zero();
        let mut sign_pos = true;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = &m[row][c];
            if !entry.is_zero() {
                let sub = minors[mask & !(1 << c)].as_ref().unwrap();
                let term = entry.clone() * sub.clone();
                acc = if sign_pos { acc + term } else { acc - term };
            }
            sign_pos = !sign_pos;
        }
        minors[mask] = Some(acc);
    }
    minors[(1 << n) - 1].take().unwrap()
}

/// `W[f_1..f_k] = det[∂_θ^{j} f_i]`; the empty Wronskian is `1`.
pub fn wronskian_theta(fs: &[TrigElem]) -> TrigElem {
    let k = fs.len();
    let rows: Vec<Vec<TrigElem>> = fs.iter().map(|f| derivative_row(f, k)).collect();
    determinant(&rows)
}

pub(crate) fn derivative_row(f: &TrigElem, len: usize) -> Vec<TrigElem> {
    let mut row = Vec::with_capacity(len);
    let mut cur = f.clone();
    for _ in 0..len {
        let next = cur.d_theta();
        row.push(cur);
        cur = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wronskian_small_cases() {
        assert_eq!(wronskian_theta(&[TrigElem::sin(1)]), TrigElem::sin(1));
        assert_eq!(wronskian_theta(&[TrigElem::sin(1), TrigElem::cos(1)]), TrigElem::constant(-GaussRat::one()));
        assert_eq!(wronskian_theta(&[]), TrigElem::one());
    }

    #[test]
    fn wronskian_sin_sin2_matches_angle_sum_expansion() {
        // sinθ·2cos2θ − cosθ·sin2θ expanded by hand in u:
        // sinθ cos2θ = (sin3θ − sinθ)/2, cosθ sin2θ = (sin3θ + sinθ)/2
        // ⇒ W = sin3θ − sinθ − (sin3θ + sinθ)/2 = sin3θ/2 − 3 sinθ/2
        let w = wronskian_theta(&[TrigElem::sin(1), TrigElem::sin(2)]);
        let expected =
            &TrigElem::sin(3).scale(&GaussRat::ratio(1, 2)) - &TrigElem::sin(1).scale(&GaussRat::ratio(3, 2));
        assert_eq!(w, expected);
    }

    #[test]
    fn conversion_to_zzbar() {
        // ρ cosθ = x, ρ sinθ = y
        assert_eq!(TrigElem::cos(1).with_rho_power(1).to_poly2().unwrap(), Poly2::x());
        assert_eq!(TrigElem::sin(1).with_rho_power(1).to_poly2().unwrap(), Poly2::y());
        assert_eq!(TrigElem::cos(1).to_poly2(), Err(AlgebraError::NotPolynomial));
        assert_eq!(TrigElem::cos(2).with_rho_power(3).to_poly2(), Err(AlgebraError::NotPolynomial));
        let p = Poly2::x().pow(3);
        assert_eq!(TrigElem::from_poly2(&p).unwrap().to_poly2().unwrap(), p);
    }

    #[test]
    fn phases_on_quarter_grid() {
        // sin(θ + π/2) = cos θ, sin(2θ + π) = −sin 2θ
        assert_eq!(TrigElem::sin_phase(1, 1), TrigElem::cos(1));
        assert_eq!(TrigElem::sin_phase(2, 2), -&TrigElem::sin(2));
        assert!(TrigElem::sin_phase(3, 1).is_real_valued());
    }

    #[test]
    fn determinant_of_integers() {
        let m = vec![
            vec![GaussRat::from_int(2), GaussRat::from_int(1), GaussRat::from_int(0)],
            vec![GaussRat::from_int(1), GaussRat::from_int(3), GaussRat::from_int(1)],
            vec![GaussRat::from_int(0), GaussRat::from_int(1), GaussRat::from_int(4)],
        ];
        assert_eq!(determinant(&m), GaussRat::from_int(18));
    }
}
