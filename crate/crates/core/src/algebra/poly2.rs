//! Bivariate polynomials with Gaussian-rational coefficients.
//!
//! The same storage serves two coordinate systems: [`Poly2`] lives in
//! `(z, z̄)` and [`XyPoly`] in Cartesian `(x, y)`. Conversions between them
//! are exact ring maps via `x = (z + z̄)/2`, `y = (z − z̄)/2i`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gauss_rat::{gauss_from_json, int};
use super::{AlgebraError, GaussRat, Rational};

/// Exponent pair ordered graded-lexicographically: total degree first, then
/// the first exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub a: u32,
    pub b: u32,
}

impl Mono {
    pub fn new(a: u32, b: u32) -> Self {
        Mono { a, b }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.a <= other.a && self.b <= other.b
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.a + self.b, self.a, self.b).cmp(&(other.a + other.b, other.a, other.b))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub trait Vars: Clone + fmt::Debug + PartialEq + Eq {
    const NAMES: (&'static str, &'static str);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZZbar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Xy;

impl Vars for ZZbar {
    const NAMES: (&'static str, &'static str) = ("z", "zb");
}

impl Vars for Xy {
    const NAMES: (&'static str, &'static str) = ("x", "y");
}

#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly<V: Vars> {
    terms: BTreeMap<Mono, GaussRat>,
    _vars: PhantomData<V>,
}

pub type Poly2 = BiPoly<ZZbar>;
pub type XyPoly = BiPoly<Xy>;

impl<V: Vars> Default for BiPoly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Vars> BiPoly<V> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new(), _vars: PhantomData }
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: GaussRat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::new(a, b), c);
        }
        p
    }

    /// First variable (`z` or `x`).
    pub fn var1() -> Self {
        Self::monomial(1, 0, GaussRat::one())
    }

    /// Second variable (`z̄` or `y`).
    pub fn var2() -> Self {
        Self::monomial(0, 1, GaussRat::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, GaussRat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (a, b, c) in terms {
            p.add_term(Mono::new(a, b), &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &GaussRat)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> GaussRat {
        self.terms.get(&Mono::new(a, b)).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn leading(&self) -> Option<(Mono, &GaussRat)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn degree1(&self) -> u32 {
        self.terms.keys().map(|m| m.a).max().unwrap_or(0)
    }

    pub fn degree2(&self) -> u32 {
        self.terms.keys().map(|m| m.b).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Mono::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, k: &GaussRat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(), _vars: PhantomData }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in the first variable.
    pub fn d1(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.a > 0 {
                out.add_term(Mono::new(m.a - 1, m.b), &c.scale(&int(m.a as i64)));
            }
        }
        out
    }

    /// Partial derivative in the second variable.
    pub fn d2(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.b > 0 {
                out.add_term(Mono::new(m.a, m.b - 1), &c.scale(&int(m.b as i64)));
            }
        }
        out
    }

    /// `∂₁^i ∂₂^j`.
    pub fn d_mixed(&self, i: u32, j: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.a >= i && m.b >= j {
                let k = falling(m.a, i) * falling(m.b, j);
                out.add_term(Mono::new(m.a - i, m.b - j), &c.scale(&k));
            }
        }
        out
    }

    /// Antiderivative in the second variable with zero integration constant.
    pub fn integrate2(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(Mono::new(m.a, m.b + 1), &c.scale(&Rational::new(1.into(), (m.b as i64 + 1).into())));
        }
        out
    }

    pub fn eval(&self, v1: &GaussRat, v2: &GaussRat) -> GaussRat {
        let p1 = powers(v1, self.degree1());
        let p2 = powers(v2, self.degree2());
        let mut acc = GaussRat::zero();
        for (m, c) in &self.terms {
            acc += &(&(c * &p1[m.a as usize]) * &p2[m.b as usize]);
        }
        acc
    }

    pub fn eval_c(&self, v1: Complex64, v2: Complex64) -> Complex64 {
        NumericPoly::from(self).eval(v1, v2)
    }

    /// Multivariate division with remainder; succeeds only when the
    /// remainder is zero.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        let Some((lm, lc)) = divisor.leading() else {
            return Err(AlgebraError::DivisionByZero);
        };
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(&m) {
                return Err(AlgebraError::NotDivisible);
            }
            let q = Self::monomial(m.a - lm.a, m.b - lm.b, c * &lc_inv);
            rem = &rem - &(&q * divisor);
            quot = &quot + &q;
        }
        Ok(quot)
    }

    /// Makes the leading coefficient equal to `target`.
    pub fn normalized_to(&self, target: &GaussRat) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&(target / c)),
        }
    }

    /// Constant `c` with `self == c * other`, if one exists.
    pub fn proportionality(&self, other: &Self) -> Option<GaussRat> {
        let (m, c) = other.leading()?;
        let k = &self.coeff(m.a, m.b) / c;
        (&other.scale(&k) == self && !k.is_zero()).then_some(k)
    }
}

fn falling(n: u32, k: u32) -> Rational {
    let mut acc = 1i64;
    for j in 0..k {
        acc *= (n - j) as i64;
    }
    int(acc)
}

fn powers(v: &GaussRat, max: u32) -> Vec<GaussRat> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(GaussRat::one());
    for i in 0..max as usize {
        let next = &out[i] * v;
        out.push(next);
    }
    out
}

impl Poly2 {
    pub fn z() -> Self {
        Self::var1()
    }

    pub fn zbar() -> Self {
        Self::var2()
    }

    /// `x = (z + z̄)/2`.
    pub fn x() -> Self {
        Self::from_terms([(1, 0, GaussRat::ratio(1, 2)), (0, 1, GaussRat::ratio(1, 2))])
    }

    /// `y = (z − z̄)/2i`.
    pub fn y() -> Self {
        let h = GaussRat::new(int(0), Rational::new((-1).into(), 2.into()));
        Self::from_terms([(1, 0, h.clone()), (0, 1, -h)])
    }

    pub fn dz(&self) -> Self {
        self.d1()
    }

    pub fn dzbar(&self) -> Self {
        self.d2()
    }

    /// `∂ₓ = ∂_z + ∂_z̄`.
    pub fn dx(&self) -> Self {
        &self.d1() + &self.d2()
    }

    /// `∂_y = i(∂_z − ∂_z̄)`.
    pub fn dy(&self) -> Self {
        (&self.d1() - &self.d2()).scale(&GaussRat::i())
    }

    /// `P` with `∂_z̄ P = self`, zero constant of integration in `z̄`.
    pub fn antiderivative_zbar(&self) -> Self {
        self.integrate2()
    }

    /// Pointwise complex conjugate: `conj(p(z, z̄))` as a polynomial in `(z, z̄)`.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.b, m.a, c.conj())))
    }

    /// True when `p(z, z̄)` is real for every `z`.
    pub fn is_real_valued(&self) -> bool {
        &self.conj() == self
    }

    /// `(z − c)^p`.
    pub fn shifted_z_power(c: &GaussRat, p: u32) -> Self {
        (&Self::z() - &Self::constant(c.clone())).pow(p)
    }

    /// `(z̄ − c̄)^p`.
    pub fn shifted_zbar_power(c: &GaussRat, p: u32) -> Self {
        (&Self::zbar() - &Self::constant(c.conj())).pow(p)
    }

    /// Value at the point `z` (with `z̄ = conj(z)`).
    pub fn eval_at(&self, z: &GaussRat) -> GaussRat {
        self.eval(z, &z.conj())
    }

    pub fn to_xy(&self) -> XyPoly {
        let zx = XyPoly::from_terms([(1, 0, GaussRat::one()), (0, 1, GaussRat::i())]);
        let zbx = XyPoly::from_terms([(1, 0, GaussRat::one()), (0, 1, -GaussRat::i())]);
        substitute(self, &zx, &zbx)
    }
}

impl XyPoly {
    pub fn x() -> Self {
        Self::var1()
    }

    pub fn y() -> Self {
        Self::var2()
    }

    pub fn to_zzbar(&self) -> Poly2 {
        substitute(self, &Poly2::x(), &Poly2::y())
    }

    /// Real-valued iff every Cartesian coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms().all(|(_, c)| c.is_real())
    }

    /// Value at real `(x, y)`, real part.
    pub fn eval_real(&self, x: f64, y: f64) -> f64 {
        NumericPoly::from(self).eval(Complex64::new(x, 0.0), Complex64::new(y, 0.0)).re
    }
}

/// Substitutes polynomials for both variables.
pub fn substitute<V: Vars, W: Vars>(p: &BiPoly<V>, s1: &BiPoly<W>, s2: &BiPoly<W>) -> BiPoly<W> {
    let mut p1 = vec![BiPoly::<W>::one()];
    for i in 0..p.degree1() as usize {
        let next = &p1[i] * s1;
        p1.push(next);
    }
    let mut p2 = vec![BiPoly::<W>::one()];
    for i in 0..p.degree2() as usize {
        let next = &p2[i] * s2;
        p2.push(next);
    }
    let mut out = BiPoly::<W>::zero();
    for (m, c) in p.terms() {
        out = &out + &(&p1[m.a as usize] * &p2[m.b as usize]).scale(c);
    }
    out
}

impl<'b, V: Vars> Add<&'b BiPoly<V>> for &BiPoly<V> {
    type Output = BiPoly<V>;
    fn add(self, rhs: &'b BiPoly<V>) -> BiPoly<V> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'b, V: Vars> Sub<&'b BiPoly<V>> for &BiPoly<V> {
    type Output = BiPoly<V>;
    fn sub(self, rhs: &'b BiPoly<V>) -> BiPoly<V> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'b, V: Vars> Mul<&'b BiPoly<V>> for &BiPoly<V> {
    type Output = BiPoly<V>;
    fn mul(self, rhs: &'b BiPoly<V>) -> BiPoly<V> {
        let mut out = BiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(Mono::new(m1.a + m2.a, m1.b + m2.b), &(c1 * c2));
            }
        }
        out
    }
}

impl<V: Vars> Neg for &BiPoly<V> {
    type Output = BiPoly<V>;
    fn neg(self) -> BiPoly<V> {
        BiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(), _vars: PhantomData }
    }
}

impl<V: Vars> Add for BiPoly<V> {
    type Output = BiPoly<V>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<V: Vars> Sub for BiPoly<V> {
    type Output = BiPoly<V>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<V: Vars> Mul for BiPoly<V> {
    type Output = BiPoly<V>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<V: Vars> Neg for BiPoly<V> {
    type Output = BiPoly<V>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<V: Vars> fmt::Display for BiPoly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (n1, n2) = V::NAMES;
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if m.a > 0 {
                write!(f, "*{n1}^{}", m.a)?;
            }
            if m.b > 0 {
                write!(f, "*{n2}^{}", m.b)?;
            }
        }
        Ok(())
    }
}

impl<V: Vars> fmt::Debug for BiPoly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serialized as an array of `[a, b, "re", "im"]`.
impl<V: Vars> Serialize for BiPoly<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<(u32, u32, String, String)> =
            self.terms.iter().map(|(m, c)| (m.a, m.b, c.re.to_string(), c.im.to_string())).collect();
        rows.serialize(s)
    }
}

impl<'de, V: Vars> Deserialize<'de> for BiPoly<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        poly_from_json(&v).map_err(D::Error::custom)
    }
}

/// Accepts `[[a, b, re, im], ...]` or `[[a, b, re], ...]` rows.
pub fn poly_from_json<V: Vars>(v: &serde_json::Value) -> Result<BiPoly<V>, AlgebraError> {
    let bad = || AlgebraError::Parse(v.to_string());
    let rows = v.as_array().ok_or_else(bad)?;
    let mut p = BiPoly::zero();
    for row in rows {
        let r = row.as_array().ok_or_else(bad)?;
        if r.len() != 3 && r.len() != 4 {
            return Err(bad());
        }
        let a = r[0].as_u64().ok_or_else(bad)? as u32;
        let b = r[1].as_u64().ok_or_else(bad)? as u32;
        let c = if r.len() == 4 {
            gauss_from_json(&serde_json::Value::Array(vec![r[2].clone(), r[3].clone()]))?
        } else {
            gauss_from_json(&r[2])?
        };
        p.add_term(Mono::new(a, b), &c);
    }
    Ok(p)
}

/// Floating-point copy of a polynomial for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct NumericPoly {
    terms: Vec<(usize, usize, Complex64)>,
    deg1: usize,
    deg2: usize,
}

impl<V: Vars> From<&BiPoly<V>> for NumericPoly {
    fn from(p: &BiPoly<V>) -> Self {
        NumericPoly {
            terms: p.terms().map(|(m, c)| (m.a as usize, m.b as usize, c.to_complex())).collect(),
            deg1: p.degree1() as usize,
            deg2: p.degree2() as usize,
        }
    }
}

impl NumericPoly {
    pub fn eval(&self, v1: Complex64, v2: Complex64) -> Complex64 {
        let mut p1 = Vec::with_capacity(self.deg1 + 1);
        let mut p2 = Vec::with_capacity(self.deg2 + 1);
        p1.push(Complex64::new(1.0, 0.0));
        p2.push(Complex64::new(1.0, 0.0));
        for i in 0..self.deg1 {
            p1.push(p1[i] * v1);
        }
        for i in 0..self.deg2 {
            p2.push(p2[i] * v2);
        }
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, &(a, b, c)| acc + c * p1[a] * p2[b])
    }

    /// Value at the point `z` with `z̄ = conj(z)`.
    pub fn eval_at(&self, z: Complex64) -> Complex64 {
        self.eval(z, z.conj())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_graded_lex() {
        let mut keys = vec![Mono::new(0, 2), Mono::new(2, 0), Mono::new(1, 1), Mono::new(3, 0), Mono::new(0, 0)];
        keys.sort();
        assert_eq!(keys, vec![Mono::new(0, 0), Mono::new(0, 2), Mono::new(1, 1), Mono::new(2, 0), Mono::new(3, 0)]);
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(Poly2::one().antiderivative_zbar(), Poly2::zbar());
        let zzb = &Poly2::z() * &Poly2::zbar();
        let expected = Poly2::monomial(1, 2, GaussRat::ratio(1, 2));
        assert_eq!(zzb.antiderivative_zbar(), expected);
        // x^j  ->  (z + z̄)^{j+1} / (2^j (j+1)) up to a function of z alone;
        // the zero-constant choice drops the pure z^{j+1} term.
        for j in 0..6u32 {
            let s = &Poly2::z() + &Poly2::zbar();
            let closed = s.pow(j + 1).scale(&GaussRat::ratio(1, (1i64 << j) * (j as i64 + 1)));
            let got = Poly2::x().pow(j).antiderivative_zbar();
            let diff = &closed - &got;
            assert_eq!(diff, Poly2::monomial(j + 1, 0, GaussRat::ratio(1, (1i64 << j) * (j as i64 + 1))), "j = {j}");
            assert_eq!(got.dzbar(), Poly2::x().pow(j));
        }
    }

    #[test]
    fn xy_round_trip() {
        let p = &(&Poly2::x().pow(2) * &Poly2::y()) - &Poly2::z();
        assert_eq!(p.to_xy().to_zzbar(), p);
        let q = p.to_xy();
        assert_eq!(q.coeff(2, 1), GaussRat::one());
        assert_eq!(q.coeff(1, 0), -GaussRat::one());
        assert_eq!(q.coeff(0, 1), -GaussRat::i());
    }

    #[test]
    fn divides_exactly_or_reports() {
        let a = &(&Poly2::z() + &Poly2::zbar()) * &(&Poly2::z() - &Poly2::one());
        let q = a.exact_divide(&(&Poly2::z() - &Poly2::one())).unwrap();
        assert_eq!(q, &Poly2::z() + &Poly2::zbar());
        assert_eq!(
            (&Poly2::z() + &Poly2::one()).exact_divide(&(&Poly2::z() - &Poly2::one())),
            Err(AlgebraError::NotDivisible)
        );
    }

    #[test]
    fn serde_rows() {
        let p = Poly2::from_terms([(1, 0, GaussRat::ratio(1, 2)), (0, 1, GaussRat::i())]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[[0,1,"0","1"],[1,0,"1/2","0"]]"#);
        let back: Poly2 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
