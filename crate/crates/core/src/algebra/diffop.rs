//! Normal-ordered differential operators `Σ p_{ab}(z, z̄) ∂_z^a ∂_z̄^b`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly2::{poly_from_json, Mono};
use super::{AlgebraError, GaussRat, Poly2};

/// All coefficients sit to the left of all derivatives; keys are
/// derivative orders `(a, b)` in graded-lex order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiffOp2 {
    terms: BTreeMap<Mono, Poly2>,
}

impl DiffOp2 {
    pub fn zero() -> Self {
        DiffOp2 { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        DiffOp2::multiplication(Poly2::one())
    }

    /// Multiplication by a polynomial.
    pub fn multiplication(p: Poly2) -> Self {
        DiffOp2::term(0, 0, p)
    }

    /// `p ∂_z^a ∂_z̄^b`.
    pub fn term(a: u32, b: u32, p: Poly2) -> Self {
        let mut op = DiffOp2::zero();
        op.add_term(Mono::new(a, b), &p);
        op
    }

    pub fn dz() -> Self {
        DiffOp2::term(1, 0, Poly2::one())
    }

    pub fn dzbar() -> Self {
        DiffOp2::term(0, 1, Poly2::one())
    }

    /// `∂ₓ = ∂_z + ∂_z̄`.
    pub fn dx() -> Self {
        &DiffOp2::dz() + &DiffOp2::dzbar()
    }

    /// `∂_y = i(∂_z − ∂_z̄)`.
    pub fn dy() -> Self {
        (&DiffOp2::dz() - &DiffOp2::dzbar()).scale(&GaussRat::i())
    }

    /// `Δ = 4 ∂_z ∂_z̄`.
    pub fn laplacian() -> Self {
        DiffOp2::term(1, 1, Poly2::constant(GaussRat::from_int(4)))
    }

    /// `∂_θ = i(z ∂_z − z̄ ∂_z̄)`.
    pub fn d_theta() -> Self {
        let i = GaussRat::i();
        &DiffOp2::term(1, 0, Poly2::z().scale(&i)) + &DiffOp2::term(0, 1, Poly2::zbar().scale(&-&i))
    }

    pub fn add_term(&mut self, m: Mono, p: &Poly2) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&m) {
            Some(existing) => existing + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Poly2)> + '_ {
        self.terms.iter()
    }

    /// Coefficient of `∂_z^a ∂_z̄^b`.
    pub fn coeff(&self, a: u32, b: u32) -> Poly2 {
        self.terms.get(&Mono::new(a, b)).cloned().unwrap_or_default()
    }

    /// Highest total derivative order, or `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn scale(&self, k: &GaussRat) -> Self {
        let mut out = DiffOp2::zero();
        for (m, p) in &self.terms {
            out.add_term(*m, &p.scale(k));
        }
        out
    }

    /// Left multiplication by a polynomial.
    pub fn left_mul(&self, q: &Poly2) -> Self {
        let mut out = DiffOp2::zero();
        for (m, p) in &self.terms {
            out.add_term(*m, &(q * p));
        }
        out
    }

    /// Normal-ordered product `self ∘ other` by the Leibniz rule.
    pub fn compose(&self, other: &DiffOp2) -> DiffOp2 {
        let mut out = DiffOp2::zero();
        for (alpha, p) in &self.terms {
            for (beta, q) in &other.terms {
                for g1 in 0..=alpha.a {
                    for g2 in 0..=alpha.b {
                        let dq = q.d_mixed(g1, g2);
                        if dq.is_zero() {
                            continue;
                        }
                        let binom = GaussRat::from_int(binomial(alpha.a, g1) * binomial(alpha.b, g2));
                        let coeff = (p * &dq).scale(&binom);
                        out.add_term(Mono::new(alpha.a - g1 + beta.a, alpha.b - g2 + beta.b), &coeff);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> DiffOp2 {
        (0..e).fold(DiffOp2::identity(), |acc, _| acc.compose(self))
    }

    pub fn apply(&self, f: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, p) in &self.terms {
            let df = f.d_mixed(m.a, m.b);
            if !df.is_zero() {
                out = &out + &(p * &df);
            }
        }
        out
    }

    /// Coefficients `B_a` with `T[f] = Σ_a B_a f^{(a)}` for analytic `f`:
    /// only the pure `∂_z^a` columns act.
    pub fn apply_to_analytic(&self) -> Vec<Poly2> {
        let max = self.terms.keys().filter(|m| m.b == 0).map(|m| m.a).max();
        match max {
            None => Vec::new(),
            Some(max) => (0..=max).map(|a| self.coeff(a, 0)).collect(),
        }
    }

    /// Conjugate operator: `conj(A[h]) = A*[conj h]`.
    pub fn conj(&self) -> DiffOp2 {
        let mut out = DiffOp2::zero();
        for (m, p) in &self.terms {
            out.add_term(Mono::new(m.b, m.a), &p.conj());
        }
        out
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

impl<'b> Add<&'b DiffOp2> for &DiffOp2 {
    type Output = DiffOp2;
    fn add(self, rhs: &'b DiffOp2) -> DiffOp2 {
        let mut out = self.clone();
        for (m, p) in &rhs.terms {
            out.add_term(*m, p);
        }
        out
    }
}

impl<'b> Sub<&'b DiffOp2> for &DiffOp2 {
    type Output = DiffOp2;
    fn sub(self, rhs: &'b DiffOp2) -> DiffOp2 {
        self + &(-rhs)
    }
}

impl Neg for &DiffOp2 {
    type Output = DiffOp2;
    fn neg(self) -> DiffOp2 {
        self.scale(&-GaussRat::one())
    }
}

impl fmt::Display for DiffOp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, p) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{p}]")?;
            if m.a > 0 {
                write!(f, "·∂z^{}", m.a)?;
            }
            if m.b > 0 {
                write!(f, "·∂zb^{}", m.b)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serialized as `[[a, b, poly], ...]`.
impl Serialize for DiffOp2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<(u32, u32, &Poly2)> = self.terms.iter().map(|(m, p)| (m.a, m.b, p)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffOp2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        diffop_from_json(&v).map_err(D::Error::custom)
    }
}

fn diffop_from_json(v: &serde_json::Value) -> Result<DiffOp2, AlgebraError> {
    let bad = || AlgebraError::Parse(v.to_string());
    let mut op = DiffOp2::zero();
    for row in v.as_array().ok_or_else(bad)? {
        let r = row.as_array().filter(|r| r.len() == 3).ok_or_else(bad)?;
        let a = r[0].as_u64().ok_or_else(bad)? as u32;
        let b = r[1].as_u64().ok_or_else(bad)? as u32;
        op.add_term(Mono::new(a, b), &poly_from_json(&r[2])?);
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_dx() -> DiffOp2 {
        DiffOp2::dx().left_mul(&Poly2::x())
    }

    #[test]
    fn canonical_commutation() {
        let got = DiffOp2::dz().compose(&DiffOp2::multiplication(Poly2::z()));
        let expected = &DiffOp2::term(1, 0, Poly2::z()) + &DiffOp2::identity();
        assert_eq!(got, expected);
    }

    #[test]
    fn identity_is_neutral() {
        let b = &x_dx() + &DiffOp2::laplacian();
        assert_eq!(DiffOp2::identity().compose(&b), b);
        assert_eq!(b.compose(&DiffOp2::identity()), b);
    }

    #[test]
    fn factor_chain_matches_hand_expansion() {
        // (x∂ₓ − 3)(x∂ₓ − 1) = x²∂ₓ² − 3x∂ₓ + 3, expanded by hand:
        // x∂ₓ x∂ₓ = x²∂ₓ² + x∂ₓ
        let three = GaussRat::from_int(3);
        let f1 = &x_dx() - &DiffOp2::multiplication(Poly2::constant(three.clone()));
        let f2 = &x_dx() - &DiffOp2::identity();
        let got = f1.compose(&f2);
        let dxx = DiffOp2::dx().compose(&DiffOp2::dx());
        let expected = &(&dxx.left_mul(&Poly2::x().pow(2)) - &x_dx().scale(&three))
            + &DiffOp2::multiplication(Poly2::constant(three));
        assert_eq!(got, expected);
        let b = got.apply_to_analytic();
        assert_eq!(b.len(), 3);
        assert_eq!(b[0], Poly2::constant(GaussRat::from_int(3)));
        assert_eq!(b[1], Poly2::x().scale(&GaussRat::from_int(-3)));
        assert_eq!(b[2], Poly2::x().pow(2));
    }

    #[test]
    fn first_axis_operator_on_analytic_input() {
        let t1 = &x_dx() - &DiffOp2::identity();
        let b = t1.apply_to_analytic();
        assert_eq!(b, vec![Poly2::constant(-GaussRat::one()), Poly2::x()]);
        assert_eq!(DiffOp2::identity().apply_to_analytic(), vec![Poly2::one()]);
    }

    #[test]
    fn laplacian_of_monomial() {
        let zzb = &Poly2::z() * &Poly2::zbar();
        assert_eq!(DiffOp2::laplacian().apply(&zzb), Poly2::constant(GaussRat::from_int(4)));
    }

    #[test]
    fn conjugate_operator_conjugates_values() {
        let op = &DiffOp2::term(1, 0, Poly2::z().scale(&GaussRat::i())) + &DiffOp2::term(0, 2, Poly2::x());
        let f = &Poly2::z().pow(3) + &Poly2::zbar().scale(&GaussRat::from_ints(2, 1));
        assert_eq!(op.apply(&f).conj(), op.conj().apply(&f.conj()));
    }
}
