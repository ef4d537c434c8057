use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::DomainError;
use crate::algebra::gauss_rat::{gauss_from_json, rational_from_json};
use crate::algebra::{rat_to_f64, GaussRat, LaurentPoly, Rational, FLOAT_RATIONALIZE_TOL};

/// Exact polynomial map with real positive conformal radius.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalMap {
    pub z1: GaussRat,
    pub r: Rational,
    pub u: Vec<GaussRat>,
}

impl ConformalMap {
    pub fn new(z1: GaussRat, r: Rational, u: Vec<GaussRat>) -> Result<Self, DomainError> {
        if !r.is_positive() {
            return Err(DomainError::InvalidMap(format!("conformal radius must be positive, got {r}")));
        }
        Ok(ConformalMap { z1, r, u })
    }

    pub fn disk(z1: GaussRat, r: Rational) -> Result<Self, DomainError> {
        ConformalMap::new(z1, r, Vec::new())
    }

    /// Number of shape coefficients `k̃` (trailing zeros dropped).
    pub fn ktilde(&self) -> usize {
        self.u.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1)
    }

    /// Coefficients `c_0..c_{k̃+1}` of `z(w)`.
    pub fn coefficients(&self) -> Vec<GaussRat> {
        let mut c = vec![self.z1.clone(), GaussRat::real(self.r.clone())];
        c.extend(self.u.iter().take(self.ktilde()).cloned());
        c
    }

    /// `z(w)` as a Laurent polynomial.
    pub fn z_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_poly(self.coefficients())
    }

    /// `z̄(1/w)`: conjugated coefficients at negative powers.
    pub fn zbar_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.coefficients().iter().enumerate().map(|(j, c)| (-(j as i64), c.conj())))
    }

    /// `z′(w)`.
    pub fn dz_laurent(&self) -> LaurentPoly {
        self.z_laurent().derivative()
    }

    pub fn to_numeric(&self) -> NumericMap {
        NumericMap {
            z1: self.z1.to_complex(),
            r: rat_to_f64(&self.r),
            u: self.u.iter().take(self.ktilde()).map(GaussRat::to_complex).collect(),
        }
    }
}

/// Floating-point twin of [`ConformalMap`] used by Newton and quadrature.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMap {
    pub z1: Complex64,
    pub r: f64,
    pub u: Vec<Complex64>,
}

impl NumericMap {
    pub fn disk(z1: Complex64, r: f64) -> Self {
        NumericMap { z1, r, u: Vec::new() }
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        let mut c = vec![self.z1, Complex64::new(self.r, 0.0)];
        c.extend(self.u.iter().copied());
        c
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coefficients().iter().rev().fold(Complex64::zero(), |acc, c| acc * w + c)
    }

    pub fn derivative(&self, w: Complex64) -> Complex64 {
        let c = self.coefficients();
        (1..c.len()).rev().fold(Complex64::zero(), |acc, j| acc * w + c[j] * j as f64)
    }

    /// Rationalizes each coefficient at the documented `1e−13` tolerance.
    pub fn to_exact(&self) -> Result<ConformalMap, DomainError> {
        let rat = |c: Complex64| GaussRat::rationalize(c, FLOAT_RATIONALIZE_TOL);
        let r = crate::algebra::rationalize_f64(self.r, FLOAT_RATIONALIZE_TOL);
        let mut u: Vec<GaussRat> = self.u.iter().map(|&c| rat(c)).collect();
        while u.last().is_some_and(|c| c.is_zero()) {
            u.pop();
        }
        ConformalMap::new(rat(self.z1), r, u)
    }

    /// Largest coefficient-wise distance to another map.
    pub fn max_coefficient_distance(&self, other: &NumericMap) -> f64 {
        let a = self.coefficients();
        let b = other.coefficients();
        let n = a.len().max(b.len());
        (0..n)
            .map(|j| {
                let x = a.get(j).copied().unwrap_or_default();
                let y = b.get(j).copied().unwrap_or_default();
                (x - y).norm()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize)]
struct MapJson {
    z1: GaussRat,
    r: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    u: Vec<GaussRat>,
}

/// `{"z1": ["re","im"], "r": "p/q", "u": [["re","im"], ...]}`; `u` optional.
impl Serialize for ConformalMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapJson { z1: self.z1.clone(), r: self.r.to_string(), u: self.u[..self.ktilde()].to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConformalMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        map_from_json(&v).map_err(D::Error::custom)
    }
}

pub(crate) fn map_from_json(v: &serde_json::Value) -> Result<ConformalMap, String> {
    let obj = v.as_object().ok_or("map must be a JSON object")?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "z1" | "r" | "u") {
            return Err(format!("unknown map field {key:?}"));
        }
    }
    let z1 = gauss_from_json(obj.get("z1").ok_or("missing z1")?).map_err(|e| e.to_string())?;
    let r = match obj.get("r") {
        Some(r) => rational_from_json(r).map_err(|e| e.to_string())?,
        None => Rational::one(),
    };
    let u = match obj.get("u") {
        None => Vec::new(),
        Some(serde_json::Value::Array(items)) => {
            items.iter().map(gauss_from_json).collect::<Result<_, _>>().map_err(|e| e.to_string())?
        }
        Some(_) => return Err("u must be an array".into()),
    };
    ConformalMap::new(z1, r, u).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let m: ConformalMap = serde_json::from_str(r#"{"z1":["2","0"],"r":"1","u":[["1/4","0"]]}"#).unwrap();
        assert_eq!(m.u, vec![GaussRat::ratio(1, 4)]);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<ConformalMap>(&text).unwrap(), m);
        assert!(serde_json::from_str::<ConformalMap>(r#"{"z1":["2","0"],"r":"-1"}"#).is_err());
        assert!(serde_json::from_str::<ConformalMap>(r#"{"z1":["2","0"],"radius":"1"}"#).is_err());
    }

    #[test]
    fn laurent_views() {
        let m = ConformalMap::new(GaussRat::from_int(2), Rational::one(), vec![GaussRat::from_ints(0, 1)]).unwrap();
        assert_eq!(m.zbar_laurent().coeff(-2), GaussRat::from_ints(0, -1));
        assert_eq!(m.dz_laurent().coeff(1), GaussRat::from_ints(0, 2));
        let n = m.to_numeric();
        let w = Complex64::new(0.3, -0.2);
        assert!((n.derivative(w) - (1.0 + 2.0 * Complex64::i() * w)).norm() < 1e-15);
    }
}
