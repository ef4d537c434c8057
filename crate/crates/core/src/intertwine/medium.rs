use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::IntertwineError;

/// Permeability family. Phases are integer numbers of quarter turns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MediumSpec {
    Axis { n: u32 },
    Dihedral { s: u32, n: u32, l: u32 },
    Deformed { k: Vec<u32>, phases: Vec<i64> },
}

impl MediumSpec {
    pub fn axis(n: u32) -> Self {
        MediumSpec::Axis { n }
    }

    pub fn dihedral(s: u32, n: u32, l: u32) -> Result<Self, IntertwineError> {
        let m = MediumSpec::Dihedral { s, n, l };
        m.validate()?;
        Ok(m)
    }

    pub fn deformed(k: Vec<u32>, phases: Vec<i64>) -> Result<Self, IntertwineError> {
        let m = MediumSpec::Deformed { k, phases };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), IntertwineError> {
        let bad = |msg: &str| Err(IntertwineError::InvalidMedium(format!("{self}: {msg}")));
        match self {
            MediumSpec::Axis { .. } => Ok(()),
            MediumSpec::Dihedral { s, n, l } => {
                if *s == 0 {
                    return bad("s must be positive");
                }
                if n <= l {
                    return bad("need n > l");
                }
                Ok(())
            }
            MediumSpec::Deformed { k, phases } => {
                if k.is_empty() {
                    return bad("empty k sequence");
                }
                if k.len() != phases.len() {
                    return bad("k and phase sequences differ in length");
                }
                if k.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("k sequence must be strictly increasing");
                }
                Ok(())
            }
        }
    }

    /// Expected degree of `ζ`.
    pub fn zeta_degree(&self) -> u32 {
        match self {
            MediumSpec::Axis { n } => *n,
            MediumSpec::Dihedral { s, n, l } => s * (n + l),
            MediumSpec::Deformed { k, .. } => *k.last().unwrap_or(&0),
        }
    }

    /// Order of the intertwiner.
    pub fn order(&self) -> u32 {
        match self {
            MediumSpec::Axis { n } | MediumSpec::Dihedral { n, .. } => *n,
            MediumSpec::Deformed { k, .. } => k.len() as u32,
        }
    }
}

impl fmt::Display for MediumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        match self {
            MediumSpec::Axis { n } => write!(f, "axis:{n}"),
            MediumSpec::Dihedral { s, n, l } => write!(f, "dihedral:{s},{n},{l}"),
            MediumSpec::Deformed { k, phases } => write!(
                f,
                "deformed:{}:{}",
                join(k.iter().map(u32::to_string).collect()),
                join(phases.iter().map(i64::to_string).collect())
            ),
        }
    }
}

impl FromStr for MediumSpec {
    type Err = IntertwineError;

    /// Accepts `axis:n`, `dihedral:s,n,l` and `deformed:k1,k2,..:w1,w2,..`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IntertwineError::InvalidMedium(s.to_string());
        let mut parts = s.trim().split(':');
        let family = parts.next().ok_or_else(bad)?;
        let ints = |p: Option<&str>| -> Result<Vec<i64>, IntertwineError> {
            let p = p.ok_or_else(bad)?;
            p.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| bad())).collect()
        };
        let nonneg = |v: Vec<i64>| -> Result<Vec<u32>, IntertwineError> {
            v.into_iter().map(|x| u32::try_from(x).map_err(|_| bad())).collect()
        };
        let spec = match family {
            "axis" => {
                let v = nonneg(ints(parts.next())?)?;
                match v.as_slice() {
                    [n] => MediumSpec::Axis { n: *n },
                    _ => return Err(bad()),
                }
            }
            "dihedral" => {
                let v = nonneg(ints(parts.next())?)?;
                match v.as_slice() {
                    [s, n, l] => MediumSpec::Dihedral { s: *s, n: *n, l: *l },
                    _ => return Err(bad()),
                }
            }
            "deformed" => {
                let k = nonneg(ints(parts.next())?)?;
                let phases = ints(parts.next())?;
                MediumSpec::Deformed { k, phases }
            }
            _ => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl Serialize for MediumSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MediumSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
