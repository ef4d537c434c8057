use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::GrowthError;
use crate::algebra::gauss_rat::{format_rational, gauss_from_json, rational_from_json};
use crate::algebra::{GaussRat, Rational};
use crate::fluxes::FluxVector;

/// Constant injection rates over `[t_start, t_end)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchedulePiece {
    pub t_start: Rational,
    pub t_end: Rational,
    /// Monopole rate, strictly positive.
    pub q: Rational,
    /// Rates of the homogeneous multipoles `Q̃_1, Q̃_2, ..`.
    pub qj: Vec<GaussRat>,
}

/// Piecewise-constant source history at a single point `z₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceSchedule {
    pub z1: GaussRat,
    pub pieces: Vec<SchedulePiece>,
}

impl SourceSchedule {
    pub fn new(z1: GaussRat, pieces: Vec<SchedulePiece>) -> Result<Self, GrowthError> {
        for (i, p) in pieces.iter().enumerate() {
            if p.t_end <= p.t_start {
                return Err(GrowthError::InvalidSchedule(format!("piece {i} has an empty time interval")));
            }
            if !p.q.is_positive() {
                return Err(GrowthError::InvalidSchedule(format!("piece {i} must inject (q > 0)")));
            }
            if i > 0 && p.t_start < pieces[i - 1].t_end {
                return Err(GrowthError::InvalidSchedule(format!("piece {i} overlaps or precedes piece {}", i - 1)));
            }
        }
        if pieces.first().is_some_and(|p| p.t_start.is_negative()) {
            return Err(GrowthError::InvalidSchedule("schedule starts before t = 0".into()));
        }
        Ok(SourceSchedule { z1, pieces })
    }

    /// Number of multipole rates `k̃` (the longest rate vector).
    pub fn ktilde(&self) -> usize {
        self.pieces.iter().map(|p| p.qj.len()).max().unwrap_or(0)
    }

    /// Exact cumulative homogeneous fluxes `Q̃(t)`, `Q̃_j(t)`.
    pub fn cumulative(&self, t: &Rational) -> FluxVector {
        let k = self.ktilde();
        let mut q = GaussRat::zero();
        let mut qj = vec![GaussRat::zero(); k];
        for p in &self.pieces {
            let end = if *t < p.t_end { t.clone() } else { p.t_end.clone() };
            if end <= p.t_start {
                continue;
            }
            let dt = &end - &p.t_start;
            q += &GaussRat::real(&p.q * &dt);
            for (acc, rate) in qj.iter_mut().zip(&p.qj) {
                *acc += &rate.scale(&dt);
            }
        }
        FluxVector { q, qj }
    }

    pub fn end_time(&self) -> Rational {
        self.pieces.last().map_or_else(Rational::zero, |p| p.t_end.clone())
    }

    /// `{"z1": .., "pieces": [{"t_start", "t_end", "q", "qj"}]}`, or a bare
    /// array of pieces when `z1` is supplied by the caller.
    pub fn from_json(v: &serde_json::Value, z1: Option<&GaussRat>) -> Result<Self, GrowthError> {
        let bad = |m: &str| GrowthError::InvalidSchedule(m.to_string());
        let parse_err = |e: crate::algebra::AlgebraError| GrowthError::InvalidSchedule(e.to_string());
        let (z1, pieces) = match v {
            serde_json::Value::Array(items) => {
                (z1.cloned().ok_or_else(|| bad("schedule needs a source point"))?, items)
            }
            serde_json::Value::Object(obj) => {
                let z = match obj.get("z1") {
                    Some(z) => gauss_from_json(z).map_err(parse_err)?,
                    None => z1.cloned().ok_or_else(|| bad("schedule needs a source point"))?,
                };
                (z, obj.get("pieces").and_then(|p| p.as_array()).ok_or_else(|| bad("missing pieces array"))?)
            }
            _ => return Err(bad("schedule must be an object or an array of pieces")),
        };
        let pieces = pieces
            .iter()
            .map(|p| {
                let obj = p.as_object().ok_or_else(|| bad("piece must be an object"))?;
                for key in obj.keys() {
                    if !matches!(key.as_str(), "t_start" | "t_end" | "q" | "qj") {
                        return Err(GrowthError::InvalidSchedule(format!("unknown piece field {key:?}")));
                    }
                }
                let get =
                    |k: &str| obj.get(k).ok_or_else(|| GrowthError::InvalidSchedule(format!("piece missing {k}")));
                let qj = match obj.get("qj") {
                    None => Vec::new(),
                    Some(serde_json::Value::Array(items)) => {
                        items.iter().map(gauss_from_json).collect::<Result<_, _>>().map_err(parse_err)?
                    }
                    Some(_) => return Err(bad("qj must be an array")),
                };
                Ok(SchedulePiece {
                    t_start: rational_from_json(get("t_start")?).map_err(parse_err)?,
                    t_end: rational_from_json(get("t_end")?).map_err(parse_err)?,
                    q: rational_from_json(get("q")?).map_err(parse_err)?,
                    qj,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SourceSchedule::new(z1, pieces)
    }
}

impl Serialize for SchedulePiece {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SchedulePiece", 4)?;
        st.serialize_field("t_start", &format_rational(&self.t_start))?;
        st.serialize_field("t_end", &format_rational(&self.t_end))?;
        st.serialize_field("q", &format_rational(&self.q))?;
        st.serialize_field("qj", &self.qj)?;
        st.end()
    }
}

impl Serialize for SourceSchedule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SourceSchedule", 2)?;
        st.serialize_field("z1", &self.z1)?;
        st.serialize_field("pieces", &self.pieces)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn piece(a: Rational, b: Rational, q: Rational, qj: Vec<GaussRat>) -> SchedulePiece {
        SchedulePiece { t_start: a, t_end: b, q, qj }
    }

    #[test]
    fn cumulative_is_piecewise_linear() {
        let s = SourceSchedule::new(
            GaussRat::from_int(2),
            vec![
                piece(r(0, 1), r(1, 2), r(2, 1), vec![GaussRat::ratio(1, 10)]),
                piece(r(1, 1), r(2, 1), r(1, 1), vec![]),
            ],
        )
        .unwrap();
        assert_eq!(s.cumulative(&r(1, 4)).q, GaussRat::ratio(1, 2));
        assert_eq!(s.cumulative(&r(3, 4)).q, GaussRat::from_int(1));
        assert_eq!(s.cumulative(&r(3, 2)).q, GaussRat::ratio(3, 2));
        assert_eq!(s.cumulative(&r(5, 1)).qj, vec![GaussRat::ratio(1, 20)]);
    }

    #[test]
    fn rejects_bad_pieces() {
        let z = GaussRat::from_int(2);
        assert!(SourceSchedule::new(z.clone(), vec![piece(r(1, 1), r(1, 1), r(1, 1), vec![])]).is_err());
        assert!(SourceSchedule::new(z.clone(), vec![piece(r(0, 1), r(1, 1), r(0, 1), vec![])]).is_err());
        let overlap = vec![piece(r(0, 1), r(2, 1), r(1, 1), vec![]), piece(r(1, 1), r(3, 1), r(1, 1), vec![])];
        assert!(SourceSchedule::new(z, overlap).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"z1":["2","0"],"pieces":[{"t_start":"0","t_end":"1","q":"1","qj":[["1/20","1/7"]]}]}"#;
        let s = SourceSchedule::from_json(&serde_json::from_str(text).unwrap(), None).unwrap();
        let back = SourceSchedule::from_json(&serde_json::to_value(&s).unwrap(), None).unwrap();
        assert_eq!(s, back);
        assert_eq!(s.ktilde(), 1);
    }
}
