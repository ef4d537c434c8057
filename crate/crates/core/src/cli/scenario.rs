use std::str::FromStr;

use crate::algebra::gauss_rat::{gauss_from_json, rational_from_json};
use crate::algebra::{GaussRat, Rational};
use crate::growth::SourceSchedule;
use crate::intertwine::MediumSpec;

use super::CliError;

/// Parsed growth scenario.
///
/// ```json
/// {"medium": "axis:1",
///  "source": {"z1": ["2", "0"], "degree": 1},
///  "schedule": [{"t_start": "0", "t_end": "1", "q": "1", "qj": [["1/20", "0"]]}],
///  "outputs": {"times": ["1/2", "1"], "boundary": 256}}
/// ```
///
/// Path checks replace `schedule` with `schedule_a`, `schedule_b` and a
/// `t_final`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub medium: MediumSpec,
    pub z1: GaussRat,
    pub degree: usize,
    pub schedules: Vec<SourceSchedule>,
    pub times: Vec<Rational>,
    pub boundary: usize,
    pub t_final: Option<Rational>,
}

fn invalid<E: ToString>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

impl Scenario {
    pub fn from_json(v: &serde_json::Value) -> Result<Self, CliError> {
        let obj = v.as_object().ok_or_else(|| invalid("scenario must be a JSON object"))?;
        for key in obj.keys() {
            if !matches!(
                key.as_str(),
                "medium" | "source" | "schedule" | "schedule_a" | "schedule_b" | "t_final" | "outputs"
            ) {
                return Err(invalid(format!("unknown scenario field {key:?}")));
            }
        }
        let medium_str = obj.get("medium").and_then(|m| m.as_str()).ok_or_else(|| invalid("missing medium string"))?;
        let medium = MediumSpec::from_str(medium_str).map_err(invalid)?;
        let source = obj.get("source").and_then(|s| s.as_object()).ok_or_else(|| invalid("missing source object"))?;
        let z1 = gauss_from_json(source.get("z1").ok_or_else(|| invalid("missing source.z1"))?).map_err(invalid)?;
        let degree = match source.get("degree") {
            None => None,
            Some(d) => {
                Some(d.as_u64().ok_or_else(|| invalid("source.degree must be a non-negative integer"))? as usize)
            }
        };
        let mut schedules = Vec::new();
        for key in ["schedule", "schedule_a", "schedule_b"] {
            if let Some(s) = obj.get(key) {
                schedules.push(SourceSchedule::from_json(s, Some(&z1)).map_err(invalid)?);
            }
        }
        if schedules.is_empty() {
            return Err(invalid("scenario has no schedule"));
        }
        let max_rates = schedules.iter().map(SourceSchedule::ktilde).max().unwrap_or(0);
        let degree = degree.unwrap_or(max_rates);
        if max_rates > degree {
            return Err(invalid(format!("schedule has {max_rates} multipole rates but degree is {degree}")));
        }
        let outputs = obj.get("outputs").and_then(|o| o.as_object());
        let times = match outputs.and_then(|o| o.get("times")) {
            None => Vec::new(),
            Some(serde_json::Value::Array(items)) => {
                items.iter().map(rational_from_json).collect::<Result<_, _>>().map_err(invalid)?
            }
            Some(_) => return Err(invalid("outputs.times must be an array")),
        };
        let boundary = match outputs.and_then(|o| o.get("boundary")) {
            None => 0,
            Some(b) => b.as_u64().ok_or_else(|| invalid("outputs.boundary must be a non-negative integer"))? as usize,
        };
        let t_final = obj.get("t_final").map(rational_from_json).transpose().map_err(invalid)?;
        Ok(Scenario { medium, z1, degree, schedules, times, boundary, t_final })
    }
}

/// Comma-separated exact rationals, e.g. `1/2,1,2.5`.
pub fn parse_times(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| crate::algebra::parse_rational(t.trim()).map_err(invalid))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_scenario() {
        let text = r#"{"medium":"axis:1","source":{"z1":["2","0"],"degree":1},
            "schedule":[{"t_start":"0","t_end":"1","q":"1","qj":[["1/20","0"]]}],
            "outputs":{"times":["1/2",1],"boundary":16}}"#;
        let s = Scenario::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(s.degree, 1);
        assert_eq!(s.times.len(), 2);
        assert_eq!(s.boundary, 16);
    }

    #[test]
    fn rejects_degree_mismatch_and_unknown_fields() {
        let text = r#"{"medium":"axis:1","source":{"z1":["2","0"],"degree":0},
            "schedule":[{"t_start":"0","t_end":"1","q":"1","qj":[["1/20","0"]]}]}"#;
        assert!(Scenario::from_json(&serde_json::from_str(text).unwrap()).is_err());
        let text = r#"{"medium":"axis:1","source":{"z1":["2","0"]},"schedule":[],"extra":1}"#;
        assert!(Scenario::from_json(&serde_json::from_str(text).unwrap()).is_err());
    }

    #[test]
    fn times_list() {
        assert_eq!(parse_times("1/2, 1,2.5").unwrap().len(), 3);
        assert!(parse_times("1,x").is_err());
    }
}
