use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_deformed, check_intertwining, deformed_zeta, IntertwinerBundle, MediumSpec};
use crate::algebra::Poly2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformedCandidate {
    pub medium: MediumSpec,
    pub zeta: Poly2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Number of `(k, phase)` configurations examined.
    pub evaluated: usize,
    pub max_n: u32,
    pub max_k: u32,
    pub phase_grid: Vec<i64>,
    pub candidates: Vec<DeformedCandidate>,
}

/// Strictly increasing sequences of length `len` drawn from `0..=max_k`.
fn increasing_sequences(len: usize, max_k: u32) -> Vec<Vec<u32>> {
    fn rec(start: u32, len: usize, max_k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for k in start..=max_k {
            cur.push(k);
            rec(k + 1, len, max_k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, max_k, &mut Vec::new(), &mut out);
    out
}

fn phase_tuples(len: usize, grid: &[i64]) -> Vec<Vec<i64>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.iter()
            .flat_map(|prefix| {
                grid.iter().map(move |&q| {
                    let mut v = prefix.clone();
                    v.push(q);
                    v
                })
            })
            .collect()
    })
}

/// Exhaustive search over `n ≤ max_n`, `k_j ≤ max_k` and phases from
/// `phase_grid` (quarter turns). Costs `O(|grid|^n · C(max_k + 1, n))`
/// Wronskian evaluations. With a target, only `ζ` proportional to it is
/// kept; every reported candidate passes the full build and an exact
/// intertwining check to degree 4.
pub fn search_deformed(max_n: u32, max_k: u32, phase_grid: &[i64], target: Option<&Poly2>) -> SearchOutcome {
    let configs: Vec<(Vec<u32>, Vec<i64>)> = (1..=max_n as usize)
        .flat_map(|n| {
            let phases = phase_tuples(n, phase_grid);
            increasing_sequences(n, max_k)
                .into_iter()
                .flat_map(move |k| phases.clone().into_iter().map(move |q| (k.clone(), q)))
        })
        .collect();
    let candidates: Vec<DeformedCandidate> = configs
        .par_iter()
        .filter_map(|(k, q)| {
            let zeta = deformed_zeta(k, q).ok()?;
            if let Some(t) = target {
                zeta.proportionality(t)?;
            }
            let bundle: IntertwinerBundle = build_deformed(k, q).ok()?;
            check_intertwining(&bundle, 4).passed().then_some(DeformedCandidate { medium: bundle.medium, zeta })
        })
        .collect();
    SearchOutcome { evaluated: configs.len(), max_n, max_k, phase_grid: phase_grid.to_vec(), candidates }
}
