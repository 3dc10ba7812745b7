//! Detected closed orbits side by side with corank evidence for `P∂x + Q∂y`.

use serde::Serialize;

use super::{find_limit_cycles, FlowError, FlowField, ScanOptions};
use crate::corank::{corank_ladder, Corank, CorankError, CorankLadder};
use crate::Verdict;

/// Stated in every report: the polynomial ring is used as the algebra in the
/// closed-orbit bound without a proof that it separates closed curves.
const ASSUMPTION: &str = "coranks are computed on the polynomial ring, which is taken to separate \
compact curves and is invariant under the field";

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorankEvidence {
    Exact { corank: Corank },
    LowerBound { value: usize, diverging: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub field: String,
    pub operator: String,
    /// Isolated cycles found, or `None` when the search failed.
    pub isolated_cycles: Option<usize>,
    /// Whether a band of non-isolated closed orbits was seen.
    pub continuum: bool,
    pub cycle_search: String,
    pub evidence: CorankEvidence,
    pub ladder: CorankLadder,
    pub verdict: Verdict,
    pub explanation: String,
    pub assumption: &'static str,
}

pub fn bound_compare(field: &FlowField, scan: &ScanOptions, m_max: u32, d_max: u32) -> Result<BoundReport, CorankError> {
    let op = field.operator();
    let ladder = corank_ladder(&op, m_max, d_max)?;
    let (cycles, continuum, search) = match find_limit_cycles(field, scan) {
        Ok(s) => {
            let note = format!(
                "{} isolated cycle(s) on r ∈ [{}, {}], section angle {:.6}",
                s.isolated_count, scan.range.0, scan.range.1, s.section.angle
            );
            (Some(s.isolated_count), s.continuum, note)
        }
        // Every ray from the origin is tangent somewhere, so no closed orbit
        // around the origin crosses them: nothing to count.
        Err(FlowError::NoTransversalSection) => {
            (Some(0), false, "no transversal ray from the origin; no closed orbit winds around it".into())
        }
        Err(e) => (None, false, format!("cycle search failed: {e}")),
    };
    let evidence = match &ladder.exact {
        Some(e) => CorankEvidence::Exact { corank: e.value },
        None => CorankEvidence::LowerBound { value: ladder.lower_bound, diverging: ladder.diverging },
    };
    let (verdict, explanation) = judge(cycles, continuum, &evidence);
    Ok(BoundReport {
        field: field.label.clone(),
        operator: op.to_string(),
        isolated_cycles: cycles,
        continuum,
        cycle_search: search,
        evidence,
        ladder,
        verdict,
        explanation,
        assumption: ASSUMPTION,
    })
}

fn judge(cycles: Option<usize>, continuum: bool, evidence: &CorankEvidence) -> (Verdict, String) {
    let Some(n) = cycles else {
        return (Verdict::Inconclusive, "no cycle count available".into());
    };
    let count = if continuum { "infinitely many".to_string() } else { n.to_string() };
    match *evidence {
        CorankEvidence::Exact { corank: Corank::Infinite } => {
            (Verdict::Consistent, format!("{count} closed orbit(s) against an infinite exact corank"))
        }
        CorankEvidence::Exact { corank: Corank::Finite(k) } => {
            if continuum || n as u64 > k {
                (Verdict::Violation, format!("{count} closed orbit(s) exceed the exact corank {k}"))
            } else {
                (Verdict::Consistent, format!("{n} ≤ exact corank {k}"))
            }
        }
        CorankEvidence::LowerBound { value, diverging } => {
            if diverging {
                (Verdict::Consistent, format!("{count} closed orbit(s); the truncated coranks grow without bound"))
            } else if !continuum && n <= value {
                (Verdict::Consistent, format!("{n} ≤ stabilized lower bound {value}"))
            } else {
                (
                    Verdict::Inconclusive,
                    format!("{count} closed orbit(s) but the truncations only show corank ≥ {value}"),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn judge_cases() {
        let exact = |k| CorankEvidence::Exact { corank: Corank::Finite(k) };
        assert_eq!(judge(Some(0), false, &exact(0)).0, Verdict::Consistent);
        assert_eq!(judge(Some(2), false, &exact(1)).0, Verdict::Violation);
        assert_eq!(judge(Some(0), true, &exact(1)).0, Verdict::Violation);
        let lb = |value, diverging| CorankEvidence::LowerBound { value, diverging };
        assert_eq!(judge(Some(1), false, &lb(0, false)).0, Verdict::Inconclusive);
        assert_eq!(judge(Some(1), false, &lb(1, false)).0, Verdict::Consistent);
        assert_eq!(judge(Some(0), true, &lb(3, true)).0, Verdict::Consistent);
        assert_eq!(judge(None, false, &exact(5)).0, Verdict::Inconclusive);
    }
}
