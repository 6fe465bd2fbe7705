//! Per-axiom verdicts with counterexamples.

use serde::{Deserialize, Serialize};

use crate::graph::{CellId, Dim};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// One witness of a failed condition.
///
/// For checks on a single structure every cell lives in that structure's graph.
/// For morphism checks, `cells` are domain cells and `expected`/`actual` are
/// codomain cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub kind: String,
    pub cells: Vec<CellId>,
    pub expected: Option<CellId>,
    pub actual: Option<CellId>,
}

impl Counterexample {
    pub fn new(kind: impl Into<String>, cells: Vec<CellId>) -> Self {
        Counterexample {
            kind: kind.into(),
            cells,
            expected: None,
            actual: None,
        }
    }

    pub fn values(mut self, expected: Option<CellId>, actual: Option<CellId>) -> Self {
        self.expected = expected;
        self.actual = actual;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub level: Option<Dim>,
    pub verdict: Verdict,
    pub counterexamples: Vec<Counterexample>,
    /// Tuples where only one side of an equation is defined in a partial table.
    pub asymmetries: Vec<Vec<CellId>>,
    pub notes: Vec<String>,
}

impl AxiomResult {
    /// Pass or fail according to whether any counterexample was found.
    pub fn from_counterexamples(
        axiom: impl Into<String>,
        level: Option<Dim>,
        counterexamples: Vec<Counterexample>,
    ) -> Self {
        let verdict = if counterexamples.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        AxiomResult {
            axiom: axiom.into(),
            level,
            verdict,
            counterexamples,
            asymmetries: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn not_applicable(
        axiom: impl Into<String>,
        level: Option<Dim>,
        note: impl Into<String>,
    ) -> Self {
        AxiomResult {
            axiom: axiom.into(),
            level,
            verdict: Verdict::NotApplicable,
            counterexamples: Vec::new(),
            asymmetries: Vec::new(),
            notes: vec![note.into()],
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn single(result: AxiomResult) -> Self {
        AxiomReport {
            results: vec![result],
        }
    }

    pub fn push(&mut self, result: AxiomResult) {
        self.results.push(result);
    }

    pub fn extend(&mut self, other: AxiomReport) {
        self.results.extend(other.results);
    }

    /// Appends `other` with every axiom name prefixed.
    pub fn extend_prefixed(&mut self, prefix: &str, other: AxiomReport) {
        self.results.extend(other.results.into_iter().map(|mut r| {
            r.axiom = format!("{prefix}.{}", r.axiom);
            r
        }));
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(AxiomResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomResult> {
        self.results.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn counterexample_count(&self) -> usize {
        self.results.iter().map(|r| r.counterexamples.len()).sum()
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom)
    }
}
