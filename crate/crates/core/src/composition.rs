//! Composition tables over an [`NGraph`] and the axiom checkers.
//!
//! Composition is written in diagrammatic order: for `a: x -> y` and
//! `b: y -> z` the vertical table at level `j` stores `c(a, b): x -> z`, where
//! `a` and `b` are cells of dimension `j + 1`. A horizontal table at level `j`
//! composes cells of dimension `j + 2` whose `j`-boundaries meet.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CellId, Dim, NGraph, Side};
use crate::report::{AxiomReport, AxiomResult, Counterexample, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("no composition table at level {0}")]
    NoTableAtLevel(Dim),
    #[error("{a} and {b} are not composable at level {level}")]
    NotComposable { level: Dim, a: CellId, b: CellId },
    #[error("composite of {a} and {b} at level {level} is not defined")]
    NotDefined { level: Dim, a: CellId, b: CellId },
    #[error("interchange at level {level} needs a vertical table at level {} and a horizontal table at level {level}", .level + 1)]
    MissingTables { level: Dim },
    #[error("unit law fails at level {0}; inverses are only defined relative to units")]
    UnitsRequired(Dim),
    #[error("level {level} unavailable: {reason}")]
    LevelUnavailable { level: Dim, reason: String },
    #[error("cell {0} does not exist")]
    NoSuchCell(CellId),
}

/// Which axioms a structure is required to satisfy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomFlags {
    #[serde(default)]
    pub global: bool,
    #[serde(default)]
    pub unital: bool,
    #[serde(default)]
    pub associative: bool,
    #[serde(default)]
    pub interchange: bool,
    #[serde(default)]
    pub groupoid: bool,
}

impl AxiomFlags {
    pub const NAMES: [&'static str; 5] =
        ["global", "unital", "associative", "interchange", "groupoid"];

    /// Parses a comma-separated flag list such as `global,unital`. `partial`
    /// and the empty string mean no flags.
    pub fn parse(list: &str) -> Result<Self, String> {
        let mut flags = AxiomFlags::default();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "global" => flags.global = true,
                "unital" => flags.unital = true,
                "associative" => flags.associative = true,
                "interchange" => flags.interchange = true,
                "groupoid" => flags.groupoid = true,
                "partial" => {}
                other => return Err(format!("unknown axiom flag {other:?}")),
            }
        }
        Ok(flags)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let on = [
            self.global,
            self.unital,
            self.associative,
            self.interchange,
            self.groupoid,
        ];
        Self::NAMES
            .iter()
            .zip(on)
            .filter(|(_, b)| *b)
            .map(|(n, _)| *n)
            .collect()
    }
}

fn check_cell(g: &NGraph, dim: Dim, index: usize) -> Result<(), CompositionError> {
    let cell = CellId::new(dim, index);
    if g.contains(cell) {
        Ok(())
    } else {
        Err(CompositionError::NoSuchCell(cell))
    }
}

/// Vertical composition at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompTable {
    level: Dim,
    entries: BTreeMap<(usize, usize), usize>,
}

impl CompTable {
    pub fn new(level: Dim) -> Self {
        CompTable {
            level,
            entries: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> Dim {
        self.level
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.entries.get(&(a, b)).copied()
    }

    /// Entries whose first operand is `a`.
    pub fn row(&self, a: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries
            .range((a, 0)..=(a, usize::MAX))
            .map(|(&(_, b), &v)| (b, v))
    }

    /// Inserts `c(a, b) = value`. The key must be composable; the value is only
    /// range-checked (typing is [`check_typing`]'s job).
    pub fn insert(
        &mut self,
        g: &NGraph,
        a: usize,
        b: usize,
        value: usize,
    ) -> Result<Option<usize>, CompositionError> {
        let d = self.level + 1;
        check_cell(g, d, a)?;
        check_cell(g, d, b)?;
        check_cell(g, d, value)?;
        if g.tgt_of(d, a) != g.src_of(d, b) {
            return Err(CompositionError::NotComposable {
                level: self.level,
                a: CellId::new(d, a),
                b: CellId::new(d, b),
            });
        }
        Ok(self.entries.insert((a, b), value))
    }

    pub fn remove(&mut self, a: usize, b: usize) -> Option<usize> {
        self.entries.remove(&(a, b))
    }

    pub(crate) fn insert_unchecked(&mut self, a: usize, b: usize, value: usize) {
        self.entries.insert((a, b), value);
    }
}

/// Horizontal composition of cells of dimension `level + 2` along their
/// `level`-boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCompTable {
    level: Dim,
    entries: BTreeMap<(usize, usize), usize>,
}

impl HCompTable {
    pub const SPAN: Dim = 2;

    pub fn new(level: Dim) -> Self {
        HCompTable {
            level,
            entries: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> Dim {
        self.level
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.entries.get(&(a, b)).copied()
    }

    pub fn row(&self, a: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries
            .range((a, 0)..=(a, usize::MAX))
            .map(|(&(_, b), &v)| (b, v))
    }

    pub fn insert(
        &mut self,
        g: &NGraph,
        a: usize,
        b: usize,
        value: usize,
    ) -> Result<Option<usize>, CompositionError> {
        let d = self.level + Self::SPAN;
        check_cell(g, d, a)?;
        check_cell(g, d, b)?;
        check_cell(g, d, value)?;
        if g.boundary_at(d, a, self.level, Side::Target)
            != g.boundary_at(d, b, self.level, Side::Source)
        {
            return Err(CompositionError::NotComposable {
                level: self.level,
                a: CellId::new(d, a),
                b: CellId::new(d, b),
            });
        }
        Ok(self.entries.insert((a, b), value))
    }

    pub fn remove(&mut self, a: usize, b: usize) -> Option<usize> {
        self.entries.remove(&(a, b))
    }

    pub(crate) fn insert_unchecked(&mut self, a: usize, b: usize, value: usize) {
        self.entries.insert((a, b), value);
    }
}

/// Cooperation `z |-> (w, p, q)` at one level: `z: x -> y` splits as `p: x -> w`
/// followed by `q: w -> y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocompTable {
    pub level: Dim,
    pub entries: BTreeMap<usize, (usize, usize, usize)>,
}

/// An n-graph together with composition tables and the axioms it claims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryStructure {
    graph: NGraph,
    vtables: BTreeMap<Dim, CompTable>,
    htables: BTreeMap<Dim, HCompTable>,
    pub flags: AxiomFlags,
}

impl CategoryStructure {
    pub fn new(graph: NGraph, flags: AxiomFlags) -> Self {
        CategoryStructure {
            graph,
            vtables: BTreeMap::new(),
            htables: BTreeMap::new(),
            flags,
        }
    }

    pub fn graph(&self) -> &NGraph {
        &self.graph
    }

    pub fn vtables(&self) -> &BTreeMap<Dim, CompTable> {
        &self.vtables
    }

    pub fn htables(&self) -> &BTreeMap<Dim, HCompTable> {
        &self.htables
    }

    pub fn vtable(&self, level: Dim) -> Option<&CompTable> {
        self.vtables.get(&level)
    }

    pub fn htable(&self, level: Dim) -> Option<&HCompTable> {
        self.htables.get(&level)
    }

    pub fn vtable_mut(&mut self, level: Dim) -> Option<&mut CompTable> {
        self.vtables.get_mut(&level)
    }

    pub fn htable_mut(&mut self, level: Dim) -> Option<&mut HCompTable> {
        self.htables.get_mut(&level)
    }

    pub fn vertical_level_ok(g: &NGraph, level: Dim) -> Result<(), CompositionError> {
        if level < -1 || level >= g.top() {
            return Err(CompositionError::LevelUnavailable {
                level,
                reason: format!("vertical levels run from -1 to {}", g.top() - 1),
            });
        }
        if level == -1 && !g.is_monoidal_carrier() {
            return Err(CompositionError::LevelUnavailable {
                level,
                reason: "objects only compose when there is a single (-1)-cell".into(),
            });
        }
        Ok(())
    }

    pub fn horizontal_level_ok(g: &NGraph, level: Dim) -> Result<(), CompositionError> {
        if level < -1 || level + HCompTable::SPAN > g.top() {
            return Err(CompositionError::LevelUnavailable {
                level,
                reason: format!(
                    "horizontal levels run from -1 to {}",
                    g.top() - HCompTable::SPAN
                ),
            });
        }
        Ok(())
    }

    /// Installs a vertical table, replacing any table at the same level.
    pub fn set_vtable(&mut self, table: CompTable) -> Result<(), CompositionError> {
        Self::vertical_level_ok(&self.graph, table.level)?;
        let d = table.level + 1;
        for (&(a, b), &v) in &table.entries {
            for x in [a, b, v] {
                check_cell(&self.graph, d, x)?;
            }
            if self.graph.tgt_of(d, a) != self.graph.src_of(d, b) {
                return Err(CompositionError::NotComposable {
                    level: table.level,
                    a: CellId::new(d, a),
                    b: CellId::new(d, b),
                });
            }
        }
        self.vtables.insert(table.level, table);
        Ok(())
    }

    pub fn set_htable(&mut self, table: HCompTable) -> Result<(), CompositionError> {
        Self::horizontal_level_ok(&self.graph, table.level)?;
        let d = table.level + HCompTable::SPAN;
        for (&(a, b), &v) in &table.entries {
            for x in [a, b, v] {
                check_cell(&self.graph, d, x)?;
            }
            if self.graph.boundary_at(d, a, table.level, Side::Target)
                != self.graph.boundary_at(d, b, table.level, Side::Source)
            {
                return Err(CompositionError::NotComposable {
                    level: table.level,
                    a: CellId::new(d, a),
                    b: CellId::new(d, b),
                });
            }
        }
        self.htables.insert(table.level, table);
        Ok(())
    }

    pub fn with_vtable(mut self, table: CompTable) -> Result<Self, CompositionError> {
        self.set_vtable(table)?;
        Ok(self)
    }

    pub fn with_htable(mut self, table: HCompTable) -> Result<Self, CompositionError> {
        self.set_htable(table)?;
        Ok(self)
    }

    fn table(&self, level: Dim) -> Result<&CompTable, CompositionError> {
        self.vtables
            .get(&level)
            .ok_or(CompositionError::NoTableAtLevel(level))
    }

    /// Looks up `c(a, b)` at `level`.
    pub fn compose(&self, level: Dim, a: CellId, b: CellId) -> Result<CellId, CompositionError> {
        let table = self.table(level)?;
        let d = level + 1;
        for c in [a, b] {
            if c.dim != d || !self.graph.contains(c) {
                return Err(CompositionError::NotComposable { level, a, b });
            }
        }
        if self.graph.tgt_of(d, a.index) != self.graph.src_of(d, b.index) {
            return Err(CompositionError::NotComposable { level, a, b });
        }
        table
            .get(a.index, b.index)
            .map(|v| CellId::new(d, v))
            .ok_or(CompositionError::NotDefined { level, a, b })
    }
}

fn cell(dim: Dim, index: usize) -> CellId {
    CellId::new(dim, index)
}

/// Values land in the right hom-sets.
pub fn check_typing(s: &CategoryStructure) -> AxiomReport {
    let g = s.graph();
    let mut report = AxiomReport::default();
    for (&level, table) in s.vtables() {
        let d = level + 1;
        let mut cx = Vec::new();
        for (&(a, b), &v) in table.entries() {
            let (sv, tv) = (g.src_of(d, v), g.tgt_of(d, v));
            let (sa, tb) = (g.src_of(d, a), g.tgt_of(d, b));
            if sv != sa {
                cx.push(
                    Counterexample::new("source", vec![cell(d, a), cell(d, b), cell(d, v)])
                        .values(Some(cell(level, sa)), Some(cell(level, sv))),
                );
            }
            if tv != tb {
                cx.push(
                    Counterexample::new("target", vec![cell(d, a), cell(d, b), cell(d, v)])
                        .values(Some(cell(level, tb)), Some(cell(level, tv))),
                );
            }
        }
        report.push(AxiomResult::from_counterexamples("typing", Some(level), cx));
    }
    for (&level, table) in s.htables() {
        let d = level + HCompTable::SPAN;
        let below = s.vtable(level);
        let mut cx = Vec::new();
        for (&(a, b), &v) in table.entries() {
            let triple = vec![cell(d, a), cell(d, b), cell(d, v)];
            for side in [Side::Source, Side::Target] {
                let want =
                    below.and_then(|t| t.get(g.boundary_of(d, a, side), g.boundary_of(d, b, side)));
                let have = g.boundary_of(d, v, side);
                match want {
                    None => {
                        cx.push(Counterexample::new("untypeable", triple.clone()));
                        break;
                    }
                    Some(w) if w != have => cx.push(
                        Counterexample::new(format!("horizontal-{side}"), triple.clone())
                            .values(Some(cell(d - 1, w)), Some(cell(d - 1, have))),
                    ),
                    Some(_) => {}
                }
            }
        }
        report.push(AxiomResult::from_counterexamples(
            "typing.horizontal",
            Some(level),
            cx,
        ));
    }
    report
}

/// Every composable pair at `level` has an entry.
pub fn check_global(s: &CategoryStructure, level: Dim) -> Result<AxiomResult, CompositionError> {
    let table = s.table(level)?;
    let d = level + 1;
    let cx = s
        .graph()
        .composable_pairs(level)
        .into_iter()
        .filter(|&(a, b)| table.get(a, b).is_none())
        .map(|(a, b)| Counterexample::new("missing", vec![cell(d, a), cell(d, b)]))
        .collect();
    Ok(AxiomResult::from_counterexamples("global", Some(level), cx))
}

fn check_global_horizontal(s: &CategoryStructure, table: &HCompTable) -> AxiomResult {
    let level = table.level();
    let d = level + HCompTable::SPAN;
    let cx = s
        .graph()
        .horizontal_pairs(level)
        .into_iter()
        .filter(|&(a, b)| table.get(a, b).is_none())
        .map(|(a, b)| Counterexample::new("missing", vec![cell(d, a), cell(d, b)]))
        .collect();
    AxiomResult::from_counterexamples("global.horizontal", Some(level), cx)
}

/// Both bracketings agree wherever both are defined. Triples where only one
/// bracketing is defined are listed as asymmetries and do not fail the axiom.
pub fn check_associativity(
    s: &CategoryStructure,
    level: Dim,
) -> Result<AxiomResult, CompositionError> {
    let table = s.table(level)?;
    let g = s.graph();
    let d = level + 1;
    let mut by_src: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..g.count(d) {
        by_src.entry(g.src_of(d, c)).or_default().push(c);
    }
    let mut cx = Vec::new();
    let mut asym = Vec::new();
    for (a, b) in g.composable_pairs(level) {
        let ab = table.get(a, b);
        for &c in by_src.get(&g.tgt_of(d, b)).map_or(&[][..], Vec::as_slice) {
            let bc = table.get(b, c);
            let left = ab.and_then(|x| table.get(x, c));
            let right = bc.and_then(|y| table.get(a, y));
            match (left, right) {
                (Some(l), Some(r)) if l != r => cx.push(
                    Counterexample::new("associativity", vec![cell(d, a), cell(d, b), cell(d, c)])
                        .values(Some(cell(d, l)), Some(cell(d, r))),
                ),
                (Some(_), None) | (None, Some(_)) => {
                    asym.push(vec![cell(d, a), cell(d, b), cell(d, c)])
                }
                _ => {}
            }
        }
    }
    let mut r = AxiomResult::from_counterexamples("associativity", Some(level), cx);
    r.asymmetries = asym;
    Ok(r)
}

/// Identities act as two-sided units wherever the composite is defined, and
/// must be defined when the structure claims to be global.
pub fn check_units(s: &CategoryStructure, level: Dim) -> Result<AxiomResult, CompositionError> {
    let table = s.table(level)?;
    if level < 0 {
        return Ok(AxiomResult::not_applicable(
            "units",
            Some(level),
            "no identity section below dimension 0",
        ));
    }
    let g = s.graph();
    let d = level + 1;
    let mut cx = Vec::new();
    for a in 0..g.count(d) {
        let (x, y) = (g.src_of(d, a), g.tgt_of(d, a));
        let (ix, iy) = (g.idn_of(level, x), g.idn_of(level, y));
        for (kind, value, pair) in [
            ("left-unit", table.get(ix, a), vec![cell(d, ix), cell(d, a)]),
            (
                "right-unit",
                table.get(a, iy),
                vec![cell(d, a), cell(d, iy)],
            ),
        ] {
            match value {
                Some(v) if v != a => cx.push(
                    Counterexample::new(kind, pair).values(Some(cell(d, a)), Some(cell(d, v))),
                ),
                None if s.flags.global => cx.push(
                    Counterexample::new(format!("{kind}-missing"), pair)
                        .values(Some(cell(d, a)), None),
                ),
                _ => {}
            }
        }
    }
    Ok(AxiomResult::from_counterexamples("units", Some(level), cx))
}

/// Middle-four exchange between the horizontal table at `level` and the
/// vertical table at `level + 1`:
/// `h(v(a, a'), v(b, b')) = v(h(a, b), h(a', b'))`.
pub fn check_interchange(
    s: &CategoryStructure,
    level: Dim,
) -> Result<AxiomResult, CompositionError> {
    let (Some(h), Some(v)) = (s.htable(level), s.vtable(level + 1)) else {
        return Err(CompositionError::MissingTables { level });
    };
    let d = level + HCompTable::SPAN;
    let mut cx = Vec::new();
    let mut asym = Vec::new();
    for (&(a, a2), &gamma) in v.entries() {
        for (b, h1) in h.row(a) {
            for (b2, delta) in v.row(b) {
                let Some(h2) = h.get(a2, b2) else { continue };
                let left = h.get(gamma, delta);
                let right = v.get(h1, h2);
                let quad = vec![cell(d, a), cell(d, a2), cell(d, b), cell(d, b2)];
                match (left, right) {
                    (Some(l), Some(r)) if l != r => cx.push(
                        Counterexample::new("interchange", quad)
                            .values(Some(cell(d, l)), Some(cell(d, r))),
                    ),
                    (Some(_), None) | (None, Some(_)) => asym.push(quad),
                    _ => {}
                }
            }
        }
    }
    let mut r = AxiomResult::from_counterexamples("interchange", Some(level), cx);
    r.asymmetries = asym;
    Ok(r)
}

/// For each cell at `level`, every two-sided inverse in the table.
pub fn inverses(
    s: &CategoryStructure,
    level: Dim,
) -> Result<BTreeMap<usize, Vec<usize>>, CompositionError> {
    let table = s.table(level)?;
    if level < 0 {
        return Err(CompositionError::UnitsRequired(level));
    }
    let g = s.graph();
    let d = level + 1;
    let mut out = BTreeMap::new();
    for a in 0..g.count(d) {
        let (x, y) = (g.src_of(d, a), g.tgt_of(d, a));
        let (ix, iy) = (g.idn_of(level, x), g.idn_of(level, y));
        let inv: Vec<usize> = g
            .hom(level, y, x)
            .iter()
            .copied()
            .filter(|&b| table.get(a, b) == Some(ix) && table.get(b, a) == Some(iy))
            .collect();
        out.insert(a, inv);
    }
    Ok(out)
}

/// Every cell has a two-sided inverse. Requires the unit law to hold first.
pub fn check_groupoid(s: &CategoryStructure, level: Dim) -> Result<AxiomResult, CompositionError> {
    let units = check_units(s, level)?;
    if units.verdict != Verdict::Pass {
        return Err(CompositionError::UnitsRequired(level));
    }
    let d = level + 1;
    let cx = inverses(s, level)?
        .into_iter()
        .filter(|(_, inv)| inv.is_empty())
        .map(|(a, _)| Counterexample::new("no-inverse", vec![cell(d, a)]))
        .collect();
    Ok(AxiomResult::from_counterexamples(
        "groupoid",
        Some(level),
        cx,
    ))
}

/// Each entry `z |-> (w, p, q)` with `z: x -> y` has `p: x -> w` and `q: w -> y`.
pub fn check_cocategory(g: &NGraph, table: &CocompTable) -> AxiomResult {
    let level = table.level;
    let d = level + 1;
    let mut cx = Vec::new();
    let in_range = |dim: Dim, i: usize| g.contains(cell(dim, i));
    for (&z, &(w, p, q)) in &table.entries {
        let cells = vec![cell(d, z), cell(level, w), cell(d, p), cell(d, q)];
        if !(in_range(d, z) && in_range(level, w) && in_range(d, p) && in_range(d, q)) {
            cx.push(Counterexample::new("out-of-range", cells));
            continue;
        }
        let (x, y) = (g.src_of(d, z), g.tgt_of(d, z));
        if g.src_of(d, p) != x || g.tgt_of(d, p) != w {
            cx.push(
                Counterexample::new("left-factor", cells.clone())
                    .values(Some(cell(level, x)), Some(cell(level, g.src_of(d, p)))),
            );
        }
        if g.src_of(d, q) != w || g.tgt_of(d, q) != y {
            cx.push(
                Counterexample::new("right-factor", cells)
                    .values(Some(cell(level, y)), Some(cell(level, g.tgt_of(d, q)))),
            );
        }
    }
    AxiomResult::from_counterexamples("cocategory", Some(level), cx)
}

/// Typing always, then every axiom the structure's flags ask for, at every level
/// that carries a table.
pub fn check_category(s: &CategoryStructure) -> AxiomReport {
    let mut report = check_typing(s);
    let f = s.flags;
    for &level in s.vtables().keys() {
        if f.global {
            report.push(check_global(s, level).expect("table exists"));
        }
        if f.unital {
            report.push(check_units(s, level).expect("table exists"));
        }
        if f.associative {
            report.push(check_associativity(s, level).expect("table exists"));
        }
        if f.groupoid {
            match check_groupoid(s, level) {
                Ok(r) => report.push(r),
                Err(_) => {
                    let units = check_units(s, level).expect("table exists");
                    let mut r = if units.verdict == Verdict::NotApplicable {
                        AxiomResult::not_applicable(
                            "groupoid",
                            Some(level),
                            "no identity section below dimension 0",
                        )
                    } else {
                        AxiomResult::from_counterexamples(
                            "groupoid",
                            Some(level),
                            units.counterexamples,
                        )
                    };
                    r.notes.push("inverses require the unit law".into());
                    report.push(r);
                }
            }
        }
    }
    if f.global {
        for table in s.htables().values() {
            report.push(check_global_horizontal(s, table));
        }
    }
    if f.interchange {
        let mut any = false;
        for &level in s.htables().keys() {
            if s.vtable(level + 1).is_some() {
                any = true;
                report.push(check_interchange(s, level).expect("tables exist"));
            }
        }
        if !any {
            report.push(AxiomResult::not_applicable(
                "interchange",
                None,
                "no horizontal table paired with a vertical table one level up",
            ));
        }
    }
    report
}
