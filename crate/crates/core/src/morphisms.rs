//! Graph morphisms, functors, natural transformations and modifications, with
//! enumerators over small instances and the category of categories built from
//! them.
//!
//! All composites use the diagrammatic order of [`crate::composition`]: the
//! naturality square for `t: f => g` at `a: x -> y` reads
//! `c(t x, g a) = c(f a, t y)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::composition::{check_category, AxiomFlags, CategoryStructure, CompTable, HCompTable};
use crate::graph::{slot, validate_graph, CellId, CellMap, Dim, GraphError, NGraph, RawGraph};
use crate::report::{AxiomReport, AxiomResult, Counterexample};

pub const DEFAULT_SEARCH_BOUND: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("domain has dimension {domain}, codomain has dimension {codomain}")]
    DimensionMismatch { domain: usize, codomain: usize },
    #[error("component map has the wrong shape at dimension {dim}")]
    ShapeMismatch { dim: Dim },
    #[error("component of {cell} points outside the codomain")]
    OutOfRange { cell: CellId },
    #[error("domain has {domain} cells of dimension -1, codomain has {codomain}")]
    TailMismatch { domain: usize, codomain: usize },
    #[error("weakened morphisms are not supported")]
    WeakeningUnsupported,
    #[error("transformations do not share endpoints")]
    EndpointMismatch,
    #[error("no cells of dimension {dim} for components at level {level}")]
    LevelUnavailable { level: Dim, dim: Dim },
    #[error("search visited more than {bound} nodes")]
    SpaceTooLarge { bound: u64 },
    #[error("input {index} is not a category: {reason}")]
    NotACategory { index: usize, reason: String },
    #[error("composite of {0} is missing from the construction")]
    NotClosed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Per-dimension component maps `f_i`, indexed like [`CellMap`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphMorphism {
    pub comps: CellMap,
}

impl GraphMorphism {
    pub fn identity(g: &NGraph) -> Self {
        GraphMorphism {
            comps: CellMap::identity(g),
        }
    }

    /// Sends every cell to `object` or the appropriate iterated identity of it.
    pub fn constant(e: &NGraph, f: &NGraph, object: usize) -> Self {
        let mut slots = vec![(0..e.count(-1)).collect::<Vec<_>>()];
        let mut target = object;
        for d in 0..=e.top() {
            slots.push(vec![target; e.count(d)]);
            if d < f.top() {
                target = f.idn_of(d, target);
            }
        }
        GraphMorphism {
            comps: CellMap { slots },
        }
    }

    pub fn get(&self, dim: Dim, x: usize) -> usize {
        self.comps.get(dim, x)
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &GraphMorphism) -> GraphMorphism {
        GraphMorphism {
            comps: self.comps.then(&next.comps),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarianceSpec {
    pub contravariant_levels: BTreeSet<Dim>,
    /// Intertwining up to a 2-cell. Not supported; checks reject it.
    pub weakened: bool,
}

impl VarianceSpec {
    pub fn at(levels: impl IntoIterator<Item = Dim>) -> Self {
        VarianceSpec {
            contravariant_levels: levels.into_iter().collect(),
            weakened: false,
        }
    }
}

/// Components `t x` for domain cells `x` of each configured level `i`, valued
/// in codomain cells of dimension `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transformation {
    pub f: GraphMorphism,
    pub g: GraphMorphism,
    pub components: BTreeMap<Dim, Vec<usize>>,
}

impl Transformation {
    /// Components at level 0 only.
    pub fn new(f: GraphMorphism, g: GraphMorphism, comps: Vec<usize>) -> Self {
        Transformation {
            f,
            g,
            components: BTreeMap::from([(0, comps)]),
        }
    }

    /// `t x = idn(f x)` at every configured level.
    pub fn identity(f: &GraphMorphism, e: &NGraph, codomain: &NGraph, levels: &[Dim]) -> Self {
        let components = levels
            .iter()
            .map(|&i| {
                (
                    i,
                    (0..e.count(i))
                        .map(|x| codomain.idn_of(i, f.get(i, x)))
                        .collect(),
                )
            })
            .collect();
        Transformation {
            f: f.clone(),
            g: f.clone(),
            components,
        }
    }
}

/// Components `mu x` for domain cells `x` of each configured level `i`, valued
/// in codomain cells of dimension `i + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modification {
    pub s: Transformation,
    pub t: Transformation,
    pub components: BTreeMap<Dim, Vec<usize>>,
}

fn cell(dim: Dim, index: usize) -> CellId {
    CellId::new(dim, index)
}

fn check_shape(e: &NGraph, f: &NGraph, m: &GraphMorphism) -> Result<(), MorphismError> {
    if e.n() != f.n() {
        return Err(MorphismError::DimensionMismatch {
            domain: e.n(),
            codomain: f.n(),
        });
    }
    if e.count(-1) != f.count(-1) {
        return Err(MorphismError::TailMismatch {
            domain: e.count(-1),
            codomain: f.count(-1),
        });
    }
    if m.comps.slots.len() != e.n() + 2 {
        return Err(MorphismError::ShapeMismatch { dim: e.top() });
    }
    for d in -1..=e.top() {
        let comps = &m.comps.slots[slot(d)];
        if comps.len() != e.count(d) {
            return Err(MorphismError::ShapeMismatch { dim: d });
        }
        if let Some(x) = comps.iter().position(|&v| v >= f.count(d)) {
            return Err(MorphismError::OutOfRange { cell: cell(d, x) });
        }
    }
    Ok(())
}

/// Source, target and identity squares commute, and the tail is fixed pointwise.
pub fn check_graph_morphism(
    e: &NGraph,
    f: &NGraph,
    m: &GraphMorphism,
) -> Result<AxiomReport, MorphismError> {
    check_shape(e, f, m)?;
    let mut report = AxiomReport::default();
    let tail = (0..e.count(-1))
        .filter(|&x| m.get(-1, x) != x)
        .map(|x| {
            Counterexample::new("tail-moved", vec![cell(-1, x)])
                .values(Some(cell(-1, x)), Some(cell(-1, m.get(-1, x))))
        })
        .collect();
    report.push(AxiomResult::from_counterexamples("tail", None, tail));
    let mut src_cx = Vec::new();
    let mut tgt_cx = Vec::new();
    for d in 0..=e.top() {
        for a in 0..e.count(d) {
            let fa = m.get(d, a);
            let want = m.get(d - 1, e.src_of(d, a));
            let got = f.src_of(d, fa);
            if want != got {
                src_cx.push(
                    Counterexample::new("source-square", vec![cell(d, a)])
                        .values(Some(cell(d - 1, want)), Some(cell(d - 1, got))),
                );
            }
            let want = m.get(d - 1, e.tgt_of(d, a));
            let got = f.tgt_of(d, fa);
            if want != got {
                tgt_cx.push(
                    Counterexample::new("target-square", vec![cell(d, a)])
                        .values(Some(cell(d - 1, want)), Some(cell(d - 1, got))),
                );
            }
        }
    }
    report.push(AxiomResult::from_counterexamples("source", None, src_cx));
    report.push(AxiomResult::from_counterexamples("target", None, tgt_cx));
    let mut idn_cx = Vec::new();
    for d in 0..e.top() {
        for x in 0..e.count(d) {
            let want = f.idn_of(d, m.get(d, x));
            let got = m.get(d + 1, e.idn_of(d, x));
            if want != got {
                idn_cx.push(
                    Counterexample::new("identity-square", vec![cell(d, x)])
                        .values(Some(cell(d + 1, want)), Some(cell(d + 1, got))),
                );
            }
        }
    }
    report.push(AxiomResult::from_counterexamples("identity", None, idn_cx));
    Ok(report)
}

/// [`check_graph_morphism`] into the codomain reversed at every level in `v`.
pub fn check_contravariant(
    e: &NGraph,
    f: &NGraph,
    m: &GraphMorphism,
    v: &VarianceSpec,
) -> Result<AxiomReport, MorphismError> {
    if v.weakened {
        return Err(MorphismError::WeakeningUnsupported);
    }
    let mut target = f.clone();
    for &i in &v.contravariant_levels {
        target = target.opposite(i)?;
    }
    check_graph_morphism(e, &target, m)
}

fn composite_cx(
    d: Dim,
    a: usize,
    b: usize,
    c: usize,
    m: &GraphMorphism,
    got: Option<usize>,
) -> Option<Counterexample> {
    let want = m.get(d, c);
    match got {
        Some(v) if v == want => None,
        Some(v) => Some(
            Counterexample::new("composite-mismatch", vec![cell(d, a), cell(d, b)])
                .values(Some(cell(d, want)), Some(cell(d, v))),
        ),
        None => Some(
            Counterexample::new("composite-undefined", vec![cell(d, a), cell(d, b)])
                .values(Some(cell(d, want)), None),
        ),
    }
}

/// Graph morphism squares plus preservation of every defined composite, in
/// every vertical and horizontal table of `ce`.
pub fn check_functor(
    m: &GraphMorphism,
    ce: &CategoryStructure,
    cf: &CategoryStructure,
) -> Result<AxiomReport, MorphismError> {
    let mut report = check_graph_morphism(ce.graph(), cf.graph(), m)?;
    for (&j, table) in ce.vtables() {
        let d = j + 1;
        let target = cf.vtable(j);
        let cx = table
            .entries()
            .iter()
            .filter_map(|(&(a, b), &c)| {
                let got = target.and_then(|t| t.get(m.get(d, a), m.get(d, b)));
                composite_cx(d, a, b, c, m, got)
            })
            .collect();
        report.push(AxiomResult::from_counterexamples("functor", Some(j), cx));
    }
    for (&j, table) in ce.htables() {
        let d = j + HCompTable::SPAN;
        let target = cf.htable(j);
        let cx = table
            .entries()
            .iter()
            .filter_map(|(&(a, b), &c)| {
                let got = target.and_then(|t| t.get(m.get(d, a), m.get(d, b)));
                composite_cx(d, a, b, c, m, got)
            })
            .collect();
        report.push(AxiomResult::from_counterexamples(
            "functor.horizontal",
            Some(j),
            cx,
        ));
    }
    Ok(report)
}

fn vget(s: &CategoryStructure, level: Dim, a: usize, b: usize) -> Option<usize> {
    s.vtable(level).and_then(|t| t.get(a, b))
}

fn component_level_ok(e: &NGraph, f: &NGraph, level: Dim, lift: Dim) -> Result<(), MorphismError> {
    if level < 0 || level > e.top() || level + lift > f.top() {
        return Err(MorphismError::LevelUnavailable {
            level,
            dim: level + lift,
        });
    }
    Ok(())
}

/// Typing and naturality squares only, without re-checking `f` and `g`.
fn naturality(
    tr: &Transformation,
    ce: &CategoryStructure,
    cf: &CategoryStructure,
) -> Result<AxiomReport, MorphismError> {
    let (e, f) = (ce.graph(), cf.graph());
    let mut report = AxiomReport::default();
    for (&i, comps) in &tr.components {
        component_level_ok(e, f, i, 1)?;
        if comps.len() != e.count(i) {
            return Err(MorphismError::ShapeMismatch { dim: i });
        }
        let d = i + 1;
        let mut typing = Vec::new();
        let mut typed = vec![true; comps.len()];
        for (x, &tx) in comps.iter().enumerate() {
            let (fx, gx) = (tr.f.get(i, x), tr.g.get(i, x));
            if tx >= f.count(d) || f.src_of(d, tx) != fx || f.tgt_of(d, tx) != gx {
                typed[x] = false;
                typing.push(
                    Counterexample::new("component-untyped", vec![cell(i, x)])
                        .values(None, Some(cell(d, tx))),
                );
            }
        }
        report.push(AxiomResult::from_counterexamples(
            "transformation.typing",
            Some(i),
            typing,
        ));
        let mut squares = Vec::new();
        if d <= e.top() {
            for a in 0..e.count(d) {
                let (x, y) = (e.src_of(d, a), e.tgt_of(d, a));
                if !typed[x] || !typed[y] {
                    continue;
                }
                let left = vget(cf, i, comps[x], tr.g.get(d, a));
                let right = vget(cf, i, tr.f.get(d, a), comps[y]);
                let cells = vec![cell(d, a), cell(i, x), cell(i, y)];
                match (left, right) {
                    (Some(l), Some(r)) if l == r => {}
                    (Some(l), Some(r)) => squares.push(
                        Counterexample::new("naturality-failed", cells)
                            .values(Some(cell(d, r)), Some(cell(d, l))),
                    ),
                    (l, r) => squares.push(
                        Counterexample::new("naturality-square-undefined", cells)
                            .values(r.map(|r| cell(d, r)), l.map(|l| cell(d, l))),
                    ),
                }
            }
        }
        report.push(AxiomResult::from_counterexamples(
            "transformation.naturality",
            Some(i),
            squares,
        ));
    }
    Ok(report)
}

/// Functor checks for both endpoints, component typing, and the naturality
/// square `c(t x, g a) = c(f a, t y)` for every `a: x -> y`.
pub fn check_transformation(
    tr: &Transformation,
    ce: &CategoryStructure,
    cf: &CategoryStructure,
) -> Result<AxiomReport, MorphismError> {
    let mut report = AxiomReport::default();
    report.extend_prefixed("f", check_functor(&tr.f, ce, cf)?);
    report.extend_prefixed("g", check_functor(&tr.g, ce, cf)?);
    report.extend(naturality(tr, ce, cf)?);
    Ok(report)
}

/// Typing `mu x : s x => t x`, the four path equations for every `alpha: a => b`
/// between cells `a, b: x -> y`, and the whiskered 2-cell equation
/// `h(mu x, g alpha) = h(f alpha, mu y)` when the codomain has the horizontal
/// table it needs.
///
/// When the domain has no cells of dimension `i + 2`, each `a` stands in for
/// its own identity.
pub fn check_modification(
    md: &Modification,
    ce: &CategoryStructure,
    cf: &CategoryStructure,
) -> Result<AxiomReport, MorphismError> {
    let (s, t) = (&md.s, &md.t);
    if s.f != t.f || s.g != t.g {
        return Err(MorphismError::EndpointMismatch);
    }
    let (e, f) = (ce.graph(), cf.graph());
    let mut report = AxiomReport::default();
    report.extend_prefixed("s", check_transformation(s, ce, cf)?);
    report.extend_prefixed("t", naturality(t, ce, cf)?);
    let (fm, gm) = (&s.f, &s.g);
    for (&i, comps) in &md.components {
        component_level_ok(e, f, i, 2)?;
        if comps.len() != e.count(i) {
            return Err(MorphismError::ShapeMismatch { dim: i });
        }
        let (Some(sc), Some(tc)) = (s.components.get(&i), t.components.get(&i)) else {
            return Err(MorphismError::LevelUnavailable {
                level: i,
                dim: i + 1,
            });
        };
        let (d1, d2) = (i + 1, i + 2);
        let mut typing = Vec::new();
        for (x, &mx) in comps.iter().enumerate() {
            if mx >= f.count(d2) || f.src_of(d2, mx) != sc[x] || f.tgt_of(d2, mx) != tc[x] {
                typing.push(
                    Counterexample::new("component-untyped", vec![cell(i, x)])
                        .values(None, Some(cell(d2, mx))),
                );
            }
        }
        let typing_ok = typing.is_empty();
        report.push(AxiomResult::from_counterexamples(
            "modification.typing",
            Some(i),
            typing,
        ));

        // (a, b, image of alpha under f, under g), alpha being a real cell or a stand-in identity
        let mut arrows: Vec<(Option<usize>, usize, usize, usize, usize)> = Vec::new();
        if d2 <= e.top() {
            for alpha in 0..e.count(d2) {
                let (a, b) = (e.src_of(d2, alpha), e.tgt_of(d2, alpha));
                arrows.push((Some(alpha), a, b, fm.get(d2, alpha), gm.get(d2, alpha)));
            }
        } else if d1 <= e.top() {
            for a in 0..e.count(d1) {
                arrows.push((
                    None,
                    a,
                    a,
                    f.idn_of(d1, fm.get(d1, a)),
                    f.idn_of(d1, gm.get(d1, a)),
                ));
            }
        }
        let mut paths = Vec::new();
        for &(_, a, b, _, _) in &arrows {
            let (x, y) = (e.src_of(d1, a), e.tgt_of(d1, a));
            for (comp, c) in [(sc, a), (sc, b), (tc, a), (tc, b)] {
                let left = vget(cf, i, comp[x], gm.get(d1, c));
                let right = vget(cf, i, fm.get(d1, c), comp[y]);
                let cells = vec![cell(d1, c), cell(i, x), cell(i, y)];
                match (left, right) {
                    (Some(l), Some(r)) if l == r => {}
                    (Some(l), Some(r)) => paths.push(
                        Counterexample::new("path-failed", cells)
                            .values(Some(cell(d1, r)), Some(cell(d1, l))),
                    ),
                    (l, r) => paths.push(
                        Counterexample::new("path-undefined", cells)
                            .values(r.map(|r| cell(d1, r)), l.map(|l| cell(d1, l))),
                    ),
                }
            }
        }
        paths.dedup();
        report.push(AxiomResult::from_counterexamples(
            "modification.paths",
            Some(i),
            paths,
        ));

        let Some(h) = cf.htable(i) else {
            report.push(AxiomResult::not_applicable(
                "modification.2-cell",
                Some(i),
                format!(
                    "codomain has no horizontal table at level {i} to whisker the 2-cell equation"
                ),
            ));
            continue;
        };
        if !typing_ok {
            report.push(AxiomResult::not_applicable(
                "modification.2-cell",
                Some(i),
                "components are untyped",
            ));
            continue;
        }
        let mut cx = Vec::new();
        for &(alpha, a, _, fa, ga) in &arrows {
            let (x, y) = (e.src_of(d1, a), e.tgt_of(d1, a));
            let left = h.get(comps[x], ga);
            let right = h.get(fa, comps[y]);
            let mut cells = vec![cell(i, x), cell(i, y)];
            cells.insert(0, alpha.map_or(cell(d1, a), |al| cell(d2, al)));
            match (left, right) {
                (Some(l), Some(r)) if l == r => {}
                (Some(l), Some(r)) => cx.push(
                    Counterexample::new("2-cell-failed", cells)
                        .values(Some(cell(d2, r)), Some(cell(d2, l))),
                ),
                (l, r) => cx.push(
                    Counterexample::new("2-cell-undefined", cells)
                        .values(r.map(|r| cell(d2, r)), l.map(|l| cell(d2, l))),
                ),
            }
        }
        report.push(AxiomResult::from_counterexamples(
            "modification.2-cell",
            Some(i),
            cx,
        ));
    }
    Ok(report)
}

/// Composition entries grouped by the largest of their three cells, so each is
/// checked as soon as all three are mapped.
fn entries_by_last(
    entries: &BTreeMap<(usize, usize), usize>,
    count: usize,
) -> Vec<Vec<(usize, usize, usize)>> {
    let mut out = vec![Vec::new(); count];
    for (&(a, b), &c) in entries {
        out[a.max(b).max(c)].push((a, b, c));
    }
    out
}

/// (level, is horizontal, entries grouped by last cell).
type LevelCheck = (Dim, bool, Vec<Vec<(usize, usize, usize)>>);

struct FunctorSearch<'a> {
    e: &'a NGraph,
    f: &'a NGraph,
    cf: &'a CategoryStructure,
    checks: Vec<Vec<LevelCheck>>,
    slots: Vec<Vec<usize>>,
    nodes: u64,
    bound: u64,
    out: Vec<GraphMorphism>,
}

impl FunctorSearch<'_> {
    fn run(&mut self, d: Dim, x: usize) -> Result<(), MorphismError> {
        if d > self.e.top() {
            self.out.push(GraphMorphism {
                comps: CellMap {
                    slots: self.slots.clone(),
                },
            });
            return Ok(());
        }
        if x == self.e.count(d) {
            return self.run(d + 1, 0);
        }
        let (e, f) = (self.e, self.f);
        let candidates: Vec<usize> = match e.identity_preimage(d, x) {
            Some(p) => vec![f.idn_of(d - 1, self.slots[slot(d - 1)][p])],
            None => {
                let s = self.slots[slot(d - 1)][e.src_of(d, x)];
                let t = self.slots[slot(d - 1)][e.tgt_of(d, x)];
                f.hom(d - 1, s, t).to_vec()
            }
        };
        for v in candidates {
            self.nodes += 1;
            if self.nodes > self.bound {
                return Err(MorphismError::SpaceTooLarge { bound: self.bound });
            }
            self.slots[slot(d)][x] = v;
            if self.preserves(d, x) {
                self.run(d, x + 1)?;
            }
        }
        Ok(())
    }

    fn preserves(&self, d: Dim, x: usize) -> bool {
        let m = &self.slots[slot(d)];
        self.checks[slot(d)]
            .iter()
            .all(|(level, horizontal, by_last)| {
                by_last[x].iter().all(|&(a, b, c)| {
                    let got = if *horizontal {
                        self.cf.htable(*level).and_then(|t| t.get(m[a], m[b]))
                    } else {
                        self.cf.vtable(*level).and_then(|t| t.get(m[a], m[b]))
                    };
                    got == Some(m[c])
                })
            })
    }
}

/// Every functor `ce -> cf`, in lexicographic order of component values.
/// Graphs with different tails admit none.
pub fn enumerate_functors(
    ce: &CategoryStructure,
    cf: &CategoryStructure,
    bound: u64,
) -> Result<Vec<GraphMorphism>, MorphismError> {
    let (e, f) = (ce.graph(), cf.graph());
    if e.n() != f.n() {
        return Err(MorphismError::DimensionMismatch {
            domain: e.n(),
            codomain: f.n(),
        });
    }
    if e.count(-1) != f.count(-1) {
        return Ok(Vec::new());
    }
    let mut checks: Vec<Vec<_>> = vec![Vec::new(); e.n() + 2];
    for (&j, t) in ce.vtables() {
        checks[slot(j + 1)].push((j, false, entries_by_last(t.entries(), e.count(j + 1))));
    }
    for (&j, t) in ce.htables() {
        let d = j + HCompTable::SPAN;
        checks[slot(d)].push((j, true, entries_by_last(t.entries(), e.count(d))));
    }
    let mut slots: Vec<Vec<usize>> = (-1..=e.top()).map(|d| vec![0; e.count(d)]).collect();
    slots[0] = (0..e.count(-1)).collect();
    let mut search = FunctorSearch {
        e,
        f,
        cf,
        checks,
        slots,
        nodes: 0,
        bound,
        out: Vec::new(),
    };
    search.run(0, 0)?;
    Ok(search.out)
}

/// Every level-0 transformation `f => g`, in lexicographic order of components.
pub fn enumerate_transformations(
    f: &GraphMorphism,
    g: &GraphMorphism,
    ce: &CategoryStructure,
    cf: &CategoryStructure,
    bound: u64,
) -> Result<Vec<Transformation>, MorphismError> {
    let (e, fg) = (ce.graph(), cf.graph());
    component_level_ok(e, fg, 0, 1)?;
    let objects = e.count(0);
    // squares grouped by the later of their two endpoints
    let mut squares: Vec<Vec<usize>> = vec![Vec::new(); objects];
    if e.top() >= 1 {
        for a in 0..e.count(1) {
            squares[e.src_of(1, a).max(e.tgt_of(1, a))].push(a);
        }
    }
    let candidates: Vec<Vec<usize>> = (0..objects)
        .map(|x| fg.hom(0, f.get(0, x), g.get(0, x)).to_vec())
        .collect();
    let mut comps = vec![0; objects];
    let mut out = Vec::new();
    let mut nodes = 0u64;
    type Ctx<'a> = (
        &'a NGraph,
        &'a CategoryStructure,
        &'a GraphMorphism,
        &'a GraphMorphism,
        &'a [Vec<usize>],
        &'a [Vec<usize>],
    );
    fn go(
        x: usize,
        ctx: Ctx,
        comps: &mut Vec<usize>,
        nodes: &mut u64,
        bound: u64,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), MorphismError> {
        let (e, cf, f, g, candidates, squares) = ctx;
        if x == comps.len() {
            out.push(comps.clone());
            return Ok(());
        }
        for &v in &candidates[x] {
            *nodes += 1;
            if *nodes > bound {
                return Err(MorphismError::SpaceTooLarge { bound });
            }
            comps[x] = v;
            let closes = squares[x].iter().all(|&a| {
                let (s, t) = (e.src_of(1, a), e.tgt_of(1, a));
                let left = vget(cf, 0, comps[s], g.get(1, a));
                left.is_some() && left == vget(cf, 0, f.get(1, a), comps[t])
            });
            if closes {
                go(x + 1, ctx, comps, nodes, bound, out)?;
            }
        }
        Ok(())
    }
    let mut found = Vec::new();
    go(
        0,
        (e, cf, f, g, &candidates, &squares),
        &mut comps,
        &mut nodes,
        bound,
        &mut found,
    )?;
    for c in found {
        out.push(Transformation::new(f.clone(), g.clone(), c));
    }
    Ok(out)
}

/// Every level-0 modification `s => t` passing [`check_modification`].
pub fn enumerate_modifications(
    s: &Transformation,
    t: &Transformation,
    ce: &CategoryStructure,
    cf: &CategoryStructure,
    bound: u64,
) -> Result<Vec<Modification>, MorphismError> {
    let (e, f) = (ce.graph(), cf.graph());
    component_level_ok(e, f, 0, 2)?;
    let (sc, tc) = (&s.components[&0], &t.components[&0]);
    let candidates: Vec<&[usize]> = (0..e.count(0)).map(|x| f.hom(1, sc[x], tc[x])).collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; candidates.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        if nodes > bound {
            return Err(MorphismError::SpaceTooLarge { bound });
        }
        let comps: Vec<usize> = digits.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        let md = Modification {
            s: s.clone(),
            t: t.clone(),
            components: BTreeMap::from([(0, comps)]),
        };
        if check_modification(&md, ce, cf)?.passed() {
            out.push(md);
        }
        let mut k = digits.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < candidates[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// A 1-category viewed as a 2-category whose only 2-cells are identities.
pub fn promote_locally_discrete(c: &CategoryStructure) -> Result<CategoryStructure, MorphismError> {
    let g = c.graph();
    if g.n() != 1 {
        return Err(MorphismError::DimensionMismatch {
            domain: g.n(),
            codomain: 1,
        });
    }
    let mut raw = g.to_raw();
    raw.n = 2;
    raw.src.push(Vec::new());
    raw.tgt.push(Vec::new());
    raw.idn.push(Vec::new());
    raw.meta.push(Vec::new());
    for a in 0..g.count(1) {
        raw.src[2].push(a);
        raw.tgt[2].push(a);
        raw.idn[1].push(a);
        let name = format!("id({})", g.name(cell(1, a)));
        raw.meta[3].push(crate::graph::CellMeta::new(name));
    }
    let h = validate_graph(raw).map_err(|r| MorphismError::NotACategory {
        index: 0,
        reason: r.to_string(),
    })?;
    let mut out = CategoryStructure::new(h.clone(), c.flags);
    for t in c.vtables().values() {
        out.set_vtable(t.clone())
            .expect("same cells below dimension 2");
    }
    let v0 = c.vtable(0);
    let mut v1 = CompTable::new(1);
    let mut h0 = HCompTable::new(0);
    for a in 0..g.count(1) {
        v1.insert_unchecked(a, a, a);
    }
    if let Some(v0) = v0 {
        for (&(a, b), &ab) in v0.entries() {
            h0.insert_unchecked(a, b, ab);
        }
    }
    out.set_vtable(v1).expect("identity composites");
    out.set_htable(h0)
        .expect("identities over composable pairs");
    Ok(out)
}

/// The category of categories over `cats`, with its cells indexed back to the
/// functors, transformations and modifications they stand for.
#[derive(Clone, Debug)]
pub struct CatOfCats {
    pub structure: CategoryStructure,
    /// Categories actually used as objects (promoted at depth 3).
    pub objects: Vec<CategoryStructure>,
    /// Per 1-cell: (source object, target object, functor).
    pub functors: Vec<(usize, usize, GraphMorphism)>,
    /// Per 2-cell: (source 1-cell, target 1-cell, transformation).
    pub transformations: Vec<(usize, usize, Transformation)>,
    /// Per 3-cell: (source 2-cell, target 2-cell, modification). Empty at depth 2.
    pub modifications: Vec<(usize, usize, Modification)>,
}

/// Builds the `depth`-category whose objects are `cats`, whose 1-cells are all
/// functors between them, whose 2-cells are all level-0 transformations and,
/// at depth 3, whose 3-cells are all modifications. At depth 3 the inputs are
/// first promoted to locally discrete 2-categories.
pub fn build_cat_of_cats(
    cats: &[CategoryStructure],
    depth: usize,
    bound: u64,
) -> Result<CatOfCats, MorphismError> {
    if depth != 2 && depth != 3 {
        return Err(MorphismError::DimensionMismatch {
            domain: depth,
            codomain: 2,
        });
    }
    let required = AxiomFlags {
        global: true,
        unital: true,
        associative: true,
        ..Default::default()
    };
    let mut objects = Vec::with_capacity(cats.len());
    for (index, c) in cats.iter().enumerate() {
        if c.graph().n() != 1 || c.vtable(0).is_none() {
            return Err(MorphismError::NotACategory {
                index,
                reason: "expected a 1-category with a level 0 table".into(),
            });
        }
        let mut probe = c.clone();
        probe.flags = required;
        let report = check_category(&probe);
        if !report.passed() {
            let failed: Vec<_> = report.failures().map(|r| r.axiom.clone()).collect();
            return Err(MorphismError::NotACategory {
                index,
                reason: format!("fails {}", failed.join(", ")),
            });
        }
        objects.push(if depth == 3 {
            promote_locally_discrete(c)?
        } else {
            c.clone()
        });
    }

    let mut raw = RawGraph::new(depth, 2);
    for p in 0..objects.len() {
        raw.add_object(Some(&format!("C{p}")));
    }
    // 1-cells
    let mut functors: Vec<(usize, usize, GraphMorphism)> = Vec::new();
    let mut functor_index: HashMap<(usize, usize, GraphMorphism), usize> = HashMap::new();
    for (p, o) in objects.iter().enumerate() {
        functors.push((p, p, GraphMorphism::identity(o.graph())));
    }
    for p in 0..objects.len() {
        for q in 0..objects.len() {
            for m in enumerate_functors(&objects[p], &objects[q], bound)? {
                if p == q && m.comps.is_identity() {
                    continue;
                }
                let k = functors.len();
                raw.add_cell(1, p, q, Some(&format!("F{p}.{q}.{k}")));
                functors.push((p, q, m));
            }
        }
    }
    // add_object created identity 1-cells first, in object order
    let mut one_cells = vec![0usize; functors.len()];
    for (p, slot) in one_cells.iter_mut().enumerate().take(objects.len()) {
        *slot = raw.idn[0][p];
    }
    for (k, slot) in one_cells.iter_mut().enumerate().skip(objects.len()) {
        *slot = objects.len() + (k - objects.len());
    }
    let mut cell_to_functor = vec![0usize; functors.len()];
    for (k, &c) in one_cells.iter().enumerate() {
        cell_to_functor[c] = k;
        functor_index.insert(functors[k].clone(), c);
    }
    let functors: Vec<(usize, usize, GraphMorphism)> = cell_to_functor
        .iter()
        .map(|&k| functors[k].clone())
        .collect();

    // 2-cells
    let mut transformations: Vec<Option<(usize, usize, Transformation)>> = vec![None; raw.count(2)];
    for (c, (p, _, m)) in functors.iter().enumerate() {
        let id = raw.idn[1][c];
        transformations[id] = Some((
            c,
            c,
            Transformation::identity(m, objects[*p].graph(), objects[functors[c].1].graph(), &[0]),
        ));
    }
    for (a, (p, q, fm)) in functors.iter().enumerate() {
        for (b, (p2, q2, gm)) in functors.iter().enumerate() {
            if (p, q) != (p2, q2) {
                continue;
            }
            for tr in enumerate_transformations(fm, gm, &objects[*p], &objects[*q], bound)? {
                let identity = a == b
                    && tr.components[&0]
                        .iter()
                        .enumerate()
                        .all(|(x, &t)| t == objects[*q].graph().idn_of(0, fm.get(0, x)));
                if identity {
                    continue;
                }
                let c = raw.add_cell(
                    2,
                    a,
                    b,
                    Some(&format!("T{a}.{b}.{}", transformations.len())),
                );
                transformations.resize(c + 1, None);
                transformations[c] = Some((a, b, tr));
            }
        }
    }
    // identity 3-cells were appended by add_cell for depth 3; keep the vector aligned
    let transformations: Vec<(usize, usize, Transformation)> = transformations
        .into_iter()
        .map(|t| t.expect("every 2-cell is a transformation"))
        .collect();
    let trans_index: HashMap<(usize, usize, Vec<usize>), usize> = transformations
        .iter()
        .enumerate()
        .map(|(c, (a, b, t))| ((*a, *b, t.components[&0].clone()), c))
        .collect();

    // 3-cells
    let mut modifications: Vec<Option<(usize, usize, Modification)>> = Vec::new();
    if depth == 3 {
        modifications = vec![None; raw.count(3)];
        for (c, (a, _, t)) in transformations.iter().enumerate() {
            let fq = objects[functors[*a].1].graph();
            let comps = t.components[&0]
                .iter()
                .map(|&tx| fq.idn_of(1, tx))
                .collect();
            modifications[raw.idn[2][c]] = Some((
                c,
                c,
                Modification {
                    s: t.clone(),
                    t: t.clone(),
                    components: BTreeMap::from([(0, comps)]),
                },
            ));
        }
        for (s_cell, (a, b, s)) in transformations.iter().enumerate() {
            for (t_cell, (a2, b2, t)) in transformations.iter().enumerate() {
                if (a, b) != (a2, b2) {
                    continue;
                }
                let (p, q) = (functors[*a].0, functors[*a].1);
                for md in enumerate_modifications(s, t, &objects[p], &objects[q], bound)? {
                    let fq = objects[q].graph();
                    let identity = s_cell == t_cell
                        && md.components[&0]
                            .iter()
                            .zip(&s.components[&0])
                            .all(|(&m, &sx)| m == fq.idn_of(1, sx));
                    if identity {
                        continue;
                    }
                    let c = raw.add_cell(
                        3,
                        s_cell,
                        t_cell,
                        Some(&format!("M{s_cell}.{t_cell}.{}", modifications.len())),
                    );
                    modifications.resize(c + 1, None);
                    modifications[c] = Some((s_cell, t_cell, md));
                }
            }
        }
    }
    let modifications: Vec<(usize, usize, Modification)> = modifications
        .into_iter()
        .map(|m| m.expect("every 3-cell is a modification"))
        .collect();

    let graph = validate_graph(raw).map_err(|r| MorphismError::NotClosed(r.to_string()))?;
    let flags = AxiomFlags {
        global: true,
        unital: true,
        associative: true,
        interchange: true,
        groupoid: false,
    };
    let mut s = CategoryStructure::new(graph.clone(), flags);

    let mut v0 = CompTable::new(0);
    for (a, b) in graph.composable_pairs(0) {
        let (p, _, fm) = &functors[a];
        let (_, r, gm) = &functors[b];
        let key = (*p, *r, fm.then(gm));
        let c = *functor_index
            .get(&key)
            .ok_or_else(|| MorphismError::NotClosed(format!("{a};{b} at level 0")))?;
        v0.insert_unchecked(a, b, c);
    }
    s.set_vtable(v0).expect("keys from the graph");

    let mut v1 = CompTable::new(1);
    for (al, be) in graph.composable_pairs(1) {
        let (f_cell, _, ta) = &transformations[al];
        let (_, h_cell, tb) = &transformations[be];
        let q = functors[*f_cell].1;
        let comps = ta.components[&0]
            .iter()
            .zip(&tb.components[&0])
            .map(|(&x, &y)| vget(&objects[q], 0, x, y))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| MorphismError::NotClosed(format!("{al};{be} at level 1")))?;
        let c = *trans_index
            .get(&(*f_cell, *h_cell, comps))
            .ok_or_else(|| MorphismError::NotClosed(format!("{al};{be} at level 1")))?;
        v1.insert_unchecked(al, be, c);
    }
    s.set_vtable(v1).expect("keys from the graph");

    let mut h0 = HCompTable::new(0);
    for (al, be) in graph.horizontal_pairs(0) {
        let (f_cell, g_cell, ta) = &transformations[al];
        let (f2_cell, g2_cell, tb) = &transformations[be];
        let p = functors[*f_cell].0;
        let r = functors[*f2_cell].1;
        let (f2, g) = (&functors[*f2_cell].2, &functors[*g_cell].2);
        let pg = objects[p].graph();
        let comps = (0..pg.count(0))
            .map(|x| {
                vget(
                    &objects[r],
                    0,
                    f2.get(1, ta.components[&0][x]),
                    tb.components[&0][g.get(0, x)],
                )
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| MorphismError::NotClosed(format!("{al}*{be} at level 0")))?;
        let fc = functor_index[&(p, r, functors[*f_cell].2.then(f2))];
        let gc = functor_index[&(p, r, g.then(&functors[*g2_cell].2))];
        let c = *trans_index
            .get(&(fc, gc, comps))
            .ok_or_else(|| MorphismError::NotClosed(format!("{al}*{be} at level 0")))?;
        h0.insert_unchecked(al, be, c);
    }
    s.set_htable(h0).expect("keys from the graph");

    if depth == 3 {
        let mod_index: HashMap<(usize, usize, Vec<usize>), usize> = modifications
            .iter()
            .enumerate()
            .map(|(c, (a, b, m))| ((*a, *b, m.components[&0].clone()), c))
            .collect();
        let q_of = |m_cell: usize| functors[transformations[modifications[m_cell].0].0].1;
        let mut v2 = CompTable::new(2);
        for (mu, nu) in graph.composable_pairs(2) {
            let q = q_of(mu);
            let comps = modifications[mu].2.components[&0]
                .iter()
                .zip(&modifications[nu].2.components[&0])
                .map(|(&x, &y)| vget(&objects[q], 1, x, y))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| MorphismError::NotClosed(format!("{mu};{nu} at level 2")))?;
            let key = (modifications[mu].0, modifications[nu].1, comps);
            let c = *mod_index
                .get(&key)
                .ok_or_else(|| MorphismError::NotClosed(format!("{mu};{nu} at level 2")))?;
            v2.insert_unchecked(mu, nu, c);
        }
        s.set_vtable(v2).expect("keys from the graph");

        let mut h1 = HCompTable::new(1);
        for (mu, nu) in graph.horizontal_pairs(1) {
            let q = q_of(mu);
            let hq = objects[q].htable(0);
            let comps = modifications[mu].2.components[&0]
                .iter()
                .zip(&modifications[nu].2.components[&0])
                .map(|(&x, &y)| hq.and_then(|h| h.get(x, y)))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| MorphismError::NotClosed(format!("{mu}*{nu} at level 1")))?;
            let (s1, t1) = (modifications[mu].0, modifications[mu].1);
            let (s2, t2) = (modifications[nu].0, modifications[nu].1);
            let src = s.vtable(1).and_then(|v| v.get(s1, s2));
            let tgt = s.vtable(1).and_then(|v| v.get(t1, t2));
            let (Some(src), Some(tgt)) = (src, tgt) else {
                return Err(MorphismError::NotClosed(format!("{mu}*{nu} at level 1")));
            };
            let c = *mod_index
                .get(&(src, tgt, comps))
                .ok_or_else(|| MorphismError::NotClosed(format!("{mu}*{nu} at level 1")))?;
            h1.insert_unchecked(mu, nu, c);
        }
        s.set_htable(h1).expect("keys from the graph");
    }

    Ok(CatOfCats {
        structure: s,
        objects,
        functors,
        transformations,
        modifications,
    })
}
