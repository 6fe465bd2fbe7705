//! The JSON graph document, its canonical serialization, and the report
//! document emitted by the command line tool.
//!
//! Cell ids are strings in files and dense indices in memory. One document can
//! carry a graph, its tables, and morphisms, transformations and modifications
//! whose codomain is either the same graph or a second document.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::composition::{
    AxiomFlags, CategoryStructure, CocompTable, CompTable, CompositionError, HCompTable,
};
use crate::graph::{
    slot, validate_graph, CellId, CellMap, CellMeta, Dim, NGraph, RawGraph, ValidationReport,
};
use crate::morphisms::{GraphMorphism, Modification, Transformation, VarianceSpec};
use crate::report::{AxiomReport, Verdict};

pub const FORMAT_VERSION: &str = "1";
pub const REPORT_SCHEMA: &str = "ncat-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown format version {0:?}")]
    UnknownVersion(String),
    #[error("reference to unknown cell {0:?}")]
    DanglingReference(String),
    #[error("cell {id:?} has dimension {found}, expected {expected}")]
    WrongDimension {
        id: String,
        expected: Dim,
        found: Dim,
    },
    #[error("duplicate cell id {0:?}")]
    DuplicateId(String),
    #[error("cell {id:?} is missing its {field}")]
    MissingField { id: String, field: &'static str },
    #[error("cell {0:?} has no identity")]
    MissingIdentity(String),
    #[error("malformed entry in the {kind} table at level {level}: {reason}")]
    BadEntry {
        kind: &'static str,
        level: Dim,
        reason: String,
    },
    #[error("no {section} named {name:?}")]
    NoSuchSection { section: &'static str, name: String },
    #[error("{section} {name:?} has no component for {id:?}")]
    MissingComponent {
        section: &'static str,
        name: String,
        id: String,
    },
    #[error(transparent)]
    Invalid(#[from] ValidationReport),
    #[error(transparent)]
    Composition(#[from] CompositionError),
    #[error("{0}")]
    Io(String),
}

impl IoError {
    pub fn kind(&self) -> &'static str {
        match self {
            IoError::Syntax { .. } => "syntax",
            IoError::UnknownVersion(_) => "unknown-version",
            IoError::DanglingReference(_) => "dangling-reference",
            IoError::WrongDimension { .. } => "wrong-dimension",
            IoError::DuplicateId(_) => "duplicate-id",
            IoError::MissingField { .. } => "missing-field",
            IoError::MissingIdentity(_) => "missing-identity",
            IoError::BadEntry { .. } => "bad-entry",
            IoError::NoSuchSection { .. } => "no-such-section",
            IoError::MissingComponent { .. } => "missing-component",
            IoError::Invalid(_) => "invalid-graph",
            IoError::Composition(_) => "bad-table",
            IoError::Io(_) => "io",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub format_version: String,
    pub n: usize,
    pub tail: TailDoc,
    pub dims: Vec<DimDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub identities: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<TableDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<AxiomFlags>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transformations: Vec<TransformationDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modifications: Vec<ModificationDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailDoc {
    pub minus_one: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ids: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimDoc {
    pub dim: Dim,
    pub cells: Vec<CellDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub src: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tgt: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    Vertical,
    Horizontal,
    MinusOne,
    Co,
}

impl TableKind {
    fn name(self) -> &'static str {
        match self {
            TableKind::Vertical => "vertical",
            TableKind::Horizontal => "horizontal",
            TableKind::MinusOne => "minus-one",
            TableKind::Co => "co",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub level: Dim,
    pub kind: TableKind,
    /// `[a, b, result]`, or `[z, w, p, q]` for cooperations.
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contravariant: Vec<Dim>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub weakened: bool,
    /// Domain id -> codomain id. Tail cells and identities may be omitted.
    pub comps: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationDoc {
    pub name: String,
    pub f: String,
    pub g: String,
    /// Domain cell of dimension `i` -> codomain cell of dimension `i + 1`.
    pub comps: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModificationDoc {
    pub name: String,
    pub s: String,
    pub t: String,
    /// Domain cell of dimension `i` -> codomain cell of dimension `i + 2`.
    pub comps: BTreeMap<String, String>,
}

/// A resolved document.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub doc: GraphDocument,
    pub structure: CategoryStructure,
    pub cotables: Vec<CocompTable>,
}

impl Loaded {
    pub fn graph(&self) -> &NGraph {
        self.structure.graph()
    }
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k, sort_keys(v)))
                    .collect(),
            )
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// Pretty JSON with object keys sorted, newline-terminated.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = sort_keys(serde_json::to_value(value).expect("documents serialize"));
    let mut out = serde_json::to_string_pretty(&v).expect("values serialize");
    out.push('\n');
    out
}

fn name_of(g: &NGraph, dim: Dim, i: usize) -> String {
    g.name(CellId::new(dim, i)).to_owned()
}

impl GraphDocument {
    pub fn from_graph(g: &NGraph) -> Self {
        let tail_ids: Vec<String> = (0..g.count(-1)).map(|i| name_of(g, -1, i)).collect();
        let default_tail: Vec<String> = (0..g.count(-1)).map(|k| format!("bot{k}")).collect();
        let dims = (0..=g.top())
            .map(|d| DimDoc {
                dim: d,
                cells: (0..g.count(d))
                    .map(|i| {
                        let meta = g.meta(CellId::new(d, i));
                        CellDoc {
                            id: meta.id.clone(),
                            src: Some(name_of(g, d - 1, g.src_of(d, i))),
                            tgt: Some(name_of(g, d - 1, g.tgt_of(d, i))),
                            label: meta.label.clone(),
                        }
                    })
                    .collect(),
            })
            .collect();
        let identities = (0..g.top())
            .map(|d| {
                let map = (0..g.count(d))
                    .map(|i| (name_of(g, d, i), name_of(g, d + 1, g.idn_of(d, i))))
                    .collect();
                (d.to_string(), map)
            })
            .collect();
        GraphDocument {
            format_version: FORMAT_VERSION.into(),
            n: g.n(),
            tail: TailDoc {
                minus_one: g.count(-1),
                ids: if tail_ids == default_tail {
                    Vec::new()
                } else {
                    tail_ids
                },
            },
            dims,
            identities,
            tables: Vec::new(),
            flags: None,
            morphisms: Vec::new(),
            transformations: Vec::new(),
            modifications: Vec::new(),
        }
    }

    /// Graph, tables and flags of `s`.
    pub fn from_structure(s: &CategoryStructure) -> Self {
        let g = s.graph();
        let mut doc = GraphDocument::from_graph(g);
        let entries = |d: Dim, e: &BTreeMap<(usize, usize), usize>| -> Vec<Vec<String>> {
            e.iter()
                .map(|(&(a, b), &c)| vec![name_of(g, d, a), name_of(g, d, b), name_of(g, d, c)])
                .collect()
        };
        for (&level, t) in s.vtables() {
            doc.tables.push(TableDoc {
                level,
                kind: if level < 0 {
                    TableKind::MinusOne
                } else {
                    TableKind::Vertical
                },
                entries: entries(level + 1, t.entries()),
            });
        }
        for (&level, t) in s.htables() {
            doc.tables.push(TableDoc {
                level,
                kind: TableKind::Horizontal,
                entries: entries(level + HCompTable::SPAN, t.entries()),
            });
        }
        doc.flags = Some(s.flags);
        doc
    }

    pub fn push_cotable(&mut self, g: &NGraph, t: &CocompTable) {
        let d = t.level + 1;
        self.tables.push(TableDoc {
            level: t.level,
            kind: TableKind::Co,
            entries: t
                .entries
                .iter()
                .map(|(&z, &(w, p, q))| {
                    vec![
                        name_of(g, d, z),
                        name_of(g, t.level, w),
                        name_of(g, d, p),
                        name_of(g, d, q),
                    ]
                })
                .collect(),
        });
    }

    pub fn to_canonical_string(&self) -> String {
        canonical_json(self)
    }

    pub fn parse_str(text: &str) -> Result<Self, IoError> {
        let doc: GraphDocument = serde_json::from_str(text).map_err(|e| IoError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.format_version != FORMAT_VERSION {
            return Err(IoError::UnknownVersion(doc.format_version));
        }
        Ok(doc)
    }

    /// Referential integrity, then [`validate_graph`], then the tables.
    pub fn resolve(&self) -> Result<Loaded, IoError> {
        let names = Names::build(self)?;
        let n = self.n;
        let mut raw = RawGraph::new(n, self.tail.minus_one);
        for (k, id) in names.tail_ids.iter().enumerate() {
            raw.meta[0][k] = CellMeta::new(id.clone());
        }
        for d in 0..=n as Dim {
            for cell in names.cells_of(self, d) {
                let (src, tgt) = if d == 0 {
                    let s = cell
                        .src
                        .as_deref()
                        .map_or(Ok(raw.zero_type.0), |id| names.index(id, -1));
                    let t = cell
                        .tgt
                        .as_deref()
                        .map_or(Ok(raw.zero_type.1), |id| names.index(id, -1));
                    (s?, t?)
                } else {
                    let s = cell.src.as_deref().ok_or_else(|| IoError::MissingField {
                        id: cell.id.clone(),
                        field: "src",
                    })?;
                    let t = cell.tgt.as_deref().ok_or_else(|| IoError::MissingField {
                        id: cell.id.clone(),
                        field: "tgt",
                    })?;
                    (names.index(s, d - 1)?, names.index(t, d - 1)?)
                };
                raw.src[d as usize].push(src);
                raw.tgt[d as usize].push(tgt);
                raw.meta[slot(d)].push(CellMeta {
                    id: cell.id.clone(),
                    label: cell.label.clone(),
                });
            }
        }
        for d in 0..n as Dim {
            let map = self.identities.get(&d.to_string());
            for cell in names.cells_of(self, d) {
                let up = map
                    .and_then(|m| m.get(&cell.id))
                    .ok_or_else(|| IoError::MissingIdentity(cell.id.clone()))?;
                raw.idn[d as usize].push(names.index(up, d + 1)?);
            }
        }
        let graph = validate_graph(raw)?;
        let mut structure = CategoryStructure::new(graph.clone(), self.flags.unwrap_or_default());
        let mut cotables = Vec::new();
        for t in &self.tables {
            let bad = |reason: String| IoError::BadEntry {
                kind: t.kind.name(),
                level: t.level,
                reason,
            };
            match t.kind {
                TableKind::Vertical | TableKind::MinusOne => {
                    if (t.kind == TableKind::MinusOne) != (t.level == -1) {
                        return Err(bad("level -1 tables must have kind minus-one".into()));
                    }
                    CategoryStructure::vertical_level_ok(&graph, t.level)?;
                    let d = t.level + 1;
                    let mut table = CompTable::new(t.level);
                    for e in &t.entries {
                        let [a, b, c] = e.as_slice() else {
                            return Err(bad(format!("expected 3 ids, found {}", e.len())));
                        };
                        table.insert(
                            &graph,
                            names.index(a, d)?,
                            names.index(b, d)?,
                            names.index(c, d)?,
                        )?;
                    }
                    structure.set_vtable(table)?;
                }
                TableKind::Horizontal => {
                    CategoryStructure::horizontal_level_ok(&graph, t.level)?;
                    let d = t.level + HCompTable::SPAN;
                    let mut table = HCompTable::new(t.level);
                    for e in &t.entries {
                        let [a, b, c] = e.as_slice() else {
                            return Err(bad(format!("expected 3 ids, found {}", e.len())));
                        };
                        table.insert(
                            &graph,
                            names.index(a, d)?,
                            names.index(b, d)?,
                            names.index(c, d)?,
                        )?;
                    }
                    structure.set_htable(table)?;
                }
                TableKind::Co => {
                    let d = t.level + 1;
                    let mut table = CocompTable {
                        level: t.level,
                        entries: BTreeMap::new(),
                    };
                    for e in &t.entries {
                        let [z, w, p, q] = e.as_slice() else {
                            return Err(bad(format!("expected 4 ids, found {}", e.len())));
                        };
                        table.entries.insert(
                            names.index(z, d)?,
                            (
                                names.index(w, t.level)?,
                                names.index(p, d)?,
                                names.index(q, d)?,
                            ),
                        );
                    }
                    cotables.push(table);
                }
            }
        }
        Ok(Loaded {
            doc: self.clone(),
            structure,
            cotables,
        })
    }

    pub fn morphism(&self, name: &str) -> Result<&MorphismDoc, IoError> {
        self.morphisms
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| IoError::NoSuchSection {
                section: "morphism",
                name: name.into(),
            })
    }

    pub fn transformation(&self, name: &str) -> Result<&TransformationDoc, IoError> {
        self.transformations
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| IoError::NoSuchSection {
                section: "transformation",
                name: name.into(),
            })
    }

    pub fn modification(&self, name: &str) -> Result<&ModificationDoc, IoError> {
        self.modifications
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| IoError::NoSuchSection {
                section: "modification",
                name: name.into(),
            })
    }
}

/// Id lookup for a document being resolved.
struct Names {
    tail_ids: Vec<String>,
    ids: HashMap<String, CellId>,
}

impl Names {
    fn build(doc: &GraphDocument) -> Result<Self, IoError> {
        let tail_ids: Vec<String> = if doc.tail.ids.is_empty() {
            (0..doc.tail.minus_one).map(|k| format!("bot{k}")).collect()
        } else {
            doc.tail.ids.clone()
        };
        let mut names = Names {
            tail_ids: Vec::new(),
            ids: HashMap::new(),
        };
        for (k, id) in tail_ids.iter().enumerate() {
            names.register(id, CellId::new(-1, k))?;
        }
        names.tail_ids = tail_ids;
        for d in 0..=doc.n as Dim {
            for (i, cell) in names.cells_of(doc, d).enumerate() {
                let id = cell.id.clone();
                names.register(&id, CellId::new(d, i))?;
            }
        }
        Ok(names)
    }

    fn register(&mut self, id: &str, cell: CellId) -> Result<(), IoError> {
        if self.ids.insert(id.to_owned(), cell).is_some() {
            return Err(IoError::DuplicateId(id.to_owned()));
        }
        Ok(())
    }

    fn cells_of<'d>(&self, doc: &'d GraphDocument, d: Dim) -> impl Iterator<Item = &'d CellDoc> {
        doc.dims
            .iter()
            .filter(move |x| x.dim == d)
            .flat_map(|x| x.cells.iter())
    }

    fn index(&self, id: &str, dim: Dim) -> Result<usize, IoError> {
        let cell = self
            .ids
            .get(id)
            .ok_or_else(|| IoError::DanglingReference(id.to_owned()))?;
        if cell.dim != dim {
            return Err(IoError::WrongDimension {
                id: id.to_owned(),
                expected: dim,
                found: cell.dim,
            });
        }
        Ok(cell.index)
    }
}

fn lookup(g: &NGraph, id: &str) -> Result<CellId, IoError> {
    g.find(id)
        .ok_or_else(|| IoError::DanglingReference(id.to_owned()))
}

fn lookup_dim(g: &NGraph, id: &str, dim: Dim) -> Result<usize, IoError> {
    let c = lookup(g, id)?;
    if c.dim != dim {
        return Err(IoError::WrongDimension {
            id: id.to_owned(),
            expected: dim,
            found: c.dim,
        });
    }
    Ok(c.index)
}

/// Components from `doc`. Omitted tail cells map to themselves and omitted
/// identities to the identity of the image.
pub fn resolve_morphism(
    doc: &MorphismDoc,
    dom: &NGraph,
    cod: &NGraph,
) -> Result<(GraphMorphism, VarianceSpec), IoError> {
    let mut given: HashMap<CellId, usize> = HashMap::new();
    for (k, v) in &doc.comps {
        let c = lookup(dom, k)?;
        given.insert(c, lookup_dim(cod, v, c.dim)?);
    }
    let mut slots: Vec<Vec<usize>> = Vec::with_capacity(dom.n() + 2);
    for d in -1..=dom.top() {
        let mut comps = Vec::with_capacity(dom.count(d));
        for x in 0..dom.count(d) {
            let c = CellId::new(d, x);
            let v = match given.get(&c) {
                Some(&v) => v,
                None if d == -1 && x < cod.count(-1) => x,
                None => match dom.identity_preimage(d, x) {
                    Some(p) if d - 1 < cod.top() => cod.idn_of(d - 1, slots[slot(d - 1)][p]),
                    _ => {
                        return Err(IoError::MissingComponent {
                            section: "morphism",
                            name: doc.name.clone(),
                            id: dom.name(c).to_owned(),
                        })
                    }
                },
            };
            comps.push(v);
        }
        slots.push(comps);
    }
    let variance = VarianceSpec {
        contravariant_levels: doc.contravariant.iter().copied().collect(),
        weakened: doc.weakened,
    };
    Ok((
        GraphMorphism {
            comps: CellMap { slots },
        },
        variance,
    ))
}

fn resolve_components(
    section: &'static str,
    name: &str,
    comps: &BTreeMap<String, String>,
    lift: Dim,
    dom: &NGraph,
    cod: &NGraph,
) -> Result<BTreeMap<Dim, Vec<usize>>, IoError> {
    let mut by_level: BTreeMap<Dim, BTreeMap<usize, usize>> = BTreeMap::new();
    for (k, v) in comps {
        let c = lookup(dom, k)?;
        by_level
            .entry(c.dim)
            .or_default()
            .insert(c.index, lookup_dim(cod, v, c.dim + lift)?);
    }
    if by_level.is_empty() {
        by_level.insert(0, BTreeMap::new());
    }
    by_level
        .into_iter()
        .map(|(level, m)| {
            let comps = (0..dom.count(level))
                .map(|x| {
                    m.get(&x).copied().ok_or_else(|| IoError::MissingComponent {
                        section,
                        name: name.to_owned(),
                        id: dom.name(CellId::new(level, x)).to_owned(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((level, comps))
        })
        .collect()
}

/// `f` and `g` are looked up among `morphisms`.
pub fn resolve_transformation(
    doc: &TransformationDoc,
    source: &GraphDocument,
    dom: &NGraph,
    cod: &NGraph,
) -> Result<Transformation, IoError> {
    let (f, _) = resolve_morphism(source.morphism(&doc.f)?, dom, cod)?;
    let (g, _) = resolve_morphism(source.morphism(&doc.g)?, dom, cod)?;
    Ok(Transformation {
        f,
        g,
        components: resolve_components("transformation", &doc.name, &doc.comps, 1, dom, cod)?,
    })
}

pub fn resolve_modification(
    doc: &ModificationDoc,
    source: &GraphDocument,
    dom: &NGraph,
    cod: &NGraph,
) -> Result<Modification, IoError> {
    let s = resolve_transformation(source.transformation(&doc.s)?, source, dom, cod)?;
    let t = resolve_transformation(source.transformation(&doc.t)?, source, dom, cod)?;
    Ok(Modification {
        s,
        t,
        components: resolve_components("modification", &doc.name, &doc.comps, 2, dom, cod)?,
    })
}

pub fn morphism_doc(name: &str, dom: &NGraph, cod: &NGraph, m: &GraphMorphism) -> MorphismDoc {
    let mut comps = BTreeMap::new();
    for d in -1..=dom.top() {
        for x in 0..dom.count(d) {
            comps.insert(name_of(dom, d, x), name_of(cod, d, m.get(d, x)));
        }
    }
    MorphismDoc {
        name: name.into(),
        contravariant: Vec::new(),
        weakened: false,
        comps,
    }
}

fn components_doc(
    comps: &BTreeMap<Dim, Vec<usize>>,
    lift: Dim,
    dom: &NGraph,
    cod: &NGraph,
) -> BTreeMap<String, String> {
    comps
        .iter()
        .flat_map(|(&level, c)| {
            c.iter()
                .enumerate()
                .map(move |(x, &v)| (name_of(dom, level, x), name_of(cod, level + lift, v)))
        })
        .collect()
}

pub fn transformation_doc(
    name: &str,
    f: &str,
    g: &str,
    t: &Transformation,
    dom: &NGraph,
    cod: &NGraph,
) -> TransformationDoc {
    TransformationDoc {
        name: name.into(),
        f: f.into(),
        g: g.into(),
        comps: components_doc(&t.components, 1, dom, cod),
    }
}

pub fn modification_doc(
    name: &str,
    s: &str,
    t: &str,
    m: &Modification,
    dom: &NGraph,
    cod: &NGraph,
) -> ModificationDoc {
    ModificationDoc {
        name: name.into(),
        s: s.into(),
        t: t.into(),
        comps: components_doc(&m.components, 2, dom, cod),
    }
}

pub fn parse_path(path: &Path) -> Result<GraphDocument, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Io(format!("{}: {e}", path.display())))?;
    GraphDocument::parse_str(&text)
}

pub fn load_path(path: &Path) -> Result<Loaded, IoError> {
    parse_path(path)?.resolve()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Limit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleDoc {
    pub kind: String,
    pub cells: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub axiom: String,
    pub level: Option<Dim>,
    pub verdict: Verdict,
    pub counterexamples: Vec<CounterexampleDoc>,
    pub asymmetries: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub raw: u64,
    pub iso: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub command: String,
    pub status: Status,
    pub checks: Vec<CheckDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Counts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhausted: Option<bool>,
    pub timing_ms: u64,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorDoc>,
    /// Command-specific payload.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            schema: REPORT_SCHEMA.into(),
            command: command.into(),
            status: Status::Pass,
            checks: Vec::new(),
            counts: None,
            exhausted: None,
            timing_ms: 0,
            notes: Vec::new(),
            error: None,
            data: None,
        }
    }

    pub fn error(command: &str, kind: &str, message: impl Into<String>) -> Self {
        let mut r = ReportDocument::new(command);
        r.error = Some(ErrorDoc {
            kind: kind.into(),
            message: message.into(),
        });
        r.finish();
        r
    }

    /// Adds every result of `report`, naming counterexample cells in `dom` and
    /// expected/actual values in `cod`.
    pub fn add_checks(&mut self, report: &AxiomReport, dom: &NGraph, cod: &NGraph) {
        let dname = |c: &CellId| {
            if dom.contains(*c) {
                dom.name(*c).to_owned()
            } else {
                c.to_string()
            }
        };
        let cname = |c: &CellId| {
            if cod.contains(*c) {
                cod.name(*c).to_owned()
            } else {
                c.to_string()
            }
        };
        for r in &report.results {
            self.checks.push(CheckDoc {
                axiom: r.axiom.clone(),
                level: r.level,
                verdict: r.verdict,
                counterexamples: r
                    .counterexamples
                    .iter()
                    .map(|cx| CounterexampleDoc {
                        kind: cx.kind.clone(),
                        cells: cx.cells.iter().map(dname).collect(),
                        expected: cx.expected.as_ref().map(cname),
                        actual: cx.actual.as_ref().map(cname),
                    })
                    .collect(),
                asymmetries: r
                    .asymmetries
                    .iter()
                    .map(|t| t.iter().map(dname).collect())
                    .collect(),
                notes: r.notes.clone(),
            });
        }
    }

    /// Sets `status` from the rest of the document.
    pub fn finish(&mut self) {
        self.status = if self.error.is_some() {
            Status::Error
        } else if self.exhausted == Some(false) {
            Status::Limit
        } else if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
    }

    pub fn to_canonical_string(&self) -> String {
        canonical_json(self)
    }
}

/// 0 pass, 1 a check failed, 2 usage or input error, 3 a limit was hit.
pub fn exit_code(report: &ReportDocument) -> i32 {
    match report.status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Error => 2,
        Status::Limit => 3,
    }
}
