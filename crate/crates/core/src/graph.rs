//! Finite truncated globular carriers.
//!
//! An [`NGraph`] stores cells of dimensions `-1..=n`. Every cell of dimension
//! `d >= 0` has a source and a target of dimension `d - 1`, and every cell of
//! dimension `d < n` has an identity (section) of dimension `d + 1`. Cells above
//! `n` are degenerate copies of dimension `n` and are never stored.
//!
//! Cells are addressed positionally by [`CellId`]; the string ids and labels in
//! [`CellMeta`] are carried along for I/O only.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cell dimension. `-1` is the structure tail.
pub type Dim = i32;

/// Default bound on the number of automorphisms materialized by [`NGraph::automorphisms`].
pub const DEFAULT_AUTOMORPHISM_LIMIT: usize = 1 << 20;

#[inline]
pub(crate) fn slot(dim: Dim) -> usize {
    debug_assert!(dim >= -1);
    (dim + 1) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub dim: Dim,
    pub index: usize,
}

impl CellId {
    pub const fn new(dim: Dim, index: usize) -> Self {
        CellId { dim, index }
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dim, self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Source => f.write_str("source"),
            Side::Target => f.write_str("target"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellMeta {
    pub id: String,
    pub label: Option<String>,
}

impl CellMeta {
    pub fn new(id: impl Into<String>) -> Self {
        CellMeta {
            id: id.into(),
            label: None,
        }
    }
}

/// Unvalidated graph data. Build one by hand or with the `add_*` helpers and
/// hand it to [`validate_graph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGraph {
    pub n: usize,
    pub minus_one: usize,
    /// `src[d]` maps cells of dimension `d` (for `d` in `0..=n`) to dimension `d - 1`.
    pub src: Vec<Vec<usize>>,
    pub tgt: Vec<Vec<usize>>,
    /// `idn[d]` maps cells of dimension `d` (for `d` in `0..n`) to dimension `d + 1`.
    pub idn: Vec<Vec<usize>>,
    /// Metadata by slot (`dim + 1`), dimensions `-1..=n`.
    pub meta: Vec<Vec<CellMeta>>,
    /// Boundary assigned to objects created through [`RawGraph::add_object`].
    pub zero_type: (usize, usize),
}

impl RawGraph {
    /// Empty carrier with `minus_one` tail cells. With two tail cells, objects
    /// created by [`RawGraph::add_object`] get type `(0, 1)`.
    pub fn new(n: usize, minus_one: usize) -> Self {
        let mut meta = vec![Vec::new(); n + 2];
        meta[0] = (0..minus_one)
            .map(|k| CellMeta::new(format!("bot{k}")))
            .collect();
        RawGraph {
            n,
            minus_one,
            src: vec![Vec::new(); n + 1],
            tgt: vec![Vec::new(); n + 1],
            idn: vec![Vec::new(); n],
            meta,
            zero_type: if minus_one >= 2 { (0, 1) } else { (0, 0) },
        }
    }

    pub fn count(&self, dim: Dim) -> usize {
        if dim == -1 {
            self.minus_one
        } else {
            self.src.get(dim as usize).map_or(0, Vec::len)
        }
    }

    /// Adds a cell of dimension `dim >= 0` together with its tower of identities
    /// up to dimension `n`. Returns the index of the new cell.
    pub fn add_cell(&mut self, dim: Dim, src: usize, tgt: usize, id: Option<&str>) -> usize {
        assert!(
            dim >= 0 && dim as usize <= self.n,
            "dimension {dim} outside 0..={}",
            self.n
        );
        let d = dim as usize;
        let index = self.src[d].len();
        self.src[d].push(src);
        self.tgt[d].push(tgt);
        let name = id.map_or_else(|| format!("c{dim}_{index}"), str::to_owned);
        self.meta[slot(dim)].push(CellMeta::new(name.clone()));
        if d < self.n {
            let up = self.add_cell(dim + 1, index, index, Some(&format!("id({name})")));
            self.idn[d].push(up);
        }
        index
    }

    pub fn add_object(&mut self, id: Option<&str>) -> usize {
        let (s, t) = self.zero_type;
        self.add_cell(0, s, t, id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    BadTailSize {
        count: usize,
    },
    ShapeMismatch {
        what: String,
    },
    IndexOutOfRange {
        cell: CellId,
        map: String,
        value: usize,
    },
    SectionViolation {
        cell: CellId,
        side: Side,
    },
    ZeroTypeViolation {
        cell: CellId,
    },
    GlobularityViolation {
        cell: CellId,
    },
    DuplicateId {
        id: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadTailSize { count } => {
                write!(
                    f,
                    "BadTailSize: {count} cells in dimension -1 (expected 1 or 2)"
                )
            }
            Violation::ShapeMismatch { what } => write!(f, "ShapeMismatch: {what}"),
            Violation::IndexOutOfRange { cell, map, value } => {
                write!(f, "IndexOutOfRange: {map}({cell}) = {value}")
            }
            Violation::SectionViolation { cell, side } => {
                write!(
                    f,
                    "SectionViolation at {cell}: {side} of its identity is not the cell"
                )
            }
            Violation::ZeroTypeViolation { cell } => {
                write!(
                    f,
                    "ZeroTypeViolation at {cell}: type differs from the other 0-cells"
                )
            }
            Violation::GlobularityViolation { cell } => {
                write!(
                    f,
                    "GlobularityViolation at {cell}: source and target are not parallel"
                )
            }
            Violation::DuplicateId { id } => write!(f, "DuplicateId: {id:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid graph: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("cells {0} and {1} have different dimensions")]
    DimensionMismatch(CellId, CellId),
    #[error("level {level} is not allowed here")]
    BadLevel { level: Dim },
    #[error("no such cell {0}")]
    NoSuchCell(CellId),
    #[error("cell {0} is too high to extract a hom-graph")]
    DimensionTooHigh(CellId),
    #[error("cells {0} and {1} are not parallel")]
    TypeMismatch(CellId, CellId),
    #[error("more than {limit} automorphisms")]
    TooManyAutomorphisms { limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomSet {
    pub level: Dim,
    pub source: CellId,
    pub target: CellId,
    pub members: Vec<CellId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructureTail {
    pub minus_one_count: usize,
    /// `None` when the graph has no objects.
    pub zero_type: Option<(usize, usize)>,
}

/// Per-dimension cell maps, indexed by slot (`dim + 1`). Used for automorphisms
/// and graph morphisms alike.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellMap {
    pub slots: Vec<Vec<usize>>,
}

impl CellMap {
    pub fn identity(g: &NGraph) -> Self {
        CellMap {
            slots: (-1..=g.n() as Dim)
                .map(|d| (0..g.count(d)).collect())
                .collect(),
        }
    }

    pub fn get(&self, dim: Dim, index: usize) -> usize {
        self.slots[slot(dim)][index]
    }

    pub fn apply(&self, cell: CellId) -> CellId {
        CellId::new(cell.dim, self.get(cell.dim, cell.index))
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &CellMap) -> CellMap {
        CellMap {
            slots: self
                .slots
                .iter()
                .zip(&next.slots)
                .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
                .collect(),
        }
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> CellMap {
        CellMap {
            slots: self
                .slots
                .iter()
                .map(|m| {
                    let mut inv = vec![0; m.len()];
                    for (i, &j) in m.iter().enumerate() {
                        inv[j] = i;
                    }
                    inv
                })
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.slots
            .iter()
            .all(|m| m.iter().enumerate().all(|(i, &j)| i == j))
    }
}

/// A validated finite n-graph. Immutable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NGraph {
    n: usize,
    minus_one: usize,
    src: Vec<Vec<usize>>,
    tgt: Vec<Vec<usize>>,
    idn: Vec<Vec<usize>>,
    meta: Vec<Vec<CellMeta>>,
    /// For dimension `d` in `0..=n`: boundary pair in `d - 1` -> cells of dimension `d`.
    homs: Vec<BTreeMap<(usize, usize), Vec<usize>>>,
    /// For dimension `d` in `0..=n`: the cell of dimension `d - 1` this cell is the identity of.
    identity_of: Vec<Vec<Option<usize>>>,
}

/// Checks every carrier condition and returns the graph, or every violation found.
pub fn validate_graph(raw: RawGraph) -> Result<NGraph, ValidationReport> {
    let mut v = Vec::new();
    let n = raw.n;
    if raw.minus_one == 0 || raw.minus_one > 2 {
        v.push(Violation::BadTailSize {
            count: raw.minus_one,
        });
    }
    if n == 0 {
        v.push(Violation::ShapeMismatch {
            what: "truncation level n must be at least 1".into(),
        });
    }
    if raw.src.len() != n + 1
        || raw.tgt.len() != n + 1
        || raw.idn.len() != n
        || raw.meta.len() != n + 2
    {
        v.push(Violation::ShapeMismatch {
            what: format!("expected {} dimensions of cell data", n + 2),
        });
        return Err(ValidationReport { violations: v });
    }
    for d in 0..=n {
        if raw.src[d].len() != raw.tgt[d].len() {
            v.push(Violation::ShapeMismatch {
                what: format!(
                    "dimension {d}: {} sources but {} targets",
                    raw.src[d].len(),
                    raw.tgt[d].len()
                ),
            });
        }
        if d < n && raw.idn[d].len() != raw.src[d].len() {
            v.push(Violation::ShapeMismatch {
                what: format!(
                    "dimension {d}: {} identities for {} cells",
                    raw.idn[d].len(),
                    raw.src[d].len()
                ),
            });
        }
    }
    for d in -1..=n as Dim {
        if raw.meta[slot(d)].len() != raw.count(d) {
            v.push(Violation::ShapeMismatch {
                what: format!(
                    "dimension {d}: {} metadata records for {} cells",
                    raw.meta[slot(d)].len(),
                    raw.count(d)
                ),
            });
        }
    }
    if !v.is_empty() {
        return Err(ValidationReport { violations: v });
    }

    let mut seen = HashSet::new();
    for m in raw.meta.iter().flatten() {
        if !seen.insert(m.id.as_str()) {
            v.push(Violation::DuplicateId { id: m.id.clone() });
        }
    }

    // Range checks first; the remaining conditions index through these maps.
    for d in 0..=n {
        let below = raw.count(d as Dim - 1);
        for (x, (&s, &t)) in raw.src[d].iter().zip(&raw.tgt[d]).enumerate() {
            let cell = CellId::new(d as Dim, x);
            if s >= below {
                v.push(Violation::IndexOutOfRange {
                    cell,
                    map: "src".into(),
                    value: s,
                });
            }
            if t >= below {
                v.push(Violation::IndexOutOfRange {
                    cell,
                    map: "tgt".into(),
                    value: t,
                });
            }
        }
        if d < n {
            let above = raw.count(d as Dim + 1);
            for (x, &z) in raw.idn[d].iter().enumerate() {
                if z >= above {
                    v.push(Violation::IndexOutOfRange {
                        cell: CellId::new(d as Dim, x),
                        map: "idn".into(),
                        value: z,
                    });
                }
            }
        }
    }
    if !v.is_empty() {
        return Err(ValidationReport { violations: v });
    }

    // Section law.
    for d in 0..n {
        for (x, &z) in raw.idn[d].iter().enumerate() {
            let cell = CellId::new(d as Dim, x);
            if raw.src[d + 1][z] != x {
                v.push(Violation::SectionViolation {
                    cell,
                    side: Side::Source,
                });
            }
            if raw.tgt[d + 1][z] != x {
                v.push(Violation::SectionViolation {
                    cell,
                    side: Side::Target,
                });
            }
        }
    }
    // All objects share one type.
    if let (Some(&s0), Some(&t0)) = (raw.src[0].first(), raw.tgt[0].first()) {
        for x in 1..raw.src[0].len() {
            if raw.src[0][x] != s0 || raw.tgt[0][x] != t0 {
                v.push(Violation::ZeroTypeViolation {
                    cell: CellId::new(0, x),
                });
            }
        }
    }
    // Globularity from dimension 2 upwards.
    for d in 2..=n {
        for z in 0..raw.src[d].len() {
            let (a, b) = (raw.src[d][z], raw.tgt[d][z]);
            let below = d - 1;
            if raw.src[below][a] != raw.src[below][b] || raw.tgt[below][a] != raw.tgt[below][b] {
                v.push(Violation::GlobularityViolation {
                    cell: CellId::new(d as Dim, z),
                });
            }
        }
    }
    if !v.is_empty() {
        return Err(ValidationReport { violations: v });
    }

    let mut homs = Vec::with_capacity(n + 1);
    let mut identity_of = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let mut h: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for z in 0..raw.src[d].len() {
            h.entry((raw.src[d][z], raw.tgt[d][z])).or_default().push(z);
        }
        homs.push(h);
        let mut ident = vec![None; raw.src[d].len()];
        if d > 0 {
            for (x, &z) in raw.idn[d - 1].iter().enumerate() {
                ident[z] = Some(x);
            }
        }
        identity_of.push(ident);
    }

    Ok(NGraph {
        n,
        minus_one: raw.minus_one,
        src: raw.src,
        tgt: raw.tgt,
        idn: raw.idn,
        meta: raw.meta,
        homs,
        identity_of,
    })
}

impl NGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> Dim {
        self.n as Dim
    }

    pub fn count(&self, dim: Dim) -> usize {
        match dim {
            -1 => self.minus_one,
            d if d >= 0 && (d as usize) <= self.n => self.src[d as usize].len(),
            _ => 0,
        }
    }

    pub fn counts(&self) -> Vec<usize> {
        (-1..=self.top()).map(|d| self.count(d)).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.counts().iter().sum()
    }

    pub fn contains(&self, cell: CellId) -> bool {
        cell.dim >= -1 && cell.dim <= self.top() && cell.index < self.count(cell.dim)
    }

    pub fn cells(&self, dim: Dim) -> impl Iterator<Item = CellId> + '_ {
        (0..self.count(dim)).map(move |i| CellId::new(dim, i))
    }

    /// Source index of cell `x` of dimension `dim >= 0`.
    #[inline]
    pub fn src_of(&self, dim: Dim, x: usize) -> usize {
        self.src[dim as usize][x]
    }

    #[inline]
    pub fn tgt_of(&self, dim: Dim, x: usize) -> usize {
        self.tgt[dim as usize][x]
    }

    #[inline]
    pub fn boundary_of(&self, dim: Dim, x: usize, side: Side) -> usize {
        match side {
            Side::Source => self.src_of(dim, x),
            Side::Target => self.tgt_of(dim, x),
        }
    }

    /// Identity of cell `x` of dimension `dim < n`.
    #[inline]
    pub fn idn_of(&self, dim: Dim, x: usize) -> usize {
        self.idn[dim as usize][x]
    }

    /// If cell `z` of dimension `dim` is the identity of a lower cell, that cell.
    #[inline]
    pub fn identity_preimage(&self, dim: Dim, z: usize) -> Option<usize> {
        if dim < 0 {
            None
        } else {
            self.identity_of[dim as usize][z]
        }
    }

    /// Cells of dimension `dim + 1` with source `x` and target `y` (both of dimension `dim`).
    pub fn hom(&self, dim: Dim, x: usize, y: usize) -> &[usize] {
        let up = dim + 1;
        if up < 0 || up > self.top() {
            return &[];
        }
        self.homs[up as usize]
            .get(&(x, y))
            .map_or(&[], Vec::as_slice)
    }

    /// All non-empty hom-sets of cells of dimension `dim`, keyed by boundary pair.
    pub fn homs_of_dim(&self, dim: Dim) -> &BTreeMap<(usize, usize), Vec<usize>> {
        &self.homs[dim as usize]
    }

    pub fn meta(&self, cell: CellId) -> &CellMeta {
        &self.meta[slot(cell.dim)][cell.index]
    }

    pub fn name(&self, cell: CellId) -> &str {
        &self.meta(cell).id
    }

    pub fn find(&self, id: &str) -> Option<CellId> {
        (-1..=self.top()).find_map(|d| {
            self.meta[slot(d)]
                .iter()
                .position(|m| m.id == id)
                .map(|i| CellId::new(d, i))
        })
    }

    fn check(&self, cell: CellId) -> Result<(), GraphError> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(GraphError::NoSuchCell(cell))
        }
    }

    pub fn cell_type(&self, z: CellId) -> Result<(CellId, CellId), GraphError> {
        self.check(z)?;
        if z.dim < 0 {
            return Err(GraphError::BadLevel { level: z.dim });
        }
        let below = z.dim - 1;
        Ok((
            CellId::new(below, self.src_of(z.dim, z.index)),
            CellId::new(below, self.tgt_of(z.dim, z.index)),
        ))
    }

    fn same_type(&self, dim: Dim, x: usize, y: usize) -> bool {
        dim < 0
            || (self.src_of(dim, x) == self.src_of(dim, y)
                && self.tgt_of(dim, x) == self.tgt_of(dim, y))
    }

    pub fn hom_set(&self, x: CellId, y: CellId) -> Result<HomSet, GraphError> {
        self.check(x)?;
        self.check(y)?;
        if x.dim != y.dim {
            return Err(GraphError::DimensionMismatch(x, y));
        }
        if x.dim >= self.top() {
            return Err(GraphError::BadLevel { level: x.dim });
        }
        let members = if self.same_type(x.dim, x.index, y.index) {
            self.hom(x.dim, x.index, y.index)
                .iter()
                .map(|&z| CellId::new(x.dim + 1, z))
                .collect()
        } else {
            Vec::new()
        };
        Ok(HomSet {
            level: x.dim,
            source: x,
            target: y,
            members,
        })
    }

    /// Index-level form of [`NGraph::iterated_boundary`].
    pub fn boundary_at(&self, dim: Dim, mut z: usize, level: Dim, side: Side) -> usize {
        let mut d = dim;
        while d > level {
            z = self.boundary_of(d, z, side);
            d -= 1;
        }
        z
    }

    pub fn iterated_boundary(
        &self,
        z: CellId,
        level: Dim,
        side: Side,
    ) -> Result<CellId, GraphError> {
        self.check(z)?;
        if level < -1 || level >= z.dim {
            return Err(GraphError::BadLevel { level });
        }
        Ok(CellId::new(
            level,
            self.boundary_at(z.dim, z.index, level, side),
        ))
    }

    pub fn is_skeletal(&self) -> bool {
        (0..self.top()).all(|i| {
            let count = self.count(i);
            (0..count).all(|x| {
                (0..count).all(|y| !self.same_type(i, x, y) || self.hom(i, x, y).len() == 1)
            })
        })
    }

    pub fn is_monoidal_carrier(&self) -> bool {
        self.minus_one == 1
    }

    pub fn tail(&self) -> StructureTail {
        StructureTail {
            minus_one_count: self.minus_one,
            zero_type: self.src[0].first().map(|&s| (s, self.tgt[0][0])),
        }
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            n: self.n,
            minus_one: self.minus_one,
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            idn: self.idn.clone(),
            meta: self.meta.clone(),
            zero_type: self.tail().zero_type.unwrap_or(if self.minus_one >= 2 {
                (0, 1)
            } else {
                (0, 0)
            }),
        }
    }

    /// Swaps source and target at dimension `level` only.
    pub fn opposite(&self, level: Dim) -> Result<NGraph, GraphError> {
        if level < 1 || level > self.top() {
            return Err(GraphError::BadLevel { level });
        }
        let mut raw = self.to_raw();
        let d = level as usize;
        std::mem::swap(&mut raw.src[d], &mut raw.tgt[d]);
        Ok(validate_graph(raw).expect("reversing one dimension preserves every carrier condition"))
    }

    /// The carrier of the hom-category over the parallel pair `(x, y)`: its objects
    /// are the cells from `x` to `y`, and its higher cells are the cells above them.
    pub fn hom_graph(&self, x: CellId, y: CellId) -> Result<NGraph, GraphError> {
        self.check(x)?;
        self.check(y)?;
        if x.dim != y.dim {
            return Err(GraphError::DimensionMismatch(x, y));
        }
        if x.dim + 2 > self.top() {
            return Err(GraphError::DimensionTooHigh(x));
        }
        if !self.same_type(x.dim, x.index, y.index) {
            return Err(GraphError::TypeMismatch(x, y));
        }
        let base = x.dim + 1;
        let new_n = (self.top() - base) as usize;
        let tail = if x == y { 1 } else { 2 };
        let mut raw = RawGraph {
            n: new_n,
            minus_one: tail,
            src: vec![Vec::new(); new_n + 1],
            tgt: vec![Vec::new(); new_n + 1],
            idn: vec![Vec::new(); new_n],
            meta: vec![Vec::new(); new_n + 2],
            zero_type: (0, if x == y { 0 } else { 1 }),
        };
        raw.meta[0].push(self.meta(x).clone());
        if x != y {
            raw.meta[0].push(self.meta(y).clone());
        }
        // old index -> new index, per new dimension
        let mut maps: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(new_n + 1);
        let objects: BTreeMap<usize, usize> = self
            .hom(x.dim, x.index, y.index)
            .iter()
            .enumerate()
            .map(|(i, &z)| (z, i))
            .collect();
        for &z in objects.keys() {
            raw.src[0].push(0);
            raw.tgt[0].push(raw.zero_type.1);
            raw.meta[1].push(self.meta(CellId::new(base, z)).clone());
        }
        maps.push(objects);
        for k in 1..=new_n {
            let old_dim = base + k as Dim;
            let mut m = BTreeMap::new();
            for z in 0..self.count(old_dim) {
                let s = self.src_of(old_dim, z);
                if let Some(&ns) = maps[k - 1].get(&s) {
                    let nt = maps[k - 1][&self.tgt_of(old_dim, z)];
                    m.insert(z, raw.src[k].len());
                    raw.src[k].push(ns);
                    raw.tgt[k].push(nt);
                    raw.meta[k + 1].push(self.meta(CellId::new(old_dim, z)).clone());
                }
            }
            maps.push(m);
        }
        for k in 0..new_n {
            let old_dim = base + k as Dim;
            for &old in maps[k].keys() {
                raw.idn[k].push(maps[k + 1][&self.idn_of(old_dim, old)]);
            }
        }
        Ok(validate_graph(raw).expect("hom tower of a valid graph is a valid graph"))
    }

    /// All automorphisms fixing the tail, identity first, in lexicographic order.
    pub fn automorphisms(&self) -> Vec<CellMap> {
        self.automorphisms_bounded(usize::MAX)
            .expect("unbounded search cannot exceed its limit")
    }

    pub fn automorphisms_bounded(&self, limit: usize) -> Result<Vec<CellMap>, GraphError> {
        let mut out = Vec::new();
        let mut over = false;
        self.for_each_automorphism(|m| {
            if out.len() >= limit {
                over = true;
                return false;
            }
            out.push(m.clone());
            true
        });
        if over {
            Err(GraphError::TooManyAutomorphisms { limit })
        } else {
            Ok(out)
        }
    }

    /// Visits every automorphism; the visitor returns `false` to stop.
    pub fn for_each_automorphism(&self, mut visit: impl FnMut(&CellMap) -> bool) {
        let mut map = CellMap {
            slots: (-1..=self.top())
                .map(|d| vec![usize::MAX; self.count(d)])
                .collect(),
        };
        for k in 0..self.minus_one {
            map.slots[0][k] = k;
        }
        let order: Vec<CellId> = (0..=self.top()).flat_map(|d| self.cells(d)).collect();
        let mut used: Vec<Vec<bool>> = (-1..=self.top())
            .map(|d| vec![false; self.count(d)])
            .collect();
        self.automorphism_step(&order, 0, &mut map, &mut used, &mut visit);
    }

    fn automorphism_step(
        &self,
        order: &[CellId],
        pos: usize,
        map: &mut CellMap,
        used: &mut [Vec<bool>],
        visit: &mut impl FnMut(&CellMap) -> bool,
    ) -> bool {
        let Some(&cell) = order.get(pos) else {
            return visit(map);
        };
        let (d, c) = (cell.dim, cell.index);
        let s = slot(d);
        let candidates: Vec<usize> = match self.identity_preimage(d, c) {
            Some(x) => vec![self.idn_of(d - 1, map.get(d - 1, x))],
            None => {
                let (ms, mt) = (
                    map.get(d - 1, self.src_of(d, c)),
                    map.get(d - 1, self.tgt_of(d, c)),
                );
                self.homs[d as usize]
                    .get(&(ms, mt))
                    .map_or(&[][..], Vec::as_slice)
                    .iter()
                    .copied()
                    .filter(|&z| self.identity_preimage(d, z).is_none())
                    .collect()
            }
        };
        for z in candidates {
            if used[s][z] {
                continue;
            }
            used[s][z] = true;
            map.slots[s][c] = z;
            let go_on = self.automorphism_step(order, pos + 1, map, used, visit);
            used[s][z] = false;
            if !go_on {
                return false;
            }
        }
        map.slots[s][c] = usize::MAX;
        true
    }

    /// Vertically composable pairs at `level`: cells `(a, b)` of dimension
    /// `level + 1` with `tgt(a) = src(b)`, in lexicographic order.
    pub fn composable_pairs(&self, level: Dim) -> Vec<(usize, usize)> {
        let d = level + 1;
        if d < 0 || d > self.top() {
            return Vec::new();
        }
        let mut by_src: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for b in 0..self.count(d) {
            by_src.entry(self.src_of(d, b)).or_default().push(b);
        }
        let mut out = Vec::new();
        for a in 0..self.count(d) {
            if let Some(bs) = by_src.get(&self.tgt_of(d, a)) {
                out.extend(bs.iter().map(|&b| (a, b)));
            }
        }
        out
    }

    /// Horizontally composable pairs at `level`: cells `(a, b)` of dimension
    /// `level + 2` whose `level`-boundaries meet, in lexicographic order.
    pub fn horizontal_pairs(&self, level: Dim) -> Vec<(usize, usize)> {
        let d = level + 2;
        if level < -1 || d > self.top() {
            return Vec::new();
        }
        let mut by_src: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for b in 0..self.count(d) {
            by_src
                .entry(self.boundary_at(d, b, level, Side::Source))
                .or_default()
                .push(b);
        }
        let mut out = Vec::new();
        for a in 0..self.count(d) {
            if let Some(bs) = by_src.get(&self.boundary_at(d, a, level, Side::Target)) {
                out.extend(bs.iter().map(|&b| (a, b)));
            }
        }
        out
    }

    /// Dimensions that hold at least one cell.
    pub fn occupied_dims(&self) -> BTreeSet<Dim> {
        (-1..=self.top()).filter(|&d| self.count(d) > 0).collect()
    }
}
