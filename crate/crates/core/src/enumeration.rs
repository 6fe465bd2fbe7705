//! Enumeration of the composition structures an n-graph admits.
//!
//! [`enumerate_structures`] runs a depth-first search over table entries in a
//! fixed order (vertical levels ascending, then horizontal levels ascending;
//! keys lexicographic), pruning on typing, units, associativity and
//! interchange as soon as the entries involved are fixed. Structures are
//! classified up to the automorphism group of the graph by [`canonical_form`].
//! [`brute_force_oracle`] walks the unpruned assignment space and filters with
//! [`check_category`]; the two must agree.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::composition::{check_category, AxiomFlags, CategoryStructure, CompTable, HCompTable};
use crate::graph::{CellMap, Dim, NGraph, DEFAULT_AUTOMORPHISM_LIMIT};

pub const DEFAULT_MAX_NODES: u64 = 10_000_000;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(60);
pub const DEFAULT_ORACLE_BOUND: u128 = 1_000_000;
pub const DEFAULT_REPRESENTATIVE_CAP: usize = 1000;

const NOKEY: u32 = u32::MAX;
const UNSET: u32 = u32::MAX - 1;
const UNDEF: u32 = u32::MAX - 2;

#[inline]
fn is_val(x: u32) -> bool {
    x < UNDEF
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("level {level} unavailable: {reason}")]
    LevelUnavailable { level: Dim, reason: String },
    #[error("search space of {size} assignments exceeds the bound {bound}")]
    SpaceTooLarge { size: u128, bound: u128 },
    #[error("graph is not skeletal")]
    NotSkeletal,
    #[error("automorphism group has more than {limit} elements")]
    TooManyAutomorphisms { limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: u64,
    pub time_budget: Duration,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: DEFAULT_MAX_NODES,
            time_budget: DEFAULT_TIME_BUDGET,
        }
    }
}

impl Limits {
    pub const NODES_VAR: &'static str = "NCAT_MAX_NODES";
    pub const TIME_VAR: &'static str = "NCAT_TIME_BUDGET_SECS";

    /// Defaults, overridden by `NCAT_MAX_NODES` and `NCAT_TIME_BUDGET_SECS` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = std::env::var(Self::NODES_VAR)
            .ok()
            .and_then(|v| v.parse().ok())
        {
            limits.max_nodes = n;
        }
        if let Some(s) = std::env::var(Self::TIME_VAR)
            .ok()
            .and_then(|v| v.parse::<f64>().ok())
        {
            limits.time_budget = Duration::from_secs_f64(s);
        }
        limits
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumSpec {
    pub levels: BTreeSet<Dim>,
    pub flags: AxiomFlags,
    pub include_horizontal: bool,
    /// Only emit partial structures that no single extra entry can extend.
    pub maximal_only: bool,
    pub limits: Limits,
    pub representative_cap: usize,
    pub automorphism_limit: usize,
}

impl EnumSpec {
    /// Vertical tables at every level `0..n`.
    pub fn all_levels(g: &NGraph, flags: AxiomFlags) -> Self {
        EnumSpec {
            levels: (0..g.top()).collect(),
            flags,
            include_horizontal: false,
            maximal_only: false,
            limits: Limits::default(),
            representative_cap: DEFAULT_REPRESENTATIVE_CAP,
            automorphism_limit: DEFAULT_AUTOMORPHISM_LIMIT,
        }
    }

    pub fn levels(mut self, levels: impl IntoIterator<Item = Dim>) -> Self {
        self.levels = levels.into_iter().collect();
        self
    }

    pub fn horizontal(mut self, on: bool) -> Self {
        self.include_horizontal = on;
        self
    }

    /// Horizontal levels that get a table: `j` with both `j` and `j + 1` vertical.
    pub fn horizontal_levels(&self) -> Vec<Dim> {
        if !self.include_horizontal {
            return Vec::new();
        }
        self.levels
            .iter()
            .copied()
            .filter(|j| self.levels.contains(&(j + 1)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumResult {
    pub raw_count: u64,
    pub iso_count: usize,
    /// First structure found in each isomorphism class, in search order, up to the cap.
    pub representatives: Vec<CategoryStructure>,
    /// Canonical form -> number of structures with that form.
    pub canonical_forms: BTreeMap<Vec<u8>, u64>,
    pub exhausted: bool,
    pub nodes: u64,
    /// Number of search positions that had more than one candidate value.
    pub branch_points: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Vertical,
    Horizontal,
}

/// Fixed key layout for one table.
#[derive(Clone, Debug)]
struct TableShape {
    kind: Kind,
    level: Dim,
    /// Dimension of the operands and values.
    dim: Dim,
    m: usize,
    keys: Vec<(usize, usize)>,
    key_index: Vec<u32>,
    /// For each operand `a`: the `b` with `(a, b)` a key.
    rows: Vec<Vec<usize>>,
    /// For each operand `b`: the `a` with `(a, b)` a key.
    cols: Vec<Vec<usize>>,
}

impl TableShape {
    fn new(kind: Kind, level: Dim, dim: Dim, m: usize, keys: Vec<(usize, usize)>) -> Self {
        let mut key_index = vec![NOKEY; m * m];
        let mut rows = vec![Vec::new(); m];
        let mut cols = vec![Vec::new(); m];
        for (k, &(a, b)) in keys.iter().enumerate() {
            key_index[a * m + b] = k as u32;
            rows[a].push(b);
            cols[b].push(a);
        }
        TableShape {
            kind,
            level,
            dim,
            m,
            keys,
            key_index,
            rows,
            cols,
        }
    }

    #[inline]
    fn key(&self, a: usize, b: usize) -> u32 {
        self.key_index[a * self.m + b]
    }
}

#[derive(Clone, Debug)]
struct Shape {
    tables: Vec<TableShape>,
    vertical: BTreeMap<Dim, usize>,
}

impl Shape {
    fn build(g: &NGraph, vlevels: &BTreeSet<Dim>, hlevels: &[Dim]) -> Result<Shape, EnumError> {
        let mut tables = Vec::new();
        let mut vertical = BTreeMap::new();
        for &j in vlevels {
            CategoryStructure::vertical_level_ok(g, j).map_err(level_err(j))?;
            vertical.insert(j, tables.len());
            tables.push(TableShape::new(
                Kind::Vertical,
                j,
                j + 1,
                g.count(j + 1),
                g.composable_pairs(j),
            ));
        }
        for &j in hlevels {
            CategoryStructure::horizontal_level_ok(g, j).map_err(level_err(j))?;
            let d = j + HCompTable::SPAN;
            tables.push(TableShape::new(
                Kind::Horizontal,
                j,
                d,
                g.count(d),
                g.horizontal_pairs(j),
            ));
        }
        Ok(Shape { tables, vertical })
    }

    fn of_structure(s: &CategoryStructure) -> Shape {
        let g = s.graph();
        let v: BTreeSet<Dim> = s.vtables().keys().copied().collect();
        let h: Vec<Dim> = s.htables().keys().copied().collect();
        Shape::build(g, &v, &h).expect("levels of an existing structure are valid")
    }

    fn empty_values(&self) -> Vec<Vec<u32>> {
        self.tables
            .iter()
            .map(|t| vec![UNSET; t.keys.len()])
            .collect()
    }

    fn values_of(&self, s: &CategoryStructure) -> Vec<Vec<u32>> {
        self.tables
            .iter()
            .map(|t| {
                t.keys
                    .iter()
                    .map(|&(a, b)| {
                        let v = match t.kind {
                            Kind::Vertical => s.vtable(t.level).and_then(|x| x.get(a, b)),
                            Kind::Horizontal => s.htable(t.level).and_then(|x| x.get(a, b)),
                        };
                        v.map_or(UNDEF, |v| v as u32)
                    })
                    .collect()
            })
            .collect()
    }

    fn to_structure(&self, g: &NGraph, flags: AxiomFlags, vals: &[Vec<u32>]) -> CategoryStructure {
        let mut s = CategoryStructure::new(g.clone(), flags);
        for (t, vs) in self.tables.iter().zip(vals) {
            match t.kind {
                Kind::Vertical => {
                    let mut table = CompTable::new(t.level);
                    for (&(a, b), &v) in t.keys.iter().zip(vs) {
                        if is_val(v) {
                            table.insert_unchecked(a, b, v as usize);
                        }
                    }
                    s.set_vtable(table).expect("keys come from the graph");
                }
                Kind::Horizontal => {
                    let mut table = HCompTable::new(t.level);
                    for (&(a, b), &v) in t.keys.iter().zip(vs) {
                        if is_val(v) {
                            table.insert_unchecked(a, b, v as usize);
                        }
                    }
                    s.set_htable(table).expect("keys come from the graph");
                }
            }
        }
        s
    }
}

fn level_err(level: Dim) -> impl Fn(crate::composition::CompositionError) -> EnumError {
    move |e| EnumError::LevelUnavailable {
        level,
        reason: e.to_string(),
    }
}

/// Precomputed action of the automorphism group on table keys and values.
struct Canonizer {
    /// Per automorphism, per table: for each key `k`, the key whose value lands on `k`.
    pulled_keys: Vec<Vec<Vec<u32>>>,
    /// Per automorphism, per table: value map on the operand dimension.
    value_maps: Vec<Vec<Vec<u32>>>,
    header: Vec<u8>,
}

impl Canonizer {
    fn new(g: &NGraph, shape: &Shape, limit: usize) -> Result<Self, EnumError> {
        let auts = g
            .automorphisms_bounded(limit)
            .map_err(|_| EnumError::TooManyAutomorphisms { limit })?;
        let mut pulled_keys = Vec::with_capacity(auts.len());
        let mut value_maps = Vec::with_capacity(auts.len());
        for phi in &auts {
            let inv: CellMap = phi.inverse();
            let mut pk = Vec::with_capacity(shape.tables.len());
            let mut vm = Vec::with_capacity(shape.tables.len());
            for t in &shape.tables {
                pk.push(
                    t.keys
                        .iter()
                        .map(|&(a, b)| t.key(inv.get(t.dim, a), inv.get(t.dim, b)))
                        .collect(),
                );
                vm.push((0..t.m).map(|x| phi.get(t.dim, x) as u32).collect());
            }
            pulled_keys.push(pk);
            value_maps.push(vm);
        }
        let mut header = Vec::new();
        for t in &shape.tables {
            header.push(match t.kind {
                Kind::Vertical => b'v',
                Kind::Horizontal => b'h',
            });
            header.extend_from_slice(&t.level.to_be_bytes());
            header.extend_from_slice(&(t.keys.len() as u32).to_be_bytes());
        }
        Ok(Canonizer {
            pulled_keys,
            value_maps,
            header,
        })
    }

    fn encode(&self, vals: &[Vec<u32>], which: usize) -> Vec<u8> {
        let mut out = self.header.clone();
        for (t, vs) in vals.iter().enumerate() {
            let pk = &self.pulled_keys[which][t];
            let vm = &self.value_maps[which][t];
            for k in 0..vs.len() {
                let v = vs[pk[k] as usize];
                let w = if is_val(v) { vm[v as usize] } else { u32::MAX };
                out.extend_from_slice(&w.to_be_bytes());
            }
        }
        out
    }

    /// Lexicographically least encoding over the orbit.
    fn canonical(&self, vals: &[Vec<u32>]) -> Vec<u8> {
        (0..self.pulled_keys.len())
            .map(|i| self.encode(vals, i))
            .min()
            .expect("the identity is always an automorphism")
    }
}

/// Least serialization of `s` over the orbit of the automorphism group of its
/// graph. Equal outputs mean isomorphic structures over the same graph.
pub fn canonical_form(s: &CategoryStructure) -> Result<Vec<u8>, EnumError> {
    let shape = Shape::of_structure(s);
    let canon = Canonizer::new(s.graph(), &shape, DEFAULT_AUTOMORPHISM_LIMIT)?;
    Ok(canon.canonical(&shape.values_of(s)))
}

/// Serialization of `s` without any relabeling.
pub fn direct_form(s: &CategoryStructure) -> Vec<u8> {
    let shape = Shape::of_structure(s);
    let mut out = Vec::new();
    for t in &shape.tables {
        out.push(match t.kind {
            Kind::Vertical => b'v',
            Kind::Horizontal => b'h',
        });
        out.extend_from_slice(&t.level.to_be_bytes());
        out.extend_from_slice(&(t.keys.len() as u32).to_be_bytes());
    }
    for vs in shape.values_of(s) {
        for v in vs {
            let w = if is_val(v) { v } else { u32::MAX };
            out.extend_from_slice(&w.to_be_bytes());
        }
    }
    out
}

/// Accumulates leaves into an [`EnumResult`].
struct Collector<'a> {
    g: &'a NGraph,
    shape: &'a Shape,
    canon: Canonizer,
    flags: AxiomFlags,
    cap: usize,
    result: EnumResult,
}

impl<'a> Collector<'a> {
    fn new(g: &'a NGraph, shape: &'a Shape, spec: &EnumSpec) -> Result<Self, EnumError> {
        Ok(Collector {
            g,
            shape,
            canon: Canonizer::new(g, shape, spec.automorphism_limit)?,
            flags: spec.flags,
            cap: spec.representative_cap,
            result: EnumResult {
                raw_count: 0,
                iso_count: 0,
                representatives: Vec::new(),
                canonical_forms: BTreeMap::new(),
                exhausted: true,
                nodes: 0,
                branch_points: 0,
            },
        })
    }

    fn emit(&mut self, vals: &[Vec<u32>]) {
        self.result.raw_count += 1;
        let form = self.canon.canonical(vals);
        let slot = self.result.canonical_forms.entry(form).or_insert(0);
        if *slot == 0 {
            self.result.iso_count += 1;
            if self.result.representatives.len() < self.cap {
                self.result
                    .representatives
                    .push(self.shape.to_structure(self.g, self.flags, vals));
            }
        }
        *slot += 1;
    }
}

/// Typed candidates for a partial table entry, used by the maximality test.
fn typed_candidates(
    g: &NGraph,
    shape: &Shape,
    vals: &[Vec<u32>],
    t: usize,
    a: usize,
    b: usize,
) -> Vec<usize> {
    let ts = &shape.tables[t];
    match ts.kind {
        Kind::Vertical => {
            let d = ts.dim;
            g.hom(ts.level, g.src_of(d, a), g.tgt_of(d, b)).to_vec()
        }
        Kind::Horizontal => {
            let d = ts.dim;
            let Some(&vt) = shape.vertical.get(&ts.level) else {
                return Vec::new();
            };
            let v = &shape.tables[vt];
            let lookup = |x: usize, y: usize| {
                let k = v.key(x, y);
                if k == NOKEY {
                    UNDEF
                } else {
                    vals[vt][k as usize]
                }
            };
            let s = lookup(g.src_of(d, a), g.src_of(d, b));
            let tt = lookup(g.tgt_of(d, a), g.tgt_of(d, b));
            if is_val(s) && is_val(tt) {
                g.hom(d - 1, s as usize, tt as usize).to_vec()
            } else {
                Vec::new()
            }
        }
    }
}

/// True when no single undefined entry can be filled without breaking a flag.
fn is_maximal(g: &NGraph, shape: &Shape, flags: AxiomFlags, vals: &[Vec<u32>]) -> bool {
    let mut work = vals.to_vec();
    for t in 0..shape.tables.len() {
        for k in 0..shape.tables[t].keys.len() {
            if work[t][k] != UNDEF {
                continue;
            }
            let (a, b) = shape.tables[t].keys[k];
            for v in typed_candidates(g, shape, &work, t, a, b) {
                work[t][k] = v as u32;
                let ok = check_category(&shape.to_structure(g, flags, &work)).passed();
                work[t][k] = UNDEF;
                if ok {
                    return false;
                }
            }
        }
    }
    true
}

struct Search<'a> {
    g: &'a NGraph,
    shape: &'a Shape,
    flags: AxiomFlags,
    maximal_only: bool,
    vars: Vec<(usize, usize)>,
    vals: Vec<Vec<u32>>,
    limits: Limits,
    start: Instant,
    nodes: u64,
    branch_points: u64,
    stopped: bool,
}

impl<'a> Search<'a> {
    #[inline]
    fn get(&self, t: usize, a: usize, b: usize) -> u32 {
        let k = self.shape.tables[t].key(a, b);
        if k == NOKEY {
            NOKEY
        } else {
            self.vals[t][k as usize]
        }
    }

    fn domain(&self, t: usize, k: usize) -> Vec<u32> {
        let ts = &self.shape.tables[t];
        let (a, b) = ts.keys[k];
        let d = ts.dim;
        let g = self.g;
        let mut out: Vec<u32> = match ts.kind {
            Kind::Vertical => {
                let forced = if self.flags.unital && ts.level >= 0 {
                    if g.identity_preimage(d, a).is_some() {
                        Some(b)
                    } else if g.identity_preimage(d, b).is_some() {
                        Some(a)
                    } else {
                        None
                    }
                } else {
                    None
                };
                match forced {
                    Some(v) => vec![v as u32],
                    None => g
                        .hom(ts.level, g.src_of(d, a), g.tgt_of(d, b))
                        .iter()
                        .map(|&v| v as u32)
                        .collect(),
                }
            }
            Kind::Horizontal => {
                let vt = self.shape.vertical[&ts.level];
                let s = self.get(vt, g.src_of(d, a), g.src_of(d, b));
                let tt = self.get(vt, g.tgt_of(d, a), g.tgt_of(d, b));
                if is_val(s) && is_val(tt) {
                    g.hom(d - 1, s as usize, tt as usize)
                        .iter()
                        .map(|&v| v as u32)
                        .collect()
                } else {
                    Vec::new()
                }
            }
        };
        if !self.flags.global {
            out.push(UNDEF);
        }
        out
    }

    fn run(&mut self, pos: usize, leaf: &mut dyn FnMut(&[Vec<u32>])) {
        if self.stopped {
            return;
        }
        let Some(&(t, k)) = self.vars.get(pos) else {
            if self.leaf_ok() {
                leaf(&self.vals);
            }
            return;
        };
        let domain = self.domain(t, k);
        if domain.len() > 1 {
            self.branch_points += 1;
        }
        for v in domain {
            self.nodes += 1;
            if self.nodes > self.limits.max_nodes
                || (self.nodes.is_multiple_of(4096)
                    && self.start.elapsed() > self.limits.time_budget)
            {
                self.stopped = true;
                break;
            }
            self.vals[t][k] = v;
            if self.local_ok(t, k) {
                self.run(pos + 1, leaf);
            }
            if self.stopped {
                break;
            }
        }
        self.vals[t][k] = UNSET;
    }

    fn local_ok(&self, t: usize, k: usize) -> bool {
        let v = self.vals[t][k];
        if !is_val(v) {
            return true;
        }
        let ts = &self.shape.tables[t];
        let (p, q) = ts.keys[k];
        match ts.kind {
            Kind::Vertical => !self.flags.associative || self.assoc_ok(t, p, q, v),
            Kind::Horizontal => {
                if !self.flags.interchange {
                    return true;
                }
                match self.shape.vertical.get(&(ts.level + 1)) {
                    Some(&vt) => self.interchange_ok(t, vt, p, q, v),
                    None => true,
                }
            }
        }
    }

    /// Every triple whose four entries are now all fixed and defined.
    fn assoc_ok(&self, t: usize, p: usize, q: usize, v: u32) -> bool {
        let ts = &self.shape.tables[t];
        let get = |a: usize, b: usize| self.get(t, a, b);
        let same = |l: u32, r: u32| !(is_val(l) && is_val(r)) || l == r;
        let vv = v as usize;
        // (p, q) = (a, b)
        for &c in &ts.rows[q] {
            let e = get(q, c);
            if is_val(e) && !same(get(vv, c), get(p, e as usize)) {
                return false;
            }
        }
        // (p, q) = (b, c)
        for &a in &ts.cols[p] {
            let d = get(a, p);
            if is_val(d) && !same(get(d as usize, q), get(a, vv)) {
                return false;
            }
        }
        // (p, q) = (ab, c)
        for &b in &ts.cols[q] {
            let e = get(b, q);
            if !is_val(e) {
                continue;
            }
            for &a in &ts.cols[b] {
                if get(a, b) == p as u32 && !same(v, get(a, e as usize)) {
                    return false;
                }
            }
        }
        // (p, q) = (a, bc)
        for &b in &ts.rows[p] {
            let d = get(p, b);
            if !is_val(d) {
                continue;
            }
            for &c in &ts.rows[b] {
                if get(b, c) == q as u32 && !same(get(d as usize, c), v) {
                    return false;
                }
            }
        }
        true
    }

    /// Every middle-four quadruple whose horizontal entries are now all fixed.
    /// Vertical entries are always fixed before horizontal ones.
    fn interchange_ok(&self, h: usize, vt: usize, p: usize, q: usize, v: u32) -> bool {
        let vs = &self.shape.tables[vt];
        let hget = |a: usize, b: usize| self.get(h, a, b);
        let vget = |a: usize, b: usize| self.get(vt, a, b);
        let agree = |l: u32, h1: u32, h2: u32| {
            if !(is_val(l) && is_val(h1) && is_val(h2)) {
                return true;
            }
            let r = vget(h1 as usize, h2 as usize);
            !is_val(r) || r == l
        };
        // (p, q) = (a, b)
        for &a2 in &vs.rows[p] {
            let gamma = vget(p, a2);
            if !is_val(gamma) {
                continue;
            }
            for &b2 in &vs.rows[q] {
                let delta = vget(q, b2);
                if !is_val(delta) {
                    continue;
                }
                let h2 = hget(a2, b2);
                let l = hget(gamma as usize, delta as usize);
                if !agree(l, v, h2) {
                    return false;
                }
            }
        }
        // (p, q) = (a', b')
        for &a in &vs.cols[p] {
            let gamma = vget(a, p);
            if !is_val(gamma) {
                continue;
            }
            for &b in &vs.cols[q] {
                let delta = vget(b, q);
                if !is_val(delta) {
                    continue;
                }
                let h1 = hget(a, b);
                let l = hget(gamma as usize, delta as usize);
                if !agree(l, h1, v) {
                    return false;
                }
            }
        }
        // (p, q) = (v(a, a'), v(b, b'))
        let with_value = |target: usize| -> Vec<(usize, usize)> {
            vs.keys
                .iter()
                .enumerate()
                .filter(|&(k, _)| self.vals[vt][k] == target as u32)
                .map(|(_, &key)| key)
                .collect()
        };
        let lefts = with_value(p);
        if lefts.is_empty() {
            return true;
        }
        let rights = with_value(q);
        for &(a, a2) in &lefts {
            for &(b, b2) in &rights {
                if !agree(v, hget(a, b), hget(a2, b2)) {
                    return false;
                }
            }
        }
        true
    }

    fn leaf_ok(&self) -> bool {
        if self.flags.groupoid && !self.groupoid_ok() {
            return false;
        }
        !self.maximal_only || is_maximal(self.g, self.shape, self.flags, &self.vals)
    }

    fn groupoid_ok(&self) -> bool {
        let g = self.g;
        for (&level, &t) in &self.shape.vertical {
            if level < 0 {
                continue;
            }
            let d = level + 1;
            for a in 0..g.count(d) {
                let (x, y) = (g.src_of(d, a), g.tgt_of(d, a));
                let (ix, iy) = (g.idn_of(level, x) as u32, g.idn_of(level, y) as u32);
                for (l, want) in [
                    (self.get(t, ix as usize, a), a),
                    (self.get(t, a, iy as usize), a),
                ] {
                    if l == UNDEF && self.flags.global || is_val(l) && l as usize != want {
                        return false;
                    }
                }
                let has_inverse = g
                    .hom(level, y, x)
                    .iter()
                    .any(|&b| self.get(t, a, b) == ix && self.get(t, b, a) == iy);
                if !has_inverse {
                    return false;
                }
            }
        }
        true
    }
}

fn shape_for(g: &NGraph, spec: &EnumSpec) -> Result<Shape, EnumError> {
    Shape::build(g, &spec.levels, &spec.horizontal_levels())
}

/// Enumerates every table assignment on `g` satisfying `spec.flags`.
///
/// Hitting a limit is not an error: the partial result comes back with
/// `exhausted == false`.
pub fn enumerate_structures(g: &NGraph, spec: &EnumSpec) -> Result<EnumResult, EnumError> {
    let shape = shape_for(g, spec)?;
    let mut collector = Collector::new(g, &shape, spec)?;
    let vars = shape
        .tables
        .iter()
        .enumerate()
        .flat_map(|(t, ts)| (0..ts.keys.len()).map(move |k| (t, k)))
        .collect();
    let mut search = Search {
        g,
        shape: &shape,
        flags: spec.flags,
        maximal_only: spec.maximal_only && !spec.flags.global,
        vars,
        vals: shape.empty_values(),
        limits: spec.limits,
        start: Instant::now(),
        nodes: 0,
        branch_points: 0,
        stopped: false,
    };
    search.run(0, &mut |vals| collector.emit(vals));
    let mut result = collector.result;
    result.exhausted = !search.stopped;
    result.nodes = search.nodes;
    result.branch_points = search.branch_points;
    Ok(result)
}

/// Size of the unpruned assignment space the oracle walks.
pub fn oracle_space(g: &NGraph, spec: &EnumSpec) -> Result<u128, EnumError> {
    let shape = shape_for(g, spec)?;
    let extra = u128::from(!spec.flags.global);
    let mut size: u128 = 1;
    for t in &shape.tables {
        let per = t.m as u128 + extra;
        for _ in 0..t.keys.len() {
            size = size.saturating_mul(per);
        }
    }
    Ok(size)
}

/// Walks every assignment of every key to every cell of the right dimension
/// (or to "undefined" in partial mode) and keeps those [`check_category`]
/// accepts.
pub fn brute_force_oracle(
    g: &NGraph,
    spec: &EnumSpec,
    bound: u128,
) -> Result<EnumResult, EnumError> {
    let size = oracle_space(g, spec)?;
    if size > bound {
        return Err(EnumError::SpaceTooLarge { size, bound });
    }
    let shape = shape_for(g, spec)?;
    let mut collector = Collector::new(g, &shape, spec)?;
    let partial = !spec.flags.global;
    let slots: Vec<(usize, usize)> = shape
        .tables
        .iter()
        .enumerate()
        .flat_map(|(t, ts)| (0..ts.keys.len()).map(move |k| (t, k)))
        .collect();
    let radix: Vec<u32> = slots
        .iter()
        .map(|&(t, _)| shape.tables[t].m as u32 + u32::from(partial))
        .collect();
    let mut digits = vec![0u32; slots.len()];
    let mut vals = shape.empty_values();
    let mut visited = 0u64;
    loop {
        if radix.iter().all(|&r| r > 0) {
            for (i, &(t, k)) in slots.iter().enumerate() {
                let m = shape.tables[t].m as u32;
                vals[t][k] = if digits[i] == m { UNDEF } else { digits[i] };
            }
            visited += 1;
            let s = shape.to_structure(g, spec.flags, &vals);
            if check_category(&s).passed()
                && (!partial || !spec.maximal_only || is_maximal(g, &shape, spec.flags, &vals))
            {
                collector.emit(&vals);
            }
        }
        // odometer, last slot fastest
        let mut i = slots.len();
        loop {
            if i == 0 {
                let mut result = collector.result;
                result.nodes = visited;
                return Ok(result);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < radix[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletalCertificate {
    pub unique: bool,
    pub raw_count: u64,
    pub branch_points: u64,
    pub structure: Option<CategoryStructure>,
}

/// Runs the `{global}` enumeration on a skeletal graph and reports whether
/// exactly one structure exists.
pub fn verify_skeletal_uniqueness(g: &NGraph) -> Result<SkeletalCertificate, EnumError> {
    if !g.is_skeletal() {
        return Err(EnumError::NotSkeletal);
    }
    let flags = AxiomFlags {
        global: true,
        ..Default::default()
    };
    let result = enumerate_structures(g, &EnumSpec::all_levels(g, flags))?;
    Ok(SkeletalCertificate {
        unique: result.raw_count == 1 && result.exhausted,
        raw_count: result.raw_count,
        branch_points: result.branch_points,
        structure: result.representatives.into_iter().next(),
    })
}
