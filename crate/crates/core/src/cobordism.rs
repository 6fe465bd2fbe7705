//! Oriented 0-manifolds and the 1-dimensional cobordisms between them, as
//! perfect matchings, plus the finite truncations exported as n-graphs.
//!
//! A diagram `A -> B` matches the points of `A* ⊔ B`, where `A*` is `A` with
//! every sign flipped. Points are indexed `0..|A|` for `A*` and
//! `|A|..|A|+|B|` for `B`. Closed loops created by gluing are dropped.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::composition::{AxiomFlags, CategoryStructure, CompTable, HCompTable};
use crate::graph::{validate_graph, NGraph, RawGraph};

pub const MAX_COB_POINTS: usize = 4;
pub const MAX_SET_SIZE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CobError {
    #[error("target {left} of the first diagram differs from source {right} of the second")]
    BoundaryMismatch {
        left: SignedBoundary,
        right: SignedBoundary,
    },
    #[error("pairing is not a perfect matching on {points} points")]
    NotAMatching { points: usize },
    #[error("points {0} and {1} have the same orientation")]
    OrientationClash(usize, usize),
    #[error("requested size {requested} exceeds the supported maximum {max}")]
    SpaceTooLarge { requested: usize, max: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedBoundary(pub Vec<Sign>);

impl SignedBoundary {
    pub fn empty() -> Self {
        SignedBoundary(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &SignedBoundary) -> SignedBoundary {
        SignedBoundary(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Every sequence of length `len`, `+` before `-`.
    pub fn all_of_length(len: usize) -> Vec<SignedBoundary> {
        (0..1usize << len)
            .map(|bits| {
                SignedBoundary(
                    (0..len)
                        .map(|i| {
                            if bits >> (len - 1 - i) & 1 == 0 {
                                Sign::Plus
                            } else {
                                Sign::Minus
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

impl std::str::FromStr for SignedBoundary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(format!("unexpected sign {other:?}")),
            })
            .collect::<Result<_, _>>()
            .map(SignedBoundary)
    }
}

impl fmt::Display for SignedBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for s in &self.0 {
            f.write_str(if *s == Sign::Plus { "+" } else { "-" })?;
        }
        f.write_str(")")
    }
}

pub fn reverse_orientation(a: &SignedBoundary) -> SignedBoundary {
    SignedBoundary(a.0.iter().map(|s| s.flip()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchDiagram {
    source: SignedBoundary,
    target: SignedBoundary,
    pairing: Vec<usize>,
}

impl MatchDiagram {
    /// Checks that `pairing` is a fixed-point-free involution joining opposite signs.
    pub fn new(
        source: SignedBoundary,
        target: SignedBoundary,
        pairing: Vec<usize>,
    ) -> Result<Self, CobError> {
        let points = source.len() + target.len();
        if pairing.len() != points {
            return Err(CobError::NotAMatching { points });
        }
        let d = MatchDiagram {
            source,
            target,
            pairing,
        };
        for (p, &q) in d.pairing.iter().enumerate() {
            if q >= points || q == p || d.pairing[q] != p {
                return Err(CobError::NotAMatching { points });
            }
            if d.sign(p) == d.sign(q) {
                return Err(CobError::OrientationClash(p.min(q), p.max(q)));
            }
        }
        Ok(d)
    }

    pub fn source(&self) -> &SignedBoundary {
        &self.source
    }

    pub fn target(&self) -> &SignedBoundary {
        &self.target
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// Sign of point `p` of `A* ⊔ B`.
    pub fn sign(&self, p: usize) -> Sign {
        let a = self.source.len();
        if p < a {
            self.source.0[p].flip()
        } else {
            self.target.0[p - a]
        }
    }

    /// Matched pairs `(p, q)` with `p < q`.
    pub fn strands(&self) -> Vec<(usize, usize)> {
        self.pairing
            .iter()
            .enumerate()
            .filter(|&(p, &q)| p < q)
            .map(|(p, &q)| (p, q))
            .collect()
    }

    /// Every diagram `a -> b`, in lexicographic order of pairings.
    pub fn all(a: &SignedBoundary, b: &SignedBoundary) -> Vec<MatchDiagram> {
        let points = a.len() + b.len();
        let proto = MatchDiagram {
            source: a.clone(),
            target: b.clone(),
            pairing: vec![usize::MAX; points],
        };
        let signs: Vec<Sign> = (0..points).map(|p| proto.sign(p)).collect();
        let mut out = Vec::new();
        fn go(
            pairing: &mut Vec<usize>,
            signs: &[Sign],
            proto: &MatchDiagram,
            out: &mut Vec<MatchDiagram>,
        ) {
            let Some(p) = pairing.iter().position(|&x| x == usize::MAX) else {
                out.push(MatchDiagram {
                    pairing: pairing.clone(),
                    ..proto.clone()
                });
                return;
            };
            for q in p + 1..pairing.len() {
                if pairing[q] == usize::MAX && signs[q] != signs[p] {
                    pairing[p] = q;
                    pairing[q] = p;
                    go(pairing, signs, proto, out);
                    pairing[p] = usize::MAX;
                    pairing[q] = usize::MAX;
                }
            }
        }
        let mut pairing = proto.pairing.clone();
        go(&mut pairing, &signs, &proto, &mut out);
        out
    }
}

impl fmt::Display for MatchDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.source, self.target)?;
        for (p, q) in self.strands() {
            write!(f, " {p}-{q}")?;
        }
        Ok(())
    }
}

pub fn make_cylinder(a: &SignedBoundary) -> MatchDiagram {
    let n = a.len();
    let pairing = (0..2 * n)
        .map(|p| if p < n { p + n } else { p - n })
        .collect();
    MatchDiagram {
        source: a.clone(),
        target: a.clone(),
        pairing,
    }
}

/// `m` then `n`, following strands through the shared boundary.
pub fn glue(m: &MatchDiagram, n: &MatchDiagram) -> Result<MatchDiagram, CobError> {
    if m.target != n.source {
        return Err(CobError::BoundaryMismatch {
            left: m.target.clone(),
            right: n.source.clone(),
        });
    }
    let (a, b, d) = (m.source.len(), m.target.len(), n.target.len());
    // walk from each free end until the strand leaves through another one
    let pairing = (0..a + d)
        .map(|start| {
            if start < a {
                follow(m, n, a, b, start)
            } else {
                follow_from_n(m, n, a, b, b + start - a)
            }
        })
        .collect();
    Ok(MatchDiagram {
        source: m.source.clone(),
        target: n.target.clone(),
        pairing,
    })
}

/// Enter `m` at point `u`; returns the result point where the strand exits.
fn follow(m: &MatchDiagram, n: &MatchDiagram, a: usize, b: usize, u: usize) -> usize {
    let v = m.pairing[u];
    if v < a {
        v
    } else {
        follow_from_n(m, n, a, b, v - a)
    }
}

/// Enter `n` at point `u`.
fn follow_from_n(m: &MatchDiagram, n: &MatchDiagram, a: usize, b: usize, u: usize) -> usize {
    let w = n.pairing[u];
    if w >= b {
        a + w - b
    } else {
        follow(m, n, a, b, a + w)
    }
}

/// `(M ∪ N)(A·C, B·D)`.
pub fn disjoint_union(m: &MatchDiagram, n: &MatchDiagram) -> MatchDiagram {
    let (a, b) = (m.source.len(), m.target.len());
    let (c, d) = (n.source.len(), n.target.len());
    let from_m = |u: usize| if u < a { u } else { a + c + (u - a) };
    let from_n = |u: usize| if u < c { a + u } else { a + c + b + (u - c) };
    let mut pairing = vec![0; a + b + c + d];
    for (u, &v) in m.pairing.iter().enumerate() {
        pairing[from_m(u)] = from_m(v);
    }
    for (u, &v) in n.pairing.iter().enumerate() {
        pairing[from_n(u)] = from_n(v);
    }
    MatchDiagram {
        source: m.source.concat(&n.source),
        target: m.target.concat(&n.target),
        pairing,
    }
}

#[derive(Clone, Debug)]
pub struct CobTruncation {
    pub structure: CategoryStructure,
    /// Boundary of each 0-cell.
    pub objects: Vec<SignedBoundary>,
    /// Diagram of each 1-cell.
    pub diagrams: Vec<MatchDiagram>,
}

impl CobTruncation {
    pub fn graph(&self) -> &NGraph {
        self.structure.graph()
    }

    pub fn object_index(&self, a: &SignedBoundary) -> Option<usize> {
        self.objects.iter().position(|x| x == a)
    }

    /// Concatenation of boundaries as a partial level -1 table, defined when the
    /// result stays within the truncation.
    pub fn concatenation_table(&self) -> CompTable {
        let index: HashMap<&SignedBoundary, usize> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o, i))
            .collect();
        let mut t = CompTable::new(-1);
        for (i, x) in self.objects.iter().enumerate() {
            for (j, y) in self.objects.iter().enumerate() {
                if let Some(&k) = index.get(&x.concat(y)) {
                    t.insert_unchecked(i, j, k);
                }
            }
        }
        t
    }
}

fn boundary_id(a: &SignedBoundary) -> String {
    a.to_string()
}

/// The 1-category of boundaries with at most `max_points` points and all
/// diagrams between them, composed by gluing.
pub fn build_cob_truncation(max_points: usize) -> Result<CobTruncation, CobError> {
    if max_points > MAX_COB_POINTS {
        return Err(CobError::SpaceTooLarge {
            requested: max_points,
            max: MAX_COB_POINTS,
        });
    }
    let objects: Vec<SignedBoundary> = (0..=max_points)
        .flat_map(SignedBoundary::all_of_length)
        .collect();
    let mut raw = RawGraph::new(1, 1);
    let mut diagrams = Vec::new();
    for o in &objects {
        raw.add_object(Some(&boundary_id(o)));
        diagrams.push(make_cylinder(o));
    }
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            for m in MatchDiagram::all(x, y) {
                if i == j && m == make_cylinder(x) {
                    continue;
                }
                let k = diagrams.len();
                raw.add_cell(1, i, j, Some(&format!("m{k}")));
                diagrams.push(m);
            }
        }
    }
    let graph = validate_graph(raw).expect("generated cobordism graph is valid");
    let index: HashMap<&MatchDiagram, usize> =
        diagrams.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut table = CompTable::new(0);
    for (a, b) in graph.composable_pairs(0) {
        let c = glue(&diagrams[a], &diagrams[b]).expect("composable pairs share a boundary");
        table.insert_unchecked(a, b, index[&c]);
    }
    let flags = AxiomFlags {
        global: true,
        unital: true,
        associative: true,
        ..Default::default()
    };
    let mut structure = CategoryStructure::new(graph, flags);
    structure.set_vtable(table).expect("keys from the graph");
    Ok(CobTruncation {
        structure,
        objects,
        diagrams,
    })
}

#[derive(Clone, Debug)]
pub struct SetsGraph {
    /// Maps composed at level 0; changes of mappings `(f, g)` composed by
    /// `(f, g);(g, h) = (f, h)` and whiskered componentwise.
    pub structure: CategoryStructure,
    /// Per 1-cell: (domain size, codomain size, values).
    pub maps: Vec<(usize, usize, Vec<usize>)>,
    /// Per 2-cell: (source map, target map).
    pub changes: Vec<(usize, usize)>,
}

impl SetsGraph {
    pub fn graph(&self) -> &NGraph {
        self.structure.graph()
    }
}

fn all_maps(a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..a {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..b).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// Sets `{0..k-1}` for `1 <= k <= max_size`, all maps between them, and one
/// 2-cell per ordered pair of parallel maps.
pub fn gen_sets_graph(max_size: usize) -> Result<SetsGraph, CobError> {
    if max_size > MAX_SET_SIZE {
        return Err(CobError::SpaceTooLarge {
            requested: max_size,
            max: MAX_SET_SIZE,
        });
    }
    let sizes: Vec<usize> = (1..=max_size).collect();
    let mut raw = RawGraph::new(2, 2);
    let mut maps = Vec::new();
    for &k in &sizes {
        raw.add_object(Some(&format!("set{k}")));
        maps.push((k, k, (0..k).collect::<Vec<_>>()));
    }
    for (i, &a) in sizes.iter().enumerate() {
        for (j, &b) in sizes.iter().enumerate() {
            for f in all_maps(a, b) {
                if i == j && f.iter().enumerate().all(|(x, &y)| x == y) {
                    continue;
                }
                let label: String = f.iter().map(|v| v.to_string()).collect();
                raw.add_cell(1, i, j, Some(&format!("f{a}.{b}.{label}")));
                maps.push((a, b, f));
            }
        }
    }
    let mut changes: Vec<(usize, usize)> = (0..maps.len()).map(|f| (f, f)).collect();
    for f in 0..maps.len() {
        for g in 0..maps.len() {
            if f != g && (maps[f].0, maps[f].1) == (maps[g].0, maps[g].1) {
                raw.add_cell(2, f, g, Some(&format!("d{f}.{g}")));
                changes.push((f, g));
            }
        }
    }
    let graph = validate_graph(raw).expect("generated sets graph is valid");
    // identity 2-cells sit at the index the graph gave them
    let mut ordered = vec![(0, 0); changes.len()];
    for f in 0..maps.len() {
        ordered[graph.idn_of(1, f)] = (f, f);
    }
    ordered[maps.len()..].copy_from_slice(&changes[maps.len()..]);
    let changes = ordered;
    let map_index: HashMap<(usize, usize, Vec<usize>), usize> = maps
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let change_index: HashMap<(usize, usize), usize> =
        changes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let compose_maps = |f: usize, g: usize| {
        let (a, _, fv) = &maps[f];
        let (_, c, gv) = &maps[g];
        map_index[&(*a, *c, fv.iter().map(|&x| gv[x]).collect())]
    };
    let mut v0 = CompTable::new(0);
    for (f, g) in graph.composable_pairs(0) {
        v0.insert_unchecked(f, g, compose_maps(f, g));
    }
    let mut v1 = CompTable::new(1);
    for (x, y) in graph.composable_pairs(1) {
        v1.insert_unchecked(x, y, change_index[&(changes[x].0, changes[y].1)]);
    }
    let mut h0 = HCompTable::new(0);
    for (x, y) in graph.horizontal_pairs(0) {
        let (f, g) = changes[x];
        let (f2, g2) = changes[y];
        h0.insert_unchecked(
            x,
            y,
            change_index[&(compose_maps(f, f2), compose_maps(g, g2))],
        );
    }
    let flags = AxiomFlags {
        global: true,
        unital: true,
        associative: true,
        interchange: true,
        ..Default::default()
    };
    let mut structure = CategoryStructure::new(graph, flags);
    structure.set_vtable(v0).expect("keys from the graph");
    structure.set_vtable(v1).expect("keys from the graph");
    structure.set_htable(h0).expect("keys from the graph");
    Ok(SetsGraph {
        structure,
        maps,
        changes,
    })
}
