//! Procedural graph generators for tests, benchmarks and the `gen` subcommand.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::cobordism::{build_cob_truncation, gen_sets_graph};
use crate::composition::{AxiomFlags, CategoryStructure, CompTable};
use crate::enumeration::{enumerate_structures, EnumSpec};
use crate::graph::{validate_graph, Dim, NGraph, RawGraph};
use crate::io::{morphism_doc, transformation_doc, GraphDocument};
use crate::morphisms::{
    build_cat_of_cats, enumerate_functors, enumerate_transformations, DEFAULT_SEARCH_BOUND,
};

/// `objects` objects, exactly one 1-cell between every ordered pair (the
/// identity on the diagonal), and nothing but identities above.
pub fn skeletal_graph(n: usize, objects: usize, tail: usize) -> NGraph {
    skeletal_with_order(n, objects, tail, &all_pairs(objects))
}

/// A skeletal graph whose off-diagonal 1-cells are inserted in a random order,
/// so cell indices differ between instances of the same shape.
pub fn random_skeletal<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    objects: usize,
    tail: usize,
) -> NGraph {
    let mut pairs = all_pairs(objects);
    pairs.shuffle(rng);
    skeletal_with_order(n, objects, tail, &pairs)
}

fn all_pairs(objects: usize) -> Vec<(usize, usize)> {
    (0..objects)
        .flat_map(|x| (0..objects).map(move |y| (x, y)))
        .filter(|(x, y)| x != y)
        .collect()
}

fn skeletal_with_order(n: usize, objects: usize, tail: usize, pairs: &[(usize, usize)]) -> NGraph {
    assert!(n >= 1, "skeletal graphs need at least one level of arrows");
    let mut raw = RawGraph::new(n, tail);
    for _ in 0..objects {
        raw.add_object(None);
    }
    for &(x, y) in pairs {
        raw.add_cell(1, x, y, None);
    }
    validate_graph(raw).expect("skeletal construction is a valid graph")
}

/// Random valid graph: `objects` objects, then up to `extra` non-identity cells
/// per dimension `1..=n`, each between a randomly chosen parallel pair.
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    tail: usize,
    objects: usize,
    extra: usize,
) -> NGraph {
    let mut raw = RawGraph::new(n, tail);
    for _ in 0..objects.max(1) {
        raw.add_object(None);
    }
    for d in 1..=n {
        let below = d - 1;
        let count = rng.gen_range(0..=extra);
        for _ in 0..count {
            let x = rng.gen_range(0..raw.src[below].len());
            let parallel: Vec<usize> = (0..raw.src[below].len())
                .filter(|&y| {
                    below == 0
                        || (raw.src[below][y] == raw.src[below][x]
                            && raw.tgt[below][y] == raw.tgt[below][x])
                })
                .collect();
            let y = *parallel.choose(rng).expect("x is parallel to itself");
            raw.add_cell(d as Dim, x, y, None);
        }
    }
    validate_graph(raw).expect("random construction only joins parallel cells")
}

/// One object with `k` loops, the first being the identity.
pub fn loops_graph(k: usize, tail: usize) -> NGraph {
    let mut raw = RawGraph::new(1, tail);
    let x = raw.add_object(Some("x"));
    for i in 1..k.max(1) {
        raw.add_cell(1, x, x, Some(&format!("a{i}")));
    }
    validate_graph(raw).expect("loops on one object form a valid graph")
}

/// The cyclic group of order 2 as a one-object category.
pub fn z2_category() -> CategoryStructure {
    let g = loops_graph(2, 2);
    let mut t = CompTable::new(0);
    for a in 0..2 {
        for b in 0..2 {
            t.insert(&g, a, b, a ^ b).expect("loops compose");
        }
    }
    CategoryStructure::new(
        g,
        AxiomFlags::parse("global,unital,associative").expect("known flags"),
    )
    .with_vtable(t)
    .expect("table typed by construction")
}

/// Named documents covering every generator: bare graphs, opposites, enumerated
/// and constructed structures, and a file with morphism sections.
pub fn corpus() -> Vec<(String, GraphDocument)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for n in 1..=2 {
        for objects in 1..=3 {
            for tail in 1..=2 {
                let g = skeletal_graph(n, objects, tail);
                out.push((
                    format!("skeletal-{n}-{objects}-{tail}"),
                    GraphDocument::from_graph(&g),
                ));
            }
        }
    }
    for k in 0..12 {
        let g = random_graph(&mut rng, 1 + k % 3, 1 + k % 2, 1 + k % 3, 3);
        if g.top() >= 1 {
            let op = g.opposite(1).expect("level 1 exists");
            out.push((format!("random-{k}-op"), GraphDocument::from_graph(&op)));
        }
        out.push((format!("random-{k}"), GraphDocument::from_graph(&g)));
    }
    let g = loops_graph(3, 2);
    let monoids = enumerate_structures(
        &g,
        &EnumSpec::all_levels(
            &g,
            AxiomFlags::parse("global,unital,associative").expect("known flags"),
        ),
    )
    .expect("small enumeration");
    for (k, s) in monoids.representatives.iter().enumerate() {
        out.push((format!("monoid-3-{k}"), GraphDocument::from_structure(s)));
    }
    for max in 0..=3 {
        let t = build_cob_truncation(max).expect("within bounds");
        out.push((
            format!("cob-{max}"),
            GraphDocument::from_structure(&t.structure),
        ));
        let with_concat = t
            .structure
            .clone()
            .with_vtable(t.concatenation_table())
            .expect("objects index the table");
        out.push((
            format!("cob-{max}-concat"),
            GraphDocument::from_structure(&with_concat),
        ));
    }
    for max in 1..=2 {
        let s = gen_sets_graph(max).expect("within bounds");
        out.push((
            format!("sets-{max}"),
            GraphDocument::from_structure(&s.structure),
        ));
    }
    let z = z2_category();
    let cats =
        build_cat_of_cats(&[z.clone(), z.clone()], 2, DEFAULT_SEARCH_BOUND).expect("small search");
    out.push((
        "cat-of-cats-z2".into(),
        GraphDocument::from_structure(&cats.structure),
    ));

    let g = z.graph();
    let mut doc = GraphDocument::from_structure(&z);
    let functors = enumerate_functors(&z, &z, DEFAULT_SEARCH_BOUND).expect("small search");
    for (k, f) in functors.iter().enumerate() {
        doc.morphisms.push(morphism_doc(&format!("F{k}"), g, g, f));
    }
    let id = functors
        .iter()
        .position(|f| f.comps.is_identity())
        .expect("identity is a functor");
    let name = format!("F{id}");
    let ts = enumerate_transformations(&functors[id], &functors[id], &z, &z, DEFAULT_SEARCH_BOUND)
        .expect("small search");
    for (k, t) in ts.iter().enumerate() {
        doc.transformations
            .push(transformation_doc(&format!("T{k}"), &name, &name, t, g, g));
    }
    out.push(("z2-with-morphisms".into(), doc));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn skeletal_shapes() {
        for n in 1..=2 {
            for objects in 1..=3 {
                for tail in 1..=2 {
                    let g = skeletal_graph(n, objects, tail);
                    assert!(g.is_skeletal());
                    assert_eq!(g.count(1), objects * objects);
                }
            }
        }
    }

    #[test]
    fn random_graphs_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=3);
            let tail = rng.gen_range(1..=2);
            let g = random_graph(&mut rng, n, tail, 3, 4);
            assert_eq!(g.n(), n);
            let s = random_skeletal(&mut rng, n, 2, tail);
            assert!(s.is_skeletal());
        }
    }
}
