use ncat_core::cobordism::{
    build_cob_truncation, disjoint_union, gen_sets_graph, glue, make_cylinder, reverse_orientation,
    MatchDiagram, Sign, SignedBoundary,
};
use ncat_core::composition::check_category;
use proptest::prelude::*;

fn boundaries(max: usize) -> Vec<SignedBoundary> {
    (0..=max).flat_map(SignedBoundary::all_of_length).collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Gluing by union-find over both diagrams' points, with the shared boundary identified.
fn glue_oracle(m: &MatchDiagram, n: &MatchDiagram) -> Vec<usize> {
    let (a, b, d) = (m.source().len(), m.target().len(), n.target().len());
    let offset = a + b;
    let mut parent: Vec<usize> = (0..offset + b + d).collect();
    let union = |p: &mut Vec<usize>, x: usize, y: usize| {
        let (rx, ry) = (find(p, x), find(p, y));
        p[rx] = ry;
    };
    for (u, &v) in m.pairing().iter().enumerate() {
        union(&mut parent, u, v);
    }
    for (u, &v) in n.pairing().iter().enumerate() {
        union(&mut parent, offset + u, offset + v);
    }
    for i in 0..b {
        union(&mut parent, a + i, offset + i);
    }
    let free: Vec<usize> = (0..a).chain(offset + b..offset + b + d).collect();
    let mut out = vec![usize::MAX; a + d];
    for (i, &x) in free.iter().enumerate() {
        for (j, &y) in free.iter().enumerate() {
            if i != j && find(&mut parent, x) == find(&mut parent, y) {
                out[i] = j;
            }
        }
    }
    out
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

#[test]
fn diagram_counts_are_perfect_matchings() {
    for a in boundaries(3) {
        for b in boundaries(3) {
            let pos = (0..a.len() + b.len())
                .filter(|&p| {
                    let s = if p < a.len() {
                        a.0[p].flip()
                    } else {
                        b.0[p - a.len()]
                    };
                    s == Sign::Plus
                })
                .count();
            let neg = a.len() + b.len() - pos;
            let expected = if pos == neg { factorial(pos) } else { 0 };
            let all = MatchDiagram::all(&a, &b);
            assert_eq!(all.len(), expected, "{a} -> {b}");
            for m in &all {
                let plus = (0..a.len() + b.len())
                    .filter(|&p| m.sign(p) == Sign::Plus)
                    .count();
                assert_eq!(2 * plus, a.len() + b.len());
            }
        }
    }
}

#[test]
fn truncation_counts() {
    for max in 0..=3 {
        let t = build_cob_truncation(max).unwrap();
        let objs = boundaries(max);
        assert_eq!(t.graph().count(0), objs.len());
        let arrows: usize = objs
            .iter()
            .flat_map(|a| objs.iter().map(move |b| MatchDiagram::all(a, b).len()))
            .sum();
        assert_eq!(t.graph().count(1), arrows);
    }
}

#[test]
fn gluing_agrees_with_union_find() {
    let t = build_cob_truncation(3).unwrap();
    for (x, y) in t.graph().composable_pairs(0) {
        let (m, n) = (&t.diagrams[x], &t.diagrams[y]);
        assert_eq!(glue(m, n).unwrap().pairing(), glue_oracle(m, n).as_slice());
    }
}

#[test]
fn cylinders_are_units_up_to_four_points() {
    let t = build_cob_truncation(4).unwrap();
    for m in &t.diagrams {
        assert_eq!(&glue(&make_cylinder(m.source()), m).unwrap(), m);
        assert_eq!(&glue(m, &make_cylinder(m.target())).unwrap(), m);
    }
}

#[test]
fn gluing_is_associative_up_to_three_points() {
    let t = build_cob_truncation(3).unwrap();
    let g = t.graph();
    let mut triples = 0u64;
    for (x, y) in g.composable_pairs(0) {
        let xy = glue(&t.diagrams[x], &t.diagrams[y]).unwrap();
        let tgt = g.tgt_of(1, y);
        for o in 0..g.count(0) {
            for &z in g.hom(0, tgt, o) {
                let left = glue(&xy, &t.diagrams[z]).unwrap();
                let right = glue(
                    &t.diagrams[x],
                    &glue(&t.diagrams[y], &t.diagrams[z]).unwrap(),
                )
                .unwrap();
                assert_eq!(left, right);
                triples += 1;
            }
        }
    }
    assert!(triples > 0);
}

#[test]
fn truncations_are_categories() {
    for max in 0..=3 {
        let t = build_cob_truncation(max).unwrap();
        assert!(check_category(&t.structure).passed(), "max_points = {max}");
    }
}

#[test]
fn disjoint_union_interchanges_with_gluing() {
    let small = boundaries(1);
    let mut checked = 0;
    for a in &small {
        for b in &small {
            for c in &small {
                for a2 in &small {
                    for b2 in &small {
                        for c2 in &small {
                            for m in MatchDiagram::all(a, b) {
                                for n in MatchDiagram::all(b, c) {
                                    for m2 in MatchDiagram::all(a2, b2) {
                                        for n2 in MatchDiagram::all(b2, c2) {
                                            let left = disjoint_union(
                                                &glue(&m, &n).unwrap(),
                                                &glue(&m2, &n2).unwrap(),
                                            );
                                            let right = glue(
                                                &disjoint_union(&m, &m2),
                                                &disjoint_union(&n, &n2),
                                            )
                                            .unwrap();
                                            assert_eq!(left, right);
                                            checked += 1;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn concatenation_is_associative_where_defined() {
    let t = build_cob_truncation(3).unwrap();
    let cat = t.concatenation_table();
    let k = t.objects.len();
    for x in 0..k {
        for y in 0..k {
            for z in 0..k {
                let l = cat.get(x, y).and_then(|xy| cat.get(xy, z));
                let r = cat.get(y, z).and_then(|yz| cat.get(x, yz));
                if let (Some(l), Some(r)) = (l, r) {
                    assert_eq!(l, r);
                }
            }
        }
    }
    let empty = t.object_index(&SignedBoundary::empty()).unwrap();
    for x in 0..k {
        assert_eq!(cat.get(empty, x), Some(x));
        assert_eq!(cat.get(x, empty), Some(x));
    }
}

#[test]
fn sets_graph_shape_and_axioms() {
    for max in 1..=2 {
        let s = gen_sets_graph(max).unwrap();
        let g = s.graph();
        assert_eq!(g.count(0), max);
        let maps: usize = (1..=max)
            .flat_map(|a| (1..=max).map(move |b| b.pow(a as u32)))
            .sum();
        assert_eq!(g.count(1), maps);
        let changes: usize = (1..=max)
            .flat_map(|a| (1..=max).map(move |b| b.pow(a as u32).pow(2)))
            .sum();
        assert_eq!(g.count(2), changes);
        assert!(check_category(&s.structure).passed());
    }
}

fn arb_boundary(max: usize) -> impl Strategy<Value = SignedBoundary> {
    prop::collection::vec(any::<bool>(), 0..=max).prop_map(|v| {
        SignedBoundary(
            v.into_iter()
                .map(|p| if p { Sign::Plus } else { Sign::Minus })
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn reversal_is_an_involution(a in arb_boundary(6)) {
        prop_assert_eq!(reverse_orientation(&reverse_orientation(&a)), a.clone());
        prop_assert_eq!(reverse_orientation(&a).len(), a.len());
    }

    #[test]
    fn boundary_text_round_trips(a in arb_boundary(6)) {
        let text = a.to_string();
        let inner = text.trim_start_matches('(').trim_end_matches(')');
        prop_assert_eq!(inner.parse::<SignedBoundary>().unwrap(), a);
    }

    #[test]
    fn cylinder_glues_to_itself(a in arb_boundary(4)) {
        let c = make_cylinder(&a);
        prop_assert_eq!(glue(&c, &c).unwrap(), c);
    }
}
