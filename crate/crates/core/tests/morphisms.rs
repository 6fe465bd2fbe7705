use std::collections::BTreeSet;

use ncat_core::composition::check_category;
use ncat_core::enumeration::{enumerate_structures, EnumSpec};
use ncat_core::generate::loops_graph;
use ncat_core::morphisms::{
    build_cat_of_cats, check_contravariant, check_functor, check_graph_morphism,
    check_modification, check_transformation, enumerate_functors, enumerate_transformations,
    promote_locally_discrete, GraphMorphism, Modification, Transformation, VarianceSpec,
    DEFAULT_SEARCH_BOUND,
};
use ncat_core::{
    validate_graph, AxiomFlags, CategoryStructure, CellMap, CompTable, RawGraph, Verdict,
};
use proptest::prelude::*;

fn category_flags() -> AxiomFlags {
    AxiomFlags::parse("global,unital,associative").unwrap()
}

fn monoid(k: usize, op: impl Fn(usize, usize) -> usize) -> CategoryStructure {
    let g = loops_graph(k, 2);
    let mut t = CompTable::new(0);
    for a in 0..k {
        for b in 0..k {
            t.insert(&g, a, b, op(a, b)).unwrap();
        }
    }
    CategoryStructure::new(g, category_flags())
        .with_vtable(t)
        .unwrap()
}

fn z2() -> CategoryStructure {
    monoid(2, |a, b| a ^ b)
}

/// `{e, a, b}` with `x y = x` for non-identities.
fn left_zero() -> CategoryStructure {
    monoid(3, |a, b| if a == 0 { b } else { a })
}

/// Free category on `x -> y`, optionally with a second parallel arrow.
fn arrows(parallel: bool) -> CategoryStructure {
    let mut raw = RawGraph::new(1, 2);
    let x = raw.add_object(Some("x"));
    let y = raw.add_object(Some("y"));
    raw.add_cell(1, x, y, Some("f"));
    if parallel {
        raw.add_cell(1, x, y, Some("g"));
    }
    let g = validate_graph(raw).unwrap();
    let mut t = CompTable::new(0);
    for (a, b) in g.composable_pairs(0) {
        let v = if g.identity_preimage(1, a).is_some() {
            b
        } else {
            a
        };
        t.insert(&g, a, b, v).unwrap();
    }
    CategoryStructure::new(g, category_flags())
        .with_vtable(t)
        .unwrap()
}

/// Every category in a small zoo, including all order-3 monoids.
fn zoo() -> Vec<CategoryStructure> {
    let mut out = vec![
        z2(),
        left_zero(),
        arrows(false),
        arrows(true),
        monoid(1, |_, _| 0),
    ];
    let g = loops_graph(3, 2);
    let r = enumerate_structures(&g, &EnumSpec::all_levels(&g, category_flags())).unwrap();
    out.extend(r.representatives);
    out
}

/// Every total map on non-identity cells, by brute force, that passes the functor check.
fn functor_oracle(ce: &CategoryStructure, cf: &CategoryStructure) -> BTreeSet<GraphMorphism> {
    let (e, f) = (ce.graph(), cf.graph());
    let mut out = BTreeSet::new();
    let objects = e.count(0);
    let arrows = e.count(1);
    let total_obj = f.count(0).pow(objects as u32);
    let total_arr = f.count(1).pow(arrows as u32);
    for oc in 0..total_obj {
        for ac in 0..total_arr {
            let mut o = Vec::new();
            let mut c = oc;
            for _ in 0..objects {
                o.push(c % f.count(0));
                c /= f.count(0);
            }
            let mut a = Vec::new();
            let mut c = ac;
            for _ in 0..arrows {
                a.push(c % f.count(1));
                c /= f.count(1);
            }
            let m = GraphMorphism {
                comps: CellMap {
                    slots: vec![(0..e.count(-1)).collect(), o, a],
                },
            };
            if check_functor(&m, ce, cf).unwrap().passed() {
                out.insert(m);
            }
        }
    }
    out
}

#[test]
fn functor_enumeration_matches_brute_force() {
    let cats = [z2(), left_zero(), arrows(false), monoid(1, |_, _| 0)];
    for ce in &cats {
        for cf in &cats {
            let fast: BTreeSet<_> = enumerate_functors(ce, cf, DEFAULT_SEARCH_BOUND)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(fast, functor_oracle(ce, cf));
        }
    }
    assert_eq!(
        enumerate_functors(&z2(), &z2(), DEFAULT_SEARCH_BOUND)
            .unwrap()
            .len(),
        2
    );
}

#[test]
fn functors_from_the_empty_category() {
    let empty = CategoryStructure::new(
        validate_graph(RawGraph::new(1, 2)).unwrap(),
        category_flags(),
    )
    .with_vtable(CompTable::new(0))
    .unwrap();
    for cf in zoo() {
        assert_eq!(
            enumerate_functors(&empty, &cf, DEFAULT_SEARCH_BOUND)
                .unwrap()
                .len(),
            1
        );
    }
}

#[test]
fn identity_functor_passes_everywhere() {
    for c in zoo() {
        let id = GraphMorphism::identity(c.graph());
        assert!(check_functor(&id, &c, &c).unwrap().passed());
    }
}

#[test]
fn composites_of_functors_are_functors() {
    let cats = [z2(), left_zero(), arrows(false), arrows(true)];
    for a in &cats {
        for b in &cats {
            for c in &cats {
                let ab = enumerate_functors(a, b, DEFAULT_SEARCH_BOUND).unwrap();
                let bc = enumerate_functors(b, c, DEFAULT_SEARCH_BOUND).unwrap();
                for f in &ab {
                    for g in &bc {
                        assert!(check_functor(&f.then(g), a, c).unwrap().passed());
                    }
                }
            }
        }
    }
}

/// All raw level-0 component assignments, valued in every 1-cell of the codomain.
fn raw_transformations(
    f: &GraphMorphism,
    g: &GraphMorphism,
    ce: &CategoryStructure,
    cf: &CategoryStructure,
) -> Vec<Transformation> {
    let objects = ce.graph().count(0);
    let arrows = cf.graph().count(1);
    let mut out = Vec::new();
    for code in 0..arrows.pow(objects as u32) {
        let mut comps = Vec::new();
        let mut c = code;
        for _ in 0..objects {
            comps.push(c % arrows);
            c /= arrows;
        }
        let t = Transformation::new(f.clone(), g.clone(), comps);
        if check_transformation(&t, ce, cf).unwrap().passed() {
            out.push(t);
        }
    }
    out
}

#[test]
fn transformation_enumeration_is_the_filtered_raw_space() {
    let cats = [z2(), left_zero(), arrows(false), arrows(true)];
    for ce in &cats {
        for cf in &cats {
            let fs = enumerate_functors(ce, cf, DEFAULT_SEARCH_BOUND).unwrap();
            for f in &fs {
                for g in &fs {
                    let fast: BTreeSet<Vec<usize>> =
                        enumerate_transformations(f, g, ce, cf, DEFAULT_SEARCH_BOUND)
                            .unwrap()
                            .into_iter()
                            .map(|t| t.components[&0].clone())
                            .collect();
                    let slow: BTreeSet<Vec<usize>> = raw_transformations(f, g, ce, cf)
                        .into_iter()
                        .map(|t| t.components[&0].clone())
                        .collect();
                    assert_eq!(fast, slow);
                }
            }
        }
    }
}

#[test]
fn centre_of_small_monoids() {
    let z = z2();
    let id = GraphMorphism::identity(z.graph());
    assert_eq!(
        enumerate_transformations(&id, &id, &z, &z, DEFAULT_SEARCH_BOUND)
            .unwrap()
            .len(),
        2
    );
    // only the identity commutes with everything in the left-zero monoid
    let lz = left_zero();
    let id = GraphMorphism::identity(lz.graph());
    assert_eq!(
        enumerate_transformations(&id, &id, &lz, &lz, DEFAULT_SEARCH_BOUND)
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn constant_functors_and_a_connecting_arrow() {
    let c = arrows(false);
    let g = c.graph();
    let (p, q) = (0, 1);
    let fp = GraphMorphism::constant(g, g, p);
    let fq = GraphMorphism::constant(g, g, q);
    let h = g.hom(0, p, q)[0];
    let t = Transformation::new(fp.clone(), fq.clone(), vec![h; g.count(0)]);
    assert!(check_transformation(&t, &c, &c).unwrap().passed());
    // nothing runs back from q to p
    assert!(
        enumerate_transformations(&fq, &fp, &c, &c, DEFAULT_SEARCH_BOUND)
            .unwrap()
            .is_empty()
    );
}

#[test]
fn contravariance_round_trip() {
    for c in [arrows(false), arrows(true), z2()] {
        let g = c.graph();
        let op = g.opposite(1).unwrap();
        let dual = CategoryStructure::new(op.clone(), AxiomFlags::default());
        let plain = CategoryStructure::new(g.clone(), AxiomFlags::default());
        for m in enumerate_functors(&plain, &dual, DEFAULT_SEARCH_BOUND).unwrap() {
            let v = check_contravariant(g, g, &m, &VarianceSpec::at([1])).unwrap();
            assert!(v.passed());
            assert_eq!(v, check_graph_morphism(g, &op, &m).unwrap());
        }
    }
}

#[test]
fn path_failures_name_the_arrow() {
    let c = promote_locally_discrete(&left_zero()).unwrap();
    let g = c.graph();
    let id = GraphMorphism::identity(g);
    // component a at the single object is not central
    let s = Transformation::new(id.clone(), id, vec![1]);
    let md = Modification {
        s: s.clone(),
        t: s,
        components: [(0, vec![g.idn_of(1, 1)])].into_iter().collect(),
    };
    let r = check_modification(&md, &c, &c).unwrap();
    let paths = r.get("modification.paths").unwrap();
    assert_eq!(paths.verdict, Verdict::Fail);
    assert!(paths.counterexamples.iter().all(|cx| cx.cells.len() == 3));
}

#[test]
fn untyped_modification_component() {
    let c = promote_locally_discrete(&z2()).unwrap();
    let g = c.graph();
    let id = GraphMorphism::identity(g);
    let s = Transformation::identity(&id, g, g, &[0]);
    // the identity 2-cell on the non-identity loop does not run from s x to itself
    let md = Modification {
        s: s.clone(),
        t: s,
        components: [(0, vec![g.idn_of(1, 1)])].into_iter().collect(),
    };
    let r = check_modification(&md, &c, &c).unwrap();
    assert_eq!(
        r.get("modification.typing").unwrap().counterexamples[0].kind,
        "component-untyped"
    );
}

#[test]
fn category_of_categories_examples() {
    let single = build_cat_of_cats(&[monoid(1, |_, _| 0)], 2, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(single.structure.graph().counts(), vec![2, 1, 1, 1]);

    let pair = build_cat_of_cats(&[z2(), z2()], 2, DEFAULT_SEARCH_BOUND).unwrap();
    for (p, q, _) in &pair.functors {
        let expected =
            enumerate_functors(&pair.objects[*p], &pair.objects[*q], DEFAULT_SEARCH_BOUND).unwrap();
        let here = pair
            .functors
            .iter()
            .filter(|(a, b, _)| (a, b) == (p, q))
            .count();
        assert_eq!(here, expected.len());
    }
    assert!(check_category(&pair.structure).passed());

    // one object: the endofunctors of a single category
    let endo = build_cat_of_cats(&[left_zero()], 2, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(endo.structure.graph().count(0), 1);
    assert_eq!(
        endo.structure.graph().count(1),
        enumerate_functors(&left_zero(), &left_zero(), DEFAULT_SEARCH_BOUND)
            .unwrap()
            .len()
    );
    assert!(check_category(&endo.structure).passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn built_structures_satisfy_interchange(i in 0usize..9, j in 0usize..9) {
        let z = zoo();
        let cats = [z[i % z.len()].clone(), z[j % z.len()].clone()];
        let built = build_cat_of_cats(&cats, 2, DEFAULT_SEARCH_BOUND).unwrap();
        let report = check_category(&built.structure);
        prop_assert!(report.passed());
        prop_assert_eq!(report.get("interchange").unwrap().verdict, Verdict::Pass);
    }
}
