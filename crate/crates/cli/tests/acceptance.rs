//! Acceptance criteria, one line of output per criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ncat_core::cobordism::{build_cob_truncation, glue, make_cylinder};
use ncat_core::composition::{check_category, check_interchange};
use ncat_core::enumeration::{
    brute_force_oracle, enumerate_structures, oracle_space, EnumSpec, DEFAULT_ORACLE_BOUND,
};
use ncat_core::generate::{corpus, loops_graph, random_graph, random_skeletal, z2_category};
use ncat_core::io::GraphDocument;
use ncat_core::morphisms::{
    build_cat_of_cats, check_transformation, enumerate_functors, enumerate_transformations,
    Transformation, DEFAULT_SEARCH_BOUND,
};
use ncat_core::{
    validate_graph, AxiomFlags, CategoryStructure, CompTable, NGraph, RawGraph, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn flags(list: &str) -> AxiomFlags {
    AxiomFlags::parse(list).unwrap()
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    if e < limit {
        Ok(())
    } else {
        Err(format!("{what} took {e:.2?}, limit {limit:?}"))
    }
}

// 1. Skeletal graphs carry one global structure.
fn skeletal_uniqueness() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut files = Vec::new();
    for k in 0..20 {
        let n = 1 + k % 2;
        let objects = rng.gen_range(1..=2);
        let tail = rng.gen_range(1..=2);
        let g = random_skeletal(&mut rng, n, objects, tail);
        ensure!(
            (0..=g.top()).all(|d| g.count(d) <= 4),
            "graph {k} has more than four cells in some dimension"
        );
        let path = dir.path().join(format!("s{k}.json"));
        std::fs::write(&path, GraphDocument::from_graph(&g).to_canonical_string())
            .map_err(|e| e.to_string())?;
        files.push(path);
    }
    let start = Instant::now();
    for f in &files {
        let r = common::run(&[
            "--json",
            "enumerate",
            "--flags",
            "global",
            f.to_str().unwrap(),
        ]);
        let report = r.json();
        ensure!(r.code == 0, "{}: exit {}", f.display(), r.code);
        ensure!(
            report["counts"]["raw"] == 1 && report["counts"]["iso"] == 1,
            "{}: counts {}",
            f.display(),
            report["counts"]
        );
    }
    within(start, Duration::from_secs(5), "20 enumerations")?;
    Ok(format!(
        "20 graphs, raw=1 iso=1 each, {:.2?}",
        start.elapsed()
    ))
}

/// Every 1-graph on up to three objects with up to three non-identity arrows, one per
/// relabeling class of objects.
fn one_graphs() -> Vec<NGraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for objects in 1..=3usize {
        let pairs: Vec<(usize, usize)> = (0..objects)
            .flat_map(|x| (0..objects).map(move |y| (x, y)))
            .collect();
        let perms = permutations(objects);
        for m in 0..=3usize {
            let mut choice = vec![0usize; m];
            loop {
                if choice.windows(2).all(|w| w[0] <= w[1]) {
                    let arrows: Vec<(usize, usize)> = choice.iter().map(|&i| pairs[i]).collect();
                    let key = perms
                        .iter()
                        .map(|p| {
                            let mut a: Vec<(usize, usize)> =
                                arrows.iter().map(|&(x, y)| (p[x], p[y])).collect();
                            a.sort();
                            a
                        })
                        .min()
                        .unwrap_or_default();
                    if seen.insert((objects, key)) {
                        let mut raw = RawGraph::new(1, 2);
                        for _ in 0..objects {
                            raw.add_object(None);
                        }
                        for &(x, y) in &arrows {
                            raw.add_cell(1, x, y, None);
                        }
                        out.push(validate_graph(raw).unwrap());
                    }
                }
                // odometer over arrow choices
                let mut i = 0;
                while i < m && choice[i] + 1 == pairs.len() {
                    choice[i] = 0;
                    i += 1;
                }
                if i == m {
                    break;
                }
                choice[i] += 1;
            }
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

// 2. Backtracking search and exhaustive search agree.
fn oracle_equivalence() -> Outcome {
    let vectors = [
        "",
        "global",
        "unital",
        "associative",
        "global,unital",
        "global,unital,associative",
        "unital,associative",
        "global,unital,associative,groupoid",
    ];
    let mut instances = 0;
    let mut slowest = Duration::ZERO;
    let mut largest = 0u128;
    for g in one_graphs() {
        for v in vectors {
            let spec = EnumSpec::all_levels(&g, flags(v));
            let size = oracle_space(&g, &spec).map_err(|e| e.to_string())?;
            if size > DEFAULT_ORACLE_BOUND {
                continue;
            }
            let start = Instant::now();
            let fast = enumerate_structures(&g, &spec).map_err(|e| e.to_string())?;
            let slow =
                brute_force_oracle(&g, &spec, DEFAULT_ORACLE_BOUND).map_err(|e| e.to_string())?;
            let took = start.elapsed();
            ensure!(
                fast.exhausted,
                "search on {:?} with {{{v}}} hit a limit",
                g.counts()
            );
            ensure!(
                fast.raw_count == slow.raw_count,
                "{:?} {{{v}}}: raw {} vs {}",
                g.counts(),
                fast.raw_count,
                slow.raw_count
            );
            ensure!(
                fast.canonical_forms == slow.canonical_forms,
                "{:?} {{{v}}}: canonical forms differ",
                g.counts()
            );
            ensure!(
                took < Duration::from_secs(60),
                "{:?} {{{v}}} took {took:?}",
                g.counts()
            );
            instances += 1;
            slowest = slowest.max(took);
            largest = largest.max(size);
        }
    }
    Ok(format!(
        "{instances} instances, largest space {largest}, slowest {slowest:.2?}"
    ))
}

/// Labeled monoid structures on `{0..k}` with identity 0 and their classes under
/// relabelings fixing 0, by brute force over all operation tables.
fn monoid_oracle(k: usize) -> (u64, usize) {
    let cells = k * k;
    let total = k.pow(cells as u32);
    let perms: Vec<Vec<usize>> = permutations(k - 1)
        .into_iter()
        .map(|p| {
            std::iter::once(0)
                .chain(p.into_iter().map(|x| x + 1))
                .collect()
        })
        .collect();
    let mut labeled = 0;
    let mut classes = BTreeSet::new();
    for code in 0..total {
        let mut op = vec![0; cells];
        let mut c = code;
        for slot in op.iter_mut() {
            *slot = c % k;
            c /= k;
        }
        let unit = (0..k).all(|x| op[x] == x && op[x * k] == x);
        let assoc = (0..k).all(|a| {
            (0..k).all(|b| (0..k).all(|c| op[op[a * k + b] * k + c] == op[a * k + op[b * k + c]]))
        });
        if !(unit && assoc) {
            continue;
        }
        labeled += 1;
        let canon = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0; k];
                for (i, &j) in p.iter().enumerate() {
                    inv[j] = i;
                }
                (0..cells)
                    .map(|i| p[op[inv[i / k] * k + inv[i % k]]])
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap();
        classes.insert(canon);
    }
    (labeled, classes.len())
}

/// Oracle results, recorded once: (labeled structures, isomorphism classes).
const MONOIDS_K2: (u64, usize) = (2, 2);
const MONOIDS_K3: (u64, usize) = (MONOIDS_K3_LABELED, 7);
const MONOIDS_K3_LABELED: u64 = 11;

// 3. Monoids of order 2 and 3.
fn monoid_counts() -> Outcome {
    let mut detail = Vec::new();
    for (k, frozen) in [(2, MONOIDS_K2), (3, MONOIDS_K3)] {
        let oracle = monoid_oracle(k);
        ensure!(
            oracle == frozen,
            "oracle for k={k} gives {oracle:?}, recorded {frozen:?}"
        );
        let g = loops_graph(k, 2);
        let r = enumerate_structures(
            &g,
            &EnumSpec::all_levels(&g, flags("global,unital,associative")),
        )
        .map_err(|e| e.to_string())?;
        ensure!(r.exhausted, "k={k}: search hit a limit");
        ensure!(
            r.iso_count == frozen.1,
            "k={k}: iso {} vs {}",
            r.iso_count,
            frozen.1
        );
        ensure!(
            r.raw_count == frozen.0,
            "k={k}: raw {} vs {}",
            r.raw_count,
            frozen.0
        );
        detail.push(format!("k={k}: iso {}", r.iso_count));
    }
    Ok(detail.join(", "))
}

// 4. Matching diagrams form a category.
fn cobordism_category() -> Outcome {
    let start = Instant::now();
    let mut triples = 0u64;
    for max in 0..=3 {
        let t = build_cob_truncation(max).map_err(|e| e.to_string())?;
        let mut s = t.structure.clone();
        s.flags = flags("global,unital,associative");
        let report = check_category(&s);
        ensure!(
            report.counterexample_count() == 0,
            "max_points={max}: {} counterexamples",
            report.counterexample_count()
        );
        ensure!(report.passed(), "max_points={max}: check failed");
        for m in &t.diagrams {
            ensure!(
                glue(&make_cylinder(m.source()), m).as_ref() == Ok(m),
                "left unit fails on {m}"
            );
            ensure!(
                glue(m, &make_cylinder(m.target())).as_ref() == Ok(m),
                "right unit fails on {m}"
            );
        }
        if max == 3 {
            let g = t.graph();
            for (x, y) in g.composable_pairs(0) {
                let xy = glue(&t.diagrams[x], &t.diagrams[y]).map_err(|e| e.to_string())?;
                for o in 0..g.count(0) {
                    for &z in g.hom(0, g.tgt_of(1, y), o) {
                        let yz = glue(&t.diagrams[y], &t.diagrams[z]).map_err(|e| e.to_string())?;
                        ensure!(
                            glue(&xy, &t.diagrams[z]) == glue(&t.diagrams[x], &yz),
                            "associativity fails on ({x}, {y}, {z})"
                        );
                        triples += 1;
                    }
                }
            }
        }
    }
    within(start, Duration::from_secs(30), "cobordism checks")?;
    Ok(format!(
        "max_points 0..=3 pass, {triples} triples associative, {:.2?}",
        start.elapsed()
    ))
}

fn category(g: NGraph, op: impl Fn(&NGraph, usize, usize) -> usize) -> CategoryStructure {
    let mut t = CompTable::new(0);
    for (a, b) in g.composable_pairs(0) {
        let c = op(&g, a, b);
        t.insert(&g, a, b, c).unwrap();
    }
    CategoryStructure::new(g, flags("global,unital,associative"))
        .with_vtable(t)
        .unwrap()
}

/// Composition in a category with no composites beyond identities.
fn free(g: &NGraph, a: usize, b: usize) -> usize {
    if g.identity_preimage(1, a).is_some() {
        b
    } else {
        a
    }
}

fn arrow() -> CategoryStructure {
    let mut raw = RawGraph::new(1, 2);
    let x = raw.add_object(Some("x"));
    let y = raw.add_object(Some("y"));
    raw.add_cell(1, x, y, Some("f"));
    category(validate_graph(raw).unwrap(), free)
}

/// Two objects and a pair of mutually inverse arrows.
fn iso_pair() -> CategoryStructure {
    let mut raw = RawGraph::new(1, 2);
    let x = raw.add_object(Some("x"));
    let y = raw.add_object(Some("y"));
    let f = raw.add_cell(1, x, y, Some("f"));
    let g_ = raw.add_cell(1, y, x, Some("g"));
    let g = validate_graph(raw).unwrap();
    category(g, move |g, a, b| match (a, b) {
        (a, b) if a == f && b == g_ => g.idn_of(0, x),
        (a, b) if a == g_ && b == f => g.idn_of(0, y),
        (a, b) => free(g, a, b),
    })
}

fn left_zero() -> CategoryStructure {
    category(loops_graph(3, 2), |g, a, b| {
        if g.identity_preimage(1, a).is_some() {
            b
        } else {
            a
        }
    })
}

fn chain() -> CategoryStructure {
    let mut raw = RawGraph::new(1, 2);
    let x = raw.add_object(Some("x"));
    let y = raw.add_object(Some("y"));
    let z = raw.add_object(Some("z"));
    let f = raw.add_cell(1, x, y, Some("f"));
    let g_ = raw.add_cell(1, y, z, Some("g"));
    let h = raw.add_cell(1, x, z, Some("h"));
    category(validate_graph(raw).unwrap(), move |g, a, b| {
        if a == f && b == g_ {
            h
        } else {
            free(g, a, b)
        }
    })
}

// 5. Interchange holds in a category of categories and detects every perturbation.
fn interchange_witness() -> Outcome {
    let pairs = [
        (z2_category(), z2_category()),
        (z2_category(), arrow()),
        (iso_pair(), z2_category()),
    ];
    let (mut perturbations, mut by_interchange, mut typed_only) = (0u64, 0u64, 0u64);
    for (a, b) in pairs {
        let built =
            build_cat_of_cats(&[a, b], 2, DEFAULT_SEARCH_BOUND).map_err(|e| e.to_string())?;
        let s = &built.structure;
        let clean = check_interchange(s, 0).map_err(|e| e.to_string())?;
        ensure!(
            clean.verdict == Verdict::Pass && clean.counterexamples.is_empty(),
            "unperturbed structure fails interchange"
        );
        ensure!(
            check_category(s).counterexample_count() == 0,
            "unperturbed structure fails the full check"
        );
        let g = s.graph();
        let h = s.htable(0).ok_or("no horizontal table")?;
        for (&(x, y), &value) in h.entries() {
            for other in (0..g.count(2)).filter(|&c| c != value) {
                let mut t = h.clone();
                t.insert(g, x, y, other).map_err(|e| e.to_string())?;
                let perturbed = s.clone().with_htable(t).map_err(|e| e.to_string())?;
                let interchange = check_interchange(&perturbed, 0)
                    .map_err(|e| e.to_string())?
                    .counterexamples
                    .len();
                let full = check_category(&perturbed);
                let name = |c| g.name(ncat_core::CellId::new(2, c)).to_owned();
                ensure!(
                    full.counterexample_count() > 0,
                    "setting h({}, {}) to {} instead of {} goes unnoticed",
                    name(x),
                    name(y),
                    name(other),
                    name(value)
                );
                let typed = full
                    .get("typing.horizontal")
                    .is_some_and(|r| r.counterexamples.is_empty());
                if interchange > 0 {
                    by_interchange += 1;
                } else if !typed {
                    typed_only += 1;
                } else {
                    return Err(format!(
                        "well-typed perturbation h({}, {}) = {} escapes interchange",
                        name(x),
                        name(y),
                        name(other)
                    ));
                }
                perturbations += 1;
            }
        }
    }
    Ok(format!(
        "3 constructions pass; {perturbations} perturbations detected, {by_interchange} by interchange, {typed_only} ill-typed ones by typing"
    ))
}

// 6. Transformations are exactly the natural raw assignments.
fn naturality_oracle() -> Outcome {
    let cats = [z2_category(), arrow(), iso_pair(), left_zero(), chain()];
    let mut pairs = 0;
    let mut found = 0;
    for ce in &cats {
        for cf in &cats {
            let functors =
                enumerate_functors(ce, cf, DEFAULT_SEARCH_BOUND).map_err(|e| e.to_string())?;
            let objects = ce.graph().count(0);
            let arrows = cf.graph().count(1);
            for f in &functors {
                for g in &functors {
                    let fast: BTreeSet<Vec<usize>> =
                        enumerate_transformations(f, g, ce, cf, DEFAULT_SEARCH_BOUND)
                            .map_err(|e| e.to_string())?
                            .into_iter()
                            .map(|t| t.components[&0].clone())
                            .collect();
                    let mut slow = BTreeSet::new();
                    for code in 0..arrows.pow(objects as u32) {
                        let mut comps = Vec::with_capacity(objects);
                        let mut c = code;
                        for _ in 0..objects {
                            comps.push(c % arrows);
                            c /= arrows;
                        }
                        let t = Transformation::new(f.clone(), g.clone(), comps.clone());
                        if check_transformation(&t, ce, cf)
                            .map_err(|e| e.to_string())?
                            .passed()
                        {
                            slow.insert(comps);
                        }
                    }
                    ensure!(
                        fast == slow,
                        "transformation sets differ ({} vs {})",
                        fast.len(),
                        slow.len()
                    );
                    pairs += 1;
                    found += fast.len();
                }
            }
        }
    }
    Ok(format!(
        "{pairs} functor pairs, {found} transformations, sets equal"
    ))
}

// 7. Opposite is an involution.
fn opposite_involution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0;
    for k in 0..50 {
        let n = rng.gen_range(1..=3);
        let tail = rng.gen_range(1..=2);
        let objects = rng.gen_range(1..=4);
        let g = random_graph(&mut rng, n, tail, objects, 4);
        let before = GraphDocument::from_graph(&g).to_canonical_string();
        for level in 1..=g.top() {
            let twice = g
                .opposite(level)
                .and_then(|o| o.opposite(level))
                .map_err(|e| e.to_string())?;
            ensure!(
                GraphDocument::from_graph(&twice).to_canonical_string() == before,
                "graph {k}, level {level}"
            );
            checks += 1;
        }
    }
    Ok(format!("50 graphs, {checks} levels"))
}

// 8. Canonical serialization round-trips and exit codes follow reports.
fn format_round_trip() -> Outcome {
    let docs = corpus();
    for (name, doc) in &docs {
        let bytes = doc.to_canonical_string();
        let parsed = GraphDocument::parse_str(&bytes).map_err(|e| format!("{name}: {e}"))?;
        ensure!(&parsed == doc, "{name}: parse(serialize(doc)) differs");
        ensure!(
            parsed.to_canonical_string() == bytes,
            "{name}: bytes differ"
        );
        parsed.resolve().map_err(|e| format!("{name}: {e}"))?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let files = common::write_corpus(dir.path());
    for f in &files {
        let bytes = std::fs::read_to_string(f).map_err(|e| e.to_string())?;
        let doc = GraphDocument::parse_str(&bytes).map_err(|e| format!("{}: {e}", f.display()))?;
        ensure!(
            doc.to_canonical_string() == bytes,
            "{}: file bytes differ",
            f.display()
        );
    }
    let scenarios = common::scenarios(dir.path());
    ensure!(scenarios.len() == 10, "expected 10 scenarios");
    for sc in &scenarios {
        let r = common::run_scenario(sc);
        let report = r.json();
        ensure!(
            r.code == sc.code,
            "{}: exit {} expected {}",
            sc.name,
            r.code,
            sc.code
        );
        ensure!(
            common::expected_code(&report) == r.code,
            "{}: status {} but exit {}",
            sc.name,
            report["status"],
            r.code
        );
    }
    Ok(format!(
        "{} documents, {} files, 10 scenarios",
        docs.len(),
        files.len()
    ))
}

// 9. Adding axioms never adds structures.
fn flag_monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut graphs = vec![
        loops_graph(2, 2),
        loops_graph(3, 2),
        arrow().graph().clone(),
        iso_pair().graph().clone(),
    ];
    while graphs.len() < 10 {
        let objects = rng.gen_range(1..=3);
        graphs.push(random_graph(&mut rng, 1, 2, objects, 2));
    }
    let mut rows = Vec::new();
    for g in &graphs {
        let mut counts = Vec::new();
        for v in ["global", "global,unital", "global,unital,associative"] {
            let r = enumerate_structures(g, &EnumSpec::all_levels(g, flags(v)))
                .map_err(|e| e.to_string())?;
            ensure!(r.exhausted, "search hit a limit on {:?}", g.counts());
            counts.push(r.raw_count);
        }
        ensure!(
            counts[0] >= counts[1] && counts[1] >= counts[2],
            "{:?} on {:?}",
            counts,
            g.counts()
        );
        rows.push(format!("{}/{}/{}", counts[0], counts[1], counts[2]));
    }
    Ok(rows.join(" "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("skeletal uniqueness", skeletal_uniqueness),
        ("oracle equivalence", oracle_equivalence),
        ("monoid counts", monoid_counts),
        ("cobordism category", cobordism_category),
        ("interchange witness", interchange_witness),
        ("naturality oracle", naturality_oracle),
        ("opposite involution", opposite_involution),
        ("format round-trip", format_round_trip),
        ("flag monotonicity", flag_monotonicity),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail}) [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
