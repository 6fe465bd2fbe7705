use ncat_core::composition::check_category;
use ncat_core::generate::{corpus, random_skeletal, z2_category};
use ncat_core::io::{resolve_morphism, resolve_transformation, GraphDocument, IoError};
use ncat_core::morphisms::{check_functor, check_transformation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn corpus_round_trips_byte_for_byte() {
    let docs = corpus();
    assert!(docs.len() > 40);
    for (name, doc) in &docs {
        let bytes = doc.to_canonical_string();
        let parsed = GraphDocument::parse_str(&bytes).unwrap();
        assert_eq!(&parsed, doc, "{name}");
        assert_eq!(parsed.to_canonical_string(), bytes, "{name}");
        let loaded = parsed.resolve().unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = if doc.tables.is_empty() && doc.flags.is_none() {
            GraphDocument::from_graph(loaded.graph())
        } else {
            GraphDocument::from_structure(&loaded.structure)
        };
        let mut expected = doc.clone();
        expected.morphisms.clear();
        expected.transformations.clear();
        assert_eq!(again, expected, "{name}");
    }
}

#[test]
fn constructed_structures_in_the_corpus_pass_their_flags() {
    for (name, doc) in corpus() {
        let loaded = doc.resolve().unwrap();
        if name.starts_with("cob-") && name.ends_with("concat") {
            // the partial concatenation table is not global
            continue;
        }
        if doc.flags.is_some() {
            assert!(check_category(&loaded.structure).passed(), "{name}");
        }
    }
}

#[test]
fn morphism_sections_resolve_and_pass() {
    let (_, doc) = corpus()
        .into_iter()
        .find(|(n, _)| n == "z2-with-morphisms")
        .unwrap();
    let loaded = doc.resolve().unwrap();
    let g = loaded.graph();
    assert_eq!(doc.morphisms.len(), 2);
    for m in &doc.morphisms {
        let (f, _) = resolve_morphism(m, g, g).unwrap();
        assert!(check_functor(&f, &loaded.structure, &loaded.structure)
            .unwrap()
            .passed());
    }
    assert_eq!(doc.transformations.len(), 2);
    for t in &doc.transformations {
        let t = resolve_transformation(t, &doc, g, g).unwrap();
        assert!(
            check_transformation(&t, &loaded.structure, &loaded.structure)
                .unwrap()
                .passed()
        );
    }
}

#[test]
fn different_indexings_give_different_bytes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_skeletal(&mut rng, 1, 3, 2);
    let mut b = random_skeletal(&mut rng, 1, 3, 2);
    while GraphDocument::from_graph(&b).dims == GraphDocument::from_graph(&a).dims {
        b = random_skeletal(&mut rng, 1, 3, 2);
    }
    // same shape, same cell ids, different assignment of ids to arrows
    assert_eq!(a.counts(), b.counts());
    assert_ne!(
        GraphDocument::from_graph(&a).to_canonical_string(),
        GraphDocument::from_graph(&b).to_canonical_string()
    );
}

#[test]
fn table_errors_are_reported() {
    let mut doc = GraphDocument::from_structure(&z2_category());
    doc.tables[0].entries[0] = vec!["a1".into(), "a1".into()];
    assert!(matches!(doc.resolve(), Err(IoError::BadEntry { .. })));

    let mut doc = GraphDocument::from_structure(&z2_category());
    doc.tables[0].entries[0][2] = "nowhere".into();
    assert_eq!(
        doc.resolve().unwrap_err(),
        IoError::DanglingReference("nowhere".into())
    );

    let mut doc = GraphDocument::from_structure(&z2_category());
    doc.tables[0].entries[0][2] = "x".into();
    assert!(matches!(doc.resolve(), Err(IoError::WrongDimension { .. })));
}

#[test]
fn unknown_fields_are_rejected() {
    let doc = GraphDocument::from_structure(&z2_category());
    let text = doc
        .to_canonical_string()
        .replacen('{', "{\n  \"extra\": 1,", 1);
    assert!(matches!(
        GraphDocument::parse_str(&text),
        Err(IoError::Syntax { .. })
    ));
}
