use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use ncat_core::cobordism::{build_cob_truncation, gen_sets_graph, CobError};
use ncat_core::composition::{check_category, check_cocategory};
use ncat_core::enumeration::{
    brute_force_oracle, enumerate_structures, oracle_space, verify_skeletal_uniqueness, EnumError,
    EnumSpec, Limits, DEFAULT_ORACLE_BOUND,
};
use ncat_core::generate::{corpus, random_graph, skeletal_graph};
use ncat_core::io::{
    load_path, resolve_modification, resolve_morphism, resolve_transformation, Counts,
    GraphDocument, IoError, Loaded, ReportDocument,
};
use ncat_core::morphisms::{
    check_contravariant, check_functor, check_graph_morphism, check_modification,
    check_transformation, MorphismError,
};
use ncat_core::{AxiomFlags, AxiomReport, AxiomResult, CompTable, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{Command, EnumerateArgs, GenCommand, Target};

const DEFAULT_FLAGS: &str = "global,unital,associative";

pub struct Outcome {
    pub report: ReportDocument,
    /// Printed before the summary in text mode.
    pub text: Option<String>,
}

impl Outcome {
    fn finished(mut report: ReportDocument) -> Self {
        report.finish();
        Outcome { report, text: None }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::new(e.kind(), e.to_string())
    }
}

impl From<CobError> for CliError {
    fn from(e: CobError) -> Self {
        CliError::new("bad-argument", e.to_string())
    }
}

fn morphism_error(e: MorphismError) -> CliError {
    let kind = match e {
        MorphismError::DimensionMismatch { .. }
        | MorphismError::ShapeMismatch { .. }
        | MorphismError::TailMismatch { .. } => "shape-mismatch",
        MorphismError::OutOfRange { .. } => "out-of-range",
        MorphismError::WeakeningUnsupported => "unsupported",
        MorphismError::EndpointMismatch => "endpoint-mismatch",
        MorphismError::LevelUnavailable { .. } => "level-unavailable",
        MorphismError::SpaceTooLarge { .. } => "space-too-large",
        MorphismError::NotACategory { .. } => "not-a-category",
        MorphismError::NotClosed(_) => "not-closed",
        MorphismError::Graph(_) => "bad-cells",
    };
    CliError::new(kind, e.to_string())
}

fn enum_error(e: EnumError) -> CliError {
    let kind = match e {
        EnumError::LevelUnavailable { .. } => "level-unavailable",
        EnumError::SpaceTooLarge { .. } => "space-too-large",
        EnumError::NotSkeletal => "not-skeletal",
        EnumError::TooManyAutomorphisms { .. } => "too-many-automorphisms",
    };
    CliError::new(kind, e.to_string())
}

fn parse_flags(list: &str) -> Result<AxiomFlags, CliError> {
    AxiomFlags::parse(list).map_err(|m| CliError::new("bad-argument", m))
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    Ok(load_path(path)?)
}

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Validate { file } => validate(file),
        Command::Check { file, flags } => check(file, flags.as_deref()),
        Command::Enumerate(args) => enumerate(args),
        Command::Skeletal { file } => skeletal(file),
        Command::Opposite {
            file,
            level,
            output,
        } => {
            let loaded = load(file)?;
            let op = loaded
                .graph()
                .opposite(*level)
                .map_err(|e| CliError::new("bad-argument", e.to_string()))?;
            let mut out = document(
                "opposite",
                &GraphDocument::from_graph(&op),
                output.as_deref(),
            )?;
            if !loaded.doc.tables.is_empty() {
                out.report
                    .notes
                    .push("tables were dropped; only the graph is reversed".into());
            }
            Ok(out)
        }
        Command::Hom { file, x, y, output } => {
            let loaded = load(file)?;
            let g = loaded.graph();
            let find = |id: &str| {
                g.find(id)
                    .ok_or_else(|| CliError::from(IoError::DanglingReference(id.to_owned())))
            };
            let h = g
                .hom_graph(find(x)?, find(y)?)
                .map_err(|e| CliError::new("bad-cells", e.to_string()))?;
            document("hom", &GraphDocument::from_graph(&h), output.as_deref())
        }
        Command::Morphism { file, name, target } => morphism(file, name, target),
        Command::Functor { file, name, target } => functor(file, name, target),
        Command::Nat {
            file,
            t,
            f,
            g,
            target,
        } => nat(file, t, f.as_deref(), g.as_deref(), target),
        Command::Modification {
            file,
            m,
            s,
            t,
            target,
        } => modification(file, m, s.as_deref(), t.as_deref(), target),
        Command::Gen(g) => generate(g),
    }
}

fn validate(file: &Path) -> Result<Outcome, CliError> {
    let mut report = ReportDocument::new("validate");
    match load(file) {
        Ok(loaded) => {
            let g = loaded.graph();
            report.add_checks(
                &AxiomReport::single(AxiomResult::from_counterexamples("graph", None, Vec::new())),
                g,
                g,
            );
            report
                .notes
                .push(format!("cells per dimension from -1: {:?}", g.counts()));
            report.data = Some(json!({
                "n": g.n(),
                "counts": g.counts(),
                "skeletal": g.is_skeletal(),
                "tables": loaded.doc.tables.len(),
            }));
        }
        Err(CliError {
            kind: "invalid-graph",
            message,
        }) => {
            let check = ncat_core::io::CheckDoc {
                axiom: "graph".into(),
                level: None,
                verdict: Verdict::Fail,
                counterexamples: Vec::new(),
                asymmetries: Vec::new(),
                notes: vec![message],
            };
            report.checks.push(check);
        }
        Err(e) => return Err(e),
    }
    Ok(Outcome::finished(report))
}

fn check(file: &Path, flags: Option<&str>) -> Result<Outcome, CliError> {
    let loaded = load(file)?;
    let mut s = loaded.structure.clone();
    s.flags = match (flags, loaded.doc.flags) {
        (Some(list), _) => parse_flags(list)?,
        (None, Some(f)) => f,
        (None, None) => parse_flags(DEFAULT_FLAGS)?,
    };
    // a level without a table in the file has the empty table
    for level in 0..s.graph().top() {
        if s.vtable(level).is_none() {
            s.set_vtable(CompTable::new(level))
                .map_err(|e| CliError::new("bad-table", e.to_string()))?;
        }
    }
    let g = s.graph();
    let mut report = ReportDocument::new("check");
    let mut axioms = check_category(&s);
    for t in &loaded.cotables {
        axioms.push(check_cocategory(g, t));
    }
    report.add_checks(&axioms, g, g);
    report.data = Some(json!({ "flags": s.flags.names() }));
    Ok(Outcome::finished(report))
}

fn enumerate(args: &EnumerateArgs) -> Result<Outcome, CliError> {
    let loaded = load(&args.file)?;
    let g = loaded.graph();
    let flags = match (&args.flags, loaded.doc.flags) {
        (Some(list), _) => parse_flags(list)?,
        (None, Some(f)) => f,
        (None, None) => parse_flags(DEFAULT_FLAGS)?,
    };
    let mut spec = EnumSpec::all_levels(g, flags).horizontal(args.horizontal);
    if let Some(levels) = &args.levels {
        spec = spec.levels(levels.iter().copied());
    }
    spec.maximal_only = args.maximal;
    spec.limits = Limits::default();
    if let Some(n) = args.max_nodes {
        spec.limits.max_nodes = n;
    }
    if let Some(secs) = args.time_budget {
        if !(secs.is_finite() && secs >= 0.0) {
            return Err(CliError::new(
                "bad-argument",
                format!("time budget {secs} is not a duration"),
            ));
        }
        spec.limits.time_budget = Duration::from_secs_f64(secs);
    }
    let result = enumerate_structures(g, &spec).map_err(enum_error)?;

    let mut report = ReportDocument::new("enumerate");
    report.counts = Some(Counts {
        raw: result.raw_count,
        iso: result.iso_count as u64,
    });
    report.exhausted = Some(result.exhausted);
    if !result.exhausted {
        report.notes.push(format!(
            "stopped after {} nodes; counts are lower bounds",
            result.nodes
        ));
    }
    if args.oracle {
        let mut axioms = AxiomReport::default();
        let size = oracle_space(g, &spec).map_err(enum_error)?;
        if size > DEFAULT_ORACLE_BOUND {
            axioms.push(AxiomResult::not_applicable(
                "oracle",
                None,
                format!("exhaustive space of {size} assignments exceeds {DEFAULT_ORACLE_BOUND}"),
            ));
        } else {
            let slow = brute_force_oracle(g, &spec, DEFAULT_ORACLE_BOUND).map_err(enum_error)?;
            let mut r = AxiomResult::from_counterexamples("oracle", None, Vec::new());
            r.notes.push(format!(
                "exhaustive search: {} raw, {} up to isomorphism",
                slow.raw_count, slow.iso_count
            ));
            if !result.exhausted {
                r.verdict = Verdict::NotApplicable;
            } else if slow.raw_count != result.raw_count
                || slow.canonical_forms != result.canonical_forms
            {
                r.verdict = Verdict::Fail;
            }
            axioms.push(r);
        }
        report.add_checks(&axioms, g, g);
    }
    let mut written = Vec::new();
    if let Some(dir) = &args.emit {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::new("io", format!("{}: {e}", dir.display())))?;
        for (k, s) in result.representatives.iter().enumerate() {
            let path = dir.join(format!("structure-{k:04}.json"));
            write_file(
                &path,
                &GraphDocument::from_structure(s).to_canonical_string(),
            )?;
            written.push(path.display().to_string());
        }
        if result.representatives.len() < result.iso_count {
            report.notes.push(format!(
                "wrote the first {} classes only",
                result.representatives.len()
            ));
        }
    }
    report.data = Some(json!({
        "flags": flags.names(),
        "levels": spec.levels,
        "horizontal_levels": spec.horizontal_levels(),
        "maximal": spec.maximal_only,
        "nodes": result.nodes,
        "branch_points": result.branch_points,
        "files": written,
    }));
    Ok(Outcome::finished(report))
}

fn skeletal(file: &Path) -> Result<Outcome, CliError> {
    let loaded = load(file)?;
    let g = loaded.graph();
    let mut report = ReportDocument::new("skeletal");
    let mut axioms = AxiomReport::default();
    if !g.is_skeletal() {
        axioms.push(
            AxiomResult::from_counterexamples("skeletal", None, Vec::new())
                .with_note("some hom-set does not have exactly one cell"),
        );
        axioms.results[0].verdict = Verdict::Fail;
        report.add_checks(&axioms, g, g);
        return Ok(Outcome::finished(report));
    }
    let cert = verify_skeletal_uniqueness(g).map_err(enum_error)?;
    let counts = enumerate_structures(g, &EnumSpec::all_levels(g, parse_flags("global")?))
        .map_err(enum_error)?;
    axioms.push(AxiomResult::from_counterexamples(
        "skeletal",
        None,
        Vec::new(),
    ));
    let mut unique =
        AxiomResult::from_counterexamples("uniqueness", None, Vec::new()).with_note(format!(
            "{} structure(s), {} branch point(s)",
            cert.raw_count, cert.branch_points
        ));
    if !cert.unique {
        unique.verdict = Verdict::Fail;
    }
    axioms.push(unique);
    report.add_checks(&axioms, g, g);
    report.counts = Some(Counts {
        raw: counts.raw_count,
        iso: counts.iso_count as u64,
    });
    report.exhausted = Some(counts.exhausted);
    let mut out = Outcome::finished(report);
    if let Some(s) = cert.structure {
        out.report.data = Some(
            serde_json::to_value(GraphDocument::from_structure(&s)).expect("documents serialize"),
        );
    }
    Ok(out)
}

fn codomain(file: &Path, target: &Target) -> Result<(Loaded, Loaded), CliError> {
    let dom = load(file)?;
    let cod = match &target.codomain {
        Some(p) => load(p)?,
        None => dom.clone(),
    };
    Ok((dom, cod))
}

fn morphism(file: &Path, name: &str, target: &Target) -> Result<Outcome, CliError> {
    let (dom, cod) = codomain(file, target)?;
    let (e, f) = (dom.graph(), cod.graph());
    let (m, variance) = resolve_morphism(dom.doc.morphism(name)?, e, f)?;
    let axioms = if variance.contravariant_levels.is_empty() && !variance.weakened {
        check_graph_morphism(e, f, &m)
    } else {
        check_contravariant(e, f, &m, &variance)
    }
    .map_err(morphism_error)?;
    let mut report = ReportDocument::new("morphism");
    report.add_checks(&axioms, e, f);
    Ok(Outcome::finished(report))
}

fn functor(file: &Path, name: &str, target: &Target) -> Result<Outcome, CliError> {
    let (dom, cod) = codomain(file, target)?;
    let (e, f) = (dom.graph(), cod.graph());
    let (m, variance) = resolve_morphism(dom.doc.morphism(name)?, e, f)?;
    if !variance.contravariant_levels.is_empty() || variance.weakened {
        return Err(CliError::new(
            "unsupported",
            "functor checks need a covariant morphism; use `morphism` for the graph conditions",
        ));
    }
    let axioms = check_functor(&m, &dom.structure, &cod.structure).map_err(morphism_error)?;
    let mut report = ReportDocument::new("functor");
    report.add_checks(&axioms, e, f);
    Ok(Outcome::finished(report))
}

fn nat(
    file: &Path,
    t: &str,
    f: Option<&str>,
    g: Option<&str>,
    target: &Target,
) -> Result<Outcome, CliError> {
    let (dom, cod) = codomain(file, target)?;
    let mut section = dom.doc.transformation(t)?.clone();
    if let Some(f) = f {
        section.f = f.to_owned();
    }
    if let Some(g) = g {
        section.g = g.to_owned();
    }
    let tr = resolve_transformation(&section, &dom.doc, dom.graph(), cod.graph())?;
    let axioms =
        check_transformation(&tr, &dom.structure, &cod.structure).map_err(morphism_error)?;
    let mut report = ReportDocument::new("nat");
    report.add_checks(&axioms, dom.graph(), cod.graph());
    Ok(Outcome::finished(report))
}

fn modification(
    file: &Path,
    m: &str,
    s: Option<&str>,
    t: Option<&str>,
    target: &Target,
) -> Result<Outcome, CliError> {
    let (dom, cod) = codomain(file, target)?;
    let mut section = dom.doc.modification(m)?.clone();
    if let Some(s) = s {
        section.s = s.to_owned();
    }
    if let Some(t) = t {
        section.t = t.to_owned();
    }
    let md = resolve_modification(&section, &dom.doc, dom.graph(), cod.graph())?;
    let axioms = check_modification(&md, &dom.structure, &cod.structure).map_err(morphism_error)?;
    let mut report = ReportDocument::new("modification");
    report.add_checks(&axioms, dom.graph(), cod.graph());
    Ok(Outcome::finished(report))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

/// Reports a generated document, printing it or writing it to `output`.
fn document(
    command: &str,
    doc: &GraphDocument,
    output: Option<&Path>,
) -> Result<Outcome, CliError> {
    let text = doc.to_canonical_string();
    let mut report = ReportDocument::new(command);
    let printed = match output {
        Some(path) => {
            write_file(path, &text)?;
            report.notes.push(format!("wrote {}", path.display()));
            None
        }
        None => Some(text),
    };
    report.data = Some(serde_json::to_value(doc).expect("documents serialize"));
    report.finish();
    Ok(Outcome {
        report,
        text: printed,
    })
}

fn check_tail(tail: usize) -> Result<(), CliError> {
    if tail == 1 || tail == 2 {
        Ok(())
    } else {
        Err(CliError::new(
            "bad-argument",
            format!("tail must be 1 or 2, got {tail}"),
        ))
    }
}

fn generate(cmd: &GenCommand) -> Result<Outcome, CliError> {
    match cmd {
        GenCommand::Cob {
            max_points,
            concat,
            output,
        } => {
            let t = build_cob_truncation(*max_points)?;
            let s = if *concat {
                t.structure
                    .clone()
                    .with_vtable(t.concatenation_table())
                    .map_err(|e| CliError::new("bad-table", e.to_string()))?
            } else {
                t.structure.clone()
            };
            document("gen", &GraphDocument::from_structure(&s), output.as_deref())
        }
        GenCommand::Sets { max_size, output } => {
            if *max_size == 0 {
                return Err(CliError::new("bad-argument", "max-size must be at least 1"));
            }
            let s = gen_sets_graph(*max_size)?;
            document(
                "gen",
                &GraphDocument::from_structure(&s.structure),
                output.as_deref(),
            )
        }
        GenCommand::Skeletal {
            n,
            objects,
            tail,
            output,
        } => {
            check_tail(*tail)?;
            if *n == 0 {
                return Err(CliError::new("bad-argument", "n must be at least 1"));
            }
            document(
                "gen",
                &GraphDocument::from_graph(&skeletal_graph(*n, *objects, *tail)),
                output.as_deref(),
            )
        }
        GenCommand::Random {
            seed,
            n,
            tail,
            objects,
            extra,
            output,
        } => {
            check_tail(*tail)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let g = random_graph(&mut rng, *n, *tail, *objects, *extra);
            document("gen", &GraphDocument::from_graph(&g), output.as_deref())
        }
        GenCommand::Corpus { dir } => {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::new("io", format!("{}: {e}", dir.display())))?;
            let mut files: Vec<PathBuf> = Vec::new();
            for (name, doc) in corpus() {
                let path = dir.join(format!("{name}.json"));
                write_file(&path, &doc.to_canonical_string())?;
                files.push(path);
            }
            let mut report = ReportDocument::new("gen");
            report
                .notes
                .push(format!("wrote {} files to {}", files.len(), dir.display()));
            report.data = Some(
                json!({ "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>() }),
            );
            Ok(Outcome::finished(report))
        }
    }
}
