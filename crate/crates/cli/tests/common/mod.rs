#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub fn ncat() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ncat"));
    c.env_remove("NCAT_MAX_NODES")
        .env_remove("NCAT_TIME_BUDGET_SECS");
    c
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.stdout))
    }
}

pub fn run(args: &[&str]) -> Run {
    run_with(ncat().args(args))
}

pub fn run_with(cmd: &mut Command) -> Run {
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(name);
    let text = std::fs::read_to_string(&path).expect("schema file present");
    jsonschema::validator_for(&serde_json::from_str(&text).expect("schema is JSON"))
        .expect("schema compiles")
}

pub fn report_schema() -> jsonschema::Validator {
    schema("report.schema.json")
}

pub fn graph_schema() -> jsonschema::Validator {
    schema("graph.schema.json")
}

pub fn schema_errors(v: &jsonschema::Validator, doc: &Value) -> Vec<String> {
    v.iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect()
}

/// The exit code a report's status implies.
pub fn expected_code(report: &Value) -> i32 {
    match report["status"].as_str() {
        Some("pass") => 0,
        Some("fail") => 1,
        Some("error") => 2,
        Some("limit") => 3,
        other => panic!("unknown status {other:?}"),
    }
}

/// Writes the example corpus into `dir` and returns the file paths.
pub fn write_corpus(dir: &Path) -> Vec<PathBuf> {
    let r = run(&["gen", "corpus", dir.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
}

/// Name of the identity functor and of another one in the morphism example.
pub fn z2_functor_names(doc: &Value) -> (String, String) {
    let ms = doc["morphisms"].as_array().unwrap();
    let is_id = |m: &Value| {
        m["comps"]
            .as_object()
            .unwrap()
            .iter()
            .all(|(k, v)| v.as_str() == Some(k.as_str()))
    };
    let id = ms.iter().find(|m| is_id(m)).unwrap()["name"]
        .as_str()
        .unwrap()
        .to_owned();
    let other = ms.iter().find(|m| !is_id(m)).unwrap()["name"]
        .as_str()
        .unwrap()
        .to_owned();
    (id, other)
}

pub struct Scenario {
    pub name: &'static str,
    pub args: Vec<String>,
    pub env: Vec<(&'static str, &'static str)>,
    pub code: i32,
}

/// Scripted invocations with the exit code each must produce, over a corpus in `dir`.
pub fn scenarios(dir: &Path) -> Vec<Scenario> {
    let f = |name: &str| dir.join(format!("{name}.json")).display().to_string();
    let z2 = f("z2-with-morphisms");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&z2).unwrap()).unwrap();
    let (id, other) = z2_functor_names(&doc);
    let broken = dir.join("broken.json");
    std::fs::write(&broken, "{\n  \"format_version\": \"1\",\n  \"n\": ,\n}").unwrap();
    let s = |name, args: &[&str], code| Scenario {
        name,
        args: args.iter().map(|a| a.to_string()).collect(),
        env: Vec::new(),
        code,
    };
    let mut out = vec![
        s(
            "check a cobordism truncation",
            &["check", "--flags", "global,unital,associative", &f("cob-2")],
            0,
        ),
        s(
            "enumerate on a skeletal graph",
            &["enumerate", "--flags", "global", &f("skeletal-1-3-2")],
            0,
        ),
        s(
            "skeletal certificate",
            &["skeletal", &f("skeletal-2-2-1")],
            0,
        ),
        s("natural transformation", &["nat", &z2, "--t", "T1"], 0),
        s(
            "transformation with a bad component",
            &["nat", &z2, "--t", "T1", "--f", &id, "--g", &other],
            1,
        ),
        s(
            "global check on a bare graph",
            &["check", "--flags", "global", &f("skeletal-1-2-2")],
            1,
        ),
        s(
            "syntax error",
            &["validate", &broken.display().to_string()],
            2,
        ),
        s("missing section", &["functor", &z2, "--name", "nope"], 2),
        s(
            "bad level",
            &["opposite", "--level", "5", &f("skeletal-1-2-2")],
            2,
        ),
    ];
    out.push(Scenario {
        env: vec![("NCAT_MAX_NODES", "5")],
        ..s(
            "node budget from the environment",
            &["enumerate", "--flags", "unital", &f("monoid-3-0")],
            3,
        )
    });
    out
}

pub fn run_scenario(sc: &Scenario) -> Run {
    let mut cmd = ncat();
    cmd.arg("--json").args(&sc.args);
    for (k, v) in &sc.env {
        cmd.env(k, v);
    }
    run_with(&mut cmd)
}
