use std::fmt::Write;

use ncat_core::io::{CheckDoc, ReportDocument, Status};
use ncat_core::Verdict;

pub const SHOWN_PER_AXIOM: usize = 10;

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Error => "error",
        Status::Limit => "limit reached",
    }
}

fn check_line(out: &mut String, c: &CheckDoc, all: bool) {
    let verdict = match c.verdict {
        Verdict::Pass => "ok  ",
        Verdict::Fail => "FAIL",
        Verdict::NotApplicable => "n/a ",
    };
    let level = c.level.map(|l| format!(" (level {l})")).unwrap_or_default();
    let _ = write!(out, "  {verdict} {}{level}", c.axiom);
    if !c.counterexamples.is_empty() {
        let _ = write!(out, ": {} counterexample(s)", c.counterexamples.len());
    }
    out.push('\n');
    let shown = if all {
        c.counterexamples.len()
    } else {
        SHOWN_PER_AXIOM.min(c.counterexamples.len())
    };
    for cx in &c.counterexamples[..shown] {
        let _ = write!(out, "       {} [{}]", cx.kind, cx.cells.join(", "));
        if let Some(e) = &cx.expected {
            let _ = write!(out, " expected {e}");
        }
        if let Some(a) = &cx.actual {
            let _ = write!(out, " got {a}");
        }
        out.push('\n');
    }
    if shown < c.counterexamples.len() {
        let _ = writeln!(
            out,
            "       ... {} more (use --all)",
            c.counterexamples.len() - shown
        );
    }
    if !c.asymmetries.is_empty() {
        let _ = writeln!(out, "       {} one-sided tuple(s)", c.asymmetries.len());
    }
    for n in &c.notes {
        let _ = writeln!(out, "       note: {n}");
    }
}

/// Text summary of a report, ending with a newline.
pub fn human(r: &ReportDocument, all: bool) -> String {
    let mut out = String::new();
    if let Some(e) = &r.error {
        let _ = writeln!(out, "{}: error ({}): {}", r.command, e.kind, e.message);
        return out;
    }
    let _ = writeln!(out, "{}: {}", r.command, status_word(r.status));
    for c in &r.checks {
        check_line(&mut out, c, all);
    }
    if let Some(c) = r.counts {
        let tail = match r.exhausted {
            Some(false) => " (search incomplete)",
            _ => "",
        };
        let _ = writeln!(
            out,
            "  structures: {} raw, {} up to isomorphism{tail}",
            c.raw, c.iso
        );
    }
    for n in &r.notes {
        let _ = writeln!(out, "  {n}");
    }
    out
}
