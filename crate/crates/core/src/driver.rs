//! The `check`, `run` and `explain` commands, independent of any terminal.
//! Each returns the exit code and the text destined for stdout and stderr.

use std::path::Path;

use serde::Serialize;

use crate::coherence::Policy;
use crate::corekit::{core_check, elaborate, entry_points, render_program, CoreProgram};
use crate::diag::{canonicalize, has_errors, Code, Diagnostic, Pos, Severity, Span};
use crate::eval::{eval, DEFAULT_FUEL};
use crate::linker::{link, LinkOptions, Program, SourceFile};
use crate::resolver::{TraceNode, DEFAULT_DEPTH};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub policy: Policy,
    pub depth: usize,
    pub fuel: u64,
    pub emit_core: bool,
    pub json: bool,
    pub color: bool,
    pub files: Vec<String>,
    pub manifest: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            policy: Policy::default(),
            depth: DEFAULT_DEPTH,
            fuel: DEFAULT_FUEL,
            emit_core: false,
            json: false,
            color: false,
            files: vec![],
            manifest: None,
        }
    }
}

impl RunConfig {
    pub fn link_options(&self) -> LinkOptions {
        LinkOptions { policy: self.policy, depth: self.depth }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn usage(msg: impl Into<String>) -> Self {
        Report { exit: 2, stdout: String::new(), stderr: format!("{}\n", msg.into()) }
    }
}

fn io_diag(path: &str, e: &std::io::Error) -> Diagnostic {
    Diagnostic::new(Code::Io, "", Span::synthetic(path), format!("cannot read {path}: {e}"))
}

/// The files named directly, then those listed in the manifest (one path
/// per line, relative to the manifest's directory).
pub fn load_sources(cfg: &RunConfig) -> Result<Vec<SourceFile>, Vec<Diagnostic>> {
    let mut paths = cfg.files.clone();
    if let Some(m) = &cfg.manifest {
        let text = std::fs::read_to_string(m).map_err(|e| vec![io_diag(m, &e)])?;
        let base = Path::new(m).parent().unwrap_or(Path::new(""));
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            paths.push(base.join(line).to_string_lossy().into_owned());
        }
    }
    let mut out = Vec::new();
    let mut errs = Vec::new();
    for p in paths {
        match std::fs::read(&p) {
            Ok(bytes) => out.push(SourceFile { path: p, bytes }),
            Err(e) => errs.push(io_diag(&p, &e)),
        }
    }
    if errs.is_empty() {
        Ok(out)
    } else {
        Err(errs)
    }
}

fn validate(cfg: &RunConfig) -> Option<Report> {
    if cfg.files.is_empty() && cfg.manifest.is_none() {
        return Some(Report::usage("no input files (give paths or --manifest FILE)"));
    }
    let p = cfg.policy;
    if (p.prioritize_specific || p.incoherent_ok) && p.kind != crate::coherence::PolicyKind::UseSite {
        return Some(Report::usage("--prioritize-specific and --incoherent-ok apply only to --policy use-site"));
    }
    None
}

pub fn render_diag(d: &Diagnostic, color: bool) -> String {
    let text = d.to_string();
    if !color {
        return text;
    }
    let (word, esc) = match d.severity {
        Severity::Error => ("error", "\x1b[1;31m"),
        Severity::Warning => ("warning", "\x1b[1;33m"),
    };
    text.replacen(word, &format!("{esc}{word}\x1b[0m"), 1)
}

fn diags_text(diags: &[Diagnostic], color: bool) -> String {
    diags.iter().map(|d| render_diag(d, color) + "\n").collect()
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Everything the commands compute, also used directly by tests.
pub struct Compiled {
    pub program: Program,
    pub core: Option<CoreProgram>,
    pub diags: Vec<Diagnostic>,
}

/// Links, and when that succeeds elaborates and checks the core program.
pub fn compile(sources: &[SourceFile], opts: LinkOptions) -> Compiled {
    let program = link(sources, opts);
    let mut diags = program.diags.clone();
    let mut core = None;
    if !has_errors(&diags) {
        let c = elaborate(&program);
        if let Err(ds) = core_check(&c) {
            diags.extend(ds);
        }
        core = Some(c);
    }
    let rank = |m: &str| program.rank(m);
    canonicalize(&mut diags, rank);
    Compiled { program, core, diags }
}

fn diag_report(cfg: &RunConfig, diags: &[Diagnostic], stdout: String) -> Report {
    let exit = i32::from(has_errors(diags));
    if cfg.json {
        Report { exit, stdout: stdout + &json(diags), stderr: String::new() }
    } else {
        Report { exit, stdout, stderr: diags_text(diags, cfg.color) }
    }
}

fn core_text(cfg: &RunConfig, core: &CoreProgram) -> String {
    if cfg.json {
        core.to_json() + "\n"
    } else {
        render_program(core)
    }
}

pub fn cmd_check(cfg: &RunConfig) -> Report {
    if let Some(r) = validate(cfg) {
        return r;
    }
    let sources = match load_sources(cfg) {
        Ok(s) => s,
        Err(ds) => return diag_report(cfg, &ds, String::new()),
    };
    let c = compile(&sources, cfg.link_options());
    let out = match (&c.core, cfg.emit_core) {
        (Some(core), true) if !has_errors(&c.diags) => core_text(cfg, core),
        _ => String::new(),
    };
    diag_report(cfg, &c.diags, out)
}

#[derive(Serialize)]
struct RunJson<'a> {
    transcript: &'a [String],
    diagnostics: &'a [Diagnostic],
}

/// Evaluation on a thread with a deep stack, so the depth limit rather than
/// the host stack bounds recursion.
pub fn run_core(core: &CoreProgram, fuel: u64) -> Result<Vec<String>, (crate::eval::RuntimeError, Vec<String>)> {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, || eval(core, fuel).map(|r| r.transcript))
            .expect("spawn evaluator")
            .join()
            .expect("evaluator does not panic")
    })
}

pub fn cmd_run(cfg: &RunConfig) -> Report {
    if let Some(r) = validate(cfg) {
        return r;
    }
    let sources = match load_sources(cfg) {
        Ok(s) => s,
        Err(ds) => return diag_report(cfg, &ds, String::new()),
    };
    let mut c = compile(&sources, cfg.link_options());
    let mut transcript = Vec::new();
    let mut prefix = String::new();
    if !has_errors(&c.diags) {
        let core = c.core.as_mut().expect("compiled without errors");
        let entries = entry_points(&c.program);
        let entry_diag = |code, msg: String| {
            Diagnostic::new(code, c.program.user_modules().last().map(|m| m.name.clone()).unwrap_or_default(), Span::synthetic(""), msg)
        };
        match entries.as_slice() {
            [] => c.diags.push(entry_diag(Code::NoEntry, "no module defines `fn main() -> Unit`".into())),
            [_] => {
                if cfg.emit_core {
                    prefix = core_text(cfg, core);
                }
                match run_core(core, cfg.fuel) {
                    Ok(t) => transcript = t,
                    Err((e, t)) => {
                        transcript = t;
                        let f = &entries[0];
                        let span = c
                            .program
                            .module(&f.module)
                            .and_then(|m| m.fun(&f.name))
                            .map(|d| d.span.clone())
                            .unwrap_or_else(|| Span::synthetic(""));
                        c.diags.push(Diagnostic::new(e.code, f.module.clone(), span, format!("while running {f}: {}", e.message)));
                    }
                }
            }
            many => {
                let names: Vec<String> = many.iter().map(|q| q.to_string()).collect();
                c.diags.push(entry_diag(Code::MultiEntry, format!("several entry points: {}", names.join(", "))));
            }
        }
    }
    let exit = i32::from(has_errors(&c.diags));
    if cfg.json {
        Report { exit, stdout: prefix + &json(&RunJson { transcript: &transcript, diagnostics: &c.diags }), stderr: String::new() }
    } else {
        let lines: String = transcript.iter().map(|l| format!("{l}\n")).collect();
        Report { exit, stdout: prefix + &lines, stderr: diags_text(&c.diags, cfg.color) }
    }
}

/// `file:line:col`, splitting from the right so paths may contain colons.
pub fn parse_locator(s: &str) -> Option<(String, Pos)> {
    let mut it = s.rsplitn(3, ':');
    let col = it.next()?.parse().ok()?;
    let line = it.next()?.parse().ok()?;
    let file = it.next()?;
    Some((file.to_string(), Pos::new(line, col)))
}

fn same_file(a: &str, b: &str) -> bool {
    a == b
        || match (std::fs::canonicalize(a), std::fs::canonicalize(b)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        }
}

#[derive(Serialize)]
pub struct Explanation {
    pub owner: String,
    pub goal: String,
    pub span: Span,
    pub resolved: bool,
    pub trace: Option<TraceNode>,
}

/// The innermost goal site covering the locator.
pub fn explain(program: &Program, file: &str, pos: Pos) -> Option<Explanation> {
    let mut best: Option<Explanation> = None;
    for m in program.user_modules() {
        for (owner, g) in m.goal_sites() {
            if !same_file(&g.span.file, file) || !g.span.contains_pos(pos) {
                continue;
            }
            if best.as_ref().is_some_and(|b| !b.span.contains(&g.span)) {
                continue;
            }
            best = Some(Explanation { owner, goal: g.constraint.to_string(), span: g.span.clone(), resolved: g.resolution.is_some(), trace: g.trace.clone() });
        }
    }
    best
}

/// Without other inputs, the locator's file is the whole program.
pub fn cmd_explain(cfg: &RunConfig, locator: &str) -> Report {
    let Some((file, pos)) = parse_locator(locator) else {
        return Report::usage(format!("bad locator `{locator}`; expected FILE:LINE:COL"));
    };
    let mut cfg = cfg.clone();
    if cfg.files.is_empty() && cfg.manifest.is_none() {
        cfg.files.push(file.clone());
    }
    let cfg = &cfg;
    if let Some(r) = validate(cfg) {
        return r;
    }
    let sources = match load_sources(cfg) {
        Ok(s) => s,
        Err(ds) => return diag_report(cfg, &ds, String::new()),
    };
    let program = link(&sources, cfg.link_options());
    match explain(&program, &file, pos) {
        Some(ex) => {
            let exit = i32::from(!ex.resolved);
            let stdout = if cfg.json {
                json(&ex)
            } else {
                let mut s = format!("{} in {} at {}\n", ex.goal, ex.owner, ex.span);
                match &ex.trace {
                    Some(t) => s += &t.render(),
                    None => s += "  not resolved: the goal still had undetermined types\n",
                }
                s
            };
            Report { exit, stdout, stderr: String::new() }
        }
        None => {
            let d = Diagnostic::new(
                Code::NoGoal,
                "",
                Span::new(file.clone(), pos, pos),
                format!("no constraint is discharged at {locator}"),
            );
            diag_report(cfg, &[d], String::new())
        }
    }
}
