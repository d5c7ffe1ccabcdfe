//! Whole-program assembly: parse every file, order modules by imports,
//! check each against its imports, then look for conflicts between models
//! from modules that never see each other.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::builtins::{STD_FILE, STD_SOURCE};
use crate::coherence::{check_def_site, pair_conflict, Policy, PolicyKind};
use crate::diag::{canonicalize, Code, Diagnostic, Span};
use crate::sema::{check_module, CheckedModule, SemaInput};
use crate::surface::{parse_module, parse_module_bytes, ModuleAst};
use crate::types::STD;
use crate::world::{ModelWorld, WorldEntry, SCOPE_IMPORTED};

#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub bytes: Vec<u8>,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Self {
        SourceFile { path: path.into(), bytes: text.into().into_bytes() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LinkOptions {
    pub policy: Policy,
    pub depth: usize,
}

impl Default for LinkOptions {
    fn default() -> Self {
        LinkOptions { policy: Policy::default(), depth: crate::resolver::DEFAULT_DEPTH }
    }
}

/// The checked program. `modules` is in topological order with `std`
/// first; modules that could not be checked are absent.
pub struct Program {
    pub modules: Vec<Arc<CheckedModule>>,
    /// Each module's view of the models, as used when it was checked.
    pub worlds: BTreeMap<String, ModelWorld>,
    /// Every model of the program, from no module's point of view.
    pub link_world: ModelWorld,
    /// Transitive imports of each module (std excluded).
    pub reach: BTreeMap<String, BTreeSet<String>>,
    pub diags: Vec<Diagnostic>,
    pub options: LinkOptions,
}

impl Program {
    pub fn module(&self, name: &str) -> Option<&Arc<CheckedModule>> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn has_errors(&self) -> bool {
        crate::diag::has_errors(&self.diags)
    }

    pub fn rank(&self, module: &str) -> usize {
        self.modules.iter().position(|m| m.name == module).unwrap_or(usize::MAX)
    }

    /// User modules, without `std`.
    pub fn user_modules(&self) -> impl Iterator<Item = &Arc<CheckedModule>> {
        self.modules.iter().filter(|m| m.name != STD)
    }
}

/// The import graph: module name to its (deduplicated) user imports.
pub struct Graph {
    pub order: Vec<String>,
    pub edges: BTreeMap<String, Vec<String>>,
}

/// Orders modules so every import precedes its importer. Ties break by
/// name. Reports unknown imports and import cycles.
pub fn build_graph(asts: &[ModuleAst], diags: &mut Vec<Diagnostic>) -> Graph {
    let names: BTreeSet<String> = asts.iter().map(|a| a.name.name.clone()).collect();
    let mut edges: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for a in asts {
        let mut deps = Vec::new();
        for i in &a.imports {
            if i.name == STD {
                continue;
            }
            if !names.contains(&i.name) {
                diags.push(Diagnostic::new(
                    Code::UnresolvedImport,
                    a.name.name.clone(),
                    i.span.clone(),
                    format!("module {} imports unknown module {}", a.name.name, i.name),
                ));
            } else if !deps.contains(&i.name) {
                deps.push(i.name.clone());
            }
        }
        edges.insert(a.name.name.clone(), deps);
    }
    // Kahn's algorithm over the reversed edges.
    let mut indeg: BTreeMap<&str, usize> = edges.iter().map(|(m, d)| (m.as_str(), d.len())).collect();
    let mut ready: BTreeSet<&str> = indeg.iter().filter(|(_, d)| **d == 0).map(|(m, _)| *m).collect();
    let mut order = Vec::new();
    while let Some(m) = ready.pop_first() {
        order.push(m.to_string());
        for (n, ds) in &edges {
            if ds.iter().any(|d| d == m) {
                let k = indeg.get_mut(n.as_str()).unwrap();
                *k -= 1;
                if *k == 0 {
                    ready.insert(n);
                }
            }
        }
    }
    let stuck: Vec<&String> = edges.keys().filter(|m| !order.contains(m)).collect();
    if !stuck.is_empty() {
        for cycle in cycles(&edges, &stuck) {
            let first = &cycle[0];
            let span = asts.iter().find(|a| &a.name.name == first).map(|a| a.name.span.clone()).unwrap_or_else(|| Span::synthetic(""));
            let mut path = cycle.clone();
            path.push(first.clone());
            diags.push(Diagnostic::new(Code::Cycle, first.clone(), span, format!("import cycle: {}", path.join(" -> "))));
        }
    }
    Graph { order, edges }
}

/// One representative cycle per strongly connected group among `stuck`.
fn cycles(edges: &BTreeMap<String, Vec<String>>, stuck: &[&String]) -> Vec<Vec<String>> {
    let mut covered: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    for start in stuck {
        if covered.contains(*start) {
            continue;
        }
        // Walk forward inside the stuck set until a node repeats.
        let mut path: Vec<String> = vec![(*start).clone()];
        loop {
            let cur = path.last().unwrap();
            let Some(next) = edges[cur].iter().find(|d| stuck.contains(d)) else { break };
            if let Some(i) = path.iter().position(|p| p == next) {
                let cyc: Vec<String> = path[i..].to_vec();
                if !cyc.iter().any(|c| covered.contains(c)) {
                    covered.extend(cyc.iter().cloned());
                    out.push(cyc);
                }
                break;
            }
            path.push(next.clone());
        }
        covered.insert((*start).clone());
    }
    out
}

fn transitive(edges: &BTreeMap<String, Vec<String>>, m: &str) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![m.to_string()];
    while let Some(x) = stack.pop() {
        for d in edges.get(&x).into_iter().flatten() {
            if seen.insert(d.clone()) {
                stack.push(d.clone());
            }
        }
    }
    seen
}

pub fn check_std(opts: LinkOptions) -> (Arc<CheckedModule>, Vec<Diagnostic>) {
    let ast = parse_module(STD_SOURCE, STD_FILE).expect("std parses");
    let out = check_module(
        &ast,
        SemaInput { imports: vec![], std: None, visible: vec![], policy: opts.policy, depth: opts.depth, file: STD_FILE },
    );
    (Arc::new(out.module), out.diags)
}

/// Parses, checks and links a set of source files.
pub fn link(sources: &[SourceFile], opts: LinkOptions) -> Program {
    let mut diags = Vec::new();
    let mut asts: Vec<ModuleAst> = Vec::new();
    let mut failed: BTreeSet<String> = BTreeSet::new();
    for src in sources {
        match parse_module_bytes(&src.bytes, &src.path) {
            Ok(a) => {
                if a.name.name == STD || asts.iter().any(|b| b.name.name == a.name.name) {
                    diags.push(Diagnostic::new(
                        Code::Name,
                        a.name.name.clone(),
                        a.name.span.clone(),
                        format!("module {} is defined more than once", a.name.name),
                    ));
                    continue;
                }
                asts.push(a)
            }
            Err(ds) => {
                let stem = std::path::Path::new(&src.path).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                failed.insert(stem.clone());
                diags.extend(ds.into_iter().map(|mut d| {
                    if d.module.is_empty() {
                        d.module = stem.clone();
                    }
                    d
                }));
            }
        }
    }
    let graph = build_graph(&asts, &mut diags);
    let (std_mod, std_diags) = check_std(opts);
    diags.extend(std_diags);

    let mut modules: Vec<Arc<CheckedModule>> = vec![std_mod.clone()];
    let mut worlds = BTreeMap::new();
    let mut reach = BTreeMap::new();
    for name in &graph.order {
        let ast = asts.iter().find(|a| &a.name.name == name).unwrap();
        let trans = transitive(&graph.edges, name);
        reach.insert(name.clone(), trans.clone());
        // A module importing something that could not be checked is skipped.
        if trans.iter().any(|d| !modules.iter().any(|m| &m.name == d)) {
            failed.insert(name.clone());
            continue;
        }
        let visible: Vec<Arc<CheckedModule>> =
            modules.iter().filter(|m| m.name == STD || trans.contains(&m.name)).cloned().collect();
        let imports = graph.edges[name].iter().filter_map(|d| modules.iter().find(|m| &m.name == d).cloned()).collect();
        let file = sources
            .iter()
            .find(|s| s.path == ast.span.file)
            .map(|s| s.path.clone())
            .unwrap_or_else(|| ast.span.file.clone());
        let out = check_module(
            ast,
            SemaInput { imports, std: Some(std_mod.clone()), visible, policy: opts.policy, depth: opts.depth, file: &file },
        );
        diags.extend(out.diags);
        diags.extend(check_def_site(&out.module, &out.world, opts.policy));
        worlds.insert(name.clone(), out.world);
        modules.push(Arc::new(out.module));
    }

    let mut link_world = ModelWorld { module: None, scoped: opts.policy.kind == PolicyKind::Scoped, ..Default::default() };
    for m in &modules {
        for c in &m.concepts {
            link_world.concepts.insert(c.id.clone(), c.clone());
        }
        for md in &m.models {
            link_world.entries.push(WorldEntry { model: md.clone(), scope: SCOPE_IMPORTED });
        }
    }
    if opts.policy.kind != PolicyKind::Scoped {
        diags.extend(link_conflicts(&link_world, &reach, opts.policy));
    }

    let rank = |m: &str| modules.iter().position(|x| x.name == m).unwrap_or(usize::MAX);
    canonicalize(&mut diags, rank);
    Program { modules, worlds, link_world, reach, diags, options: opts }
}

fn related(reach: &BTreeMap<String, BTreeSet<String>>, a: &str, b: &str) -> bool {
    a == b
        || a == STD
        || b == STD
        || reach.get(a).is_some_and(|r| r.contains(b))
        || reach.get(b).is_some_and(|r| r.contains(a))
}

/// Pairs of models from mutually unaware modules that the policy rejects.
fn link_conflicts(world: &ModelWorld, reach: &BTreeMap<String, BTreeSet<String>>, policy: Policy) -> Vec<Diagnostic> {
    let entries: Vec<_> = world.entries.iter().enumerate().collect();
    crate::par::flat_map(&entries, |(i, e2)| {
        let m2 = &e2.model;
        let mut out = Vec::new();
        for e1 in &world.entries[..*i] {
            let m1 = &e1.model;
            if m1.concept != m2.concept || related(reach, m1.origin(), m2.origin()) {
                continue;
            }
            if let Some((code, msg)) = pair_conflict(m1, m2, world, policy) {
                let msg = format!(
                    "modules {} and {} are linked together but {}: {msg}",
                    m1.origin(),
                    m2.origin(),
                    match code {
                        Code::Duplicate => "define duplicate models",
                        _ => "define conflicting models",
                    }
                );
                out.push(
                    Diagnostic::new(Code::LinkConflict, m2.origin(), m2.span.clone(), msg)
                        .with_related(m1.span.clone(), format!("{} from module {}", m1.label(), m1.origin())),
                );
            }
        }
        out
    })
}
