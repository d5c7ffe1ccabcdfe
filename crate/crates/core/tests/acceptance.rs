//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every verdict is printed, passing or not; exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use sl_core::builtins::PRIM_TYPES;
use sl_core::coherence::{Policy, PolicyKind};
use sl_core::corekit::core_check;
use sl_core::diag::{has_errors, Code, Diagnostic};
use sl_core::driver::{cmd_check, compile, run_core, Compiled, RunConfig};
use sl_core::enumerate::{check_stability, count_derivations, ground_universe, satisfying_assignments, tuples};
use sl_core::linker::{LinkOptions, SourceFile};
use sl_core::resolver::DEFAULT_DEPTH;
use sl_core::types::{unify, Constraint, TyCon, TyVar, Type};

const POLICIES: [PolicyKind; 4] =
    [PolicyKind::UseSite, PolicyKind::DefSiteStrict, PolicyKind::DefSiteDisjoint, PolicyKind::Scoped];
const UNIQUENESS: [PolicyKind; 3] = [PolicyKind::UseSite, PolicyKind::DefSiteStrict, PolicyKind::DefSiteDisjoint];
const RUN_BUDGET: Duration = Duration::from_secs(1);
const MGU_BUDGET: Duration = Duration::from_secs(10);
const UNIVERSE_DEPTH: usize = 2;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").canonicalize().expect("corpus directory")
}

/// A corpus program: a single file, or a directory with a manifest.
#[derive(Clone)]
struct Prog {
    name: String,
    files: Vec<PathBuf>,
}

fn prog(name: &str) -> Prog {
    let dir = corpus_dir();
    let single = dir.join(format!("{name}.sl"));
    if single.is_file() {
        return Prog { name: name.into(), files: vec![single] };
    }
    let sub = dir.join(name);
    let manifest = std::fs::read_to_string(sub.join("manifest")).unwrap_or_else(|e| panic!("{name}: {e}"));
    let files = manifest.lines().map(str::trim).filter(|l| !l.is_empty()).map(|l| sub.join(l)).collect();
    Prog { name: name.into(), files }
}

fn every_prog() -> Vec<Prog> {
    let mut names = BTreeSet::new();
    for e in std::fs::read_dir(corpus_dir()).expect("corpus directory").flatten() {
        let p = e.path();
        let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        if p.extension().is_some_and(|x| x == "sl") || p.join("manifest").is_file() {
            names.insert(stem);
        }
    }
    names.iter().map(|n| prog(n)).collect()
}

fn sources(p: &Prog) -> Vec<SourceFile> {
    p.files
        .iter()
        .map(|f| SourceFile { path: f.to_string_lossy().into_owned(), bytes: std::fs::read(f).expect("corpus file") })
        .collect()
}

fn policy(kind: PolicyKind) -> Policy {
    Policy::new(kind)
}

fn build(p: &Prog, pol: Policy) -> Compiled {
    compile(&sources(p), LinkOptions { policy: pol, depth: DEFAULT_DEPTH })
}

fn codes(ds: &[Diagnostic]) -> Vec<&'static str> {
    ds.iter().filter(|d| d.is_error()).map(|d| d.code.as_str()).collect()
}

/// Transcript of `main`, or the error codes that prevented it.
fn run(p: &Prog, pol: Policy) -> Result<(Vec<String>, Duration), String> {
    let t0 = Instant::now();
    let c = build(p, pol);
    if has_errors(&c.diags) {
        return Err(format!("{} rejected: {:?}", p.name, codes(&c.diags)));
    }
    let core = c.core.expect("accepted program has a core");
    match run_core(&core, sl_core::eval::DEFAULT_FUEL) {
        Ok(t) => Ok((t, t0.elapsed())),
        Err((e, _)) => Err(format!("{} failed at run time: {}", p.name, e.code)),
    }
}

fn expect_output(p: &Prog, pol: Policy, want: &[&str]) -> Result<String, String> {
    let (t, dt) = run(p, pol)?;
    if t != want {
        return Err(format!("{} under {}: printed {t:?}, expected {want:?}", p.name, pol.kind.as_str()));
    }
    if dt >= RUN_BUDGET {
        return Err(format!("{} under {} took {dt:?}", p.name, pol.kind.as_str()));
    }
    Ok(format!("{}={:?} in {:.0?}", p.name, want.join("\n"), dt))
}

fn has_code(ds: &[Diagnostic], code: Code) -> bool {
    ds.iter().any(|d| d.code == code)
}

fn errors_with(c: &Compiled, code: Code) -> Vec<&Diagnostic> {
    c.diags.iter().filter(|d| d.code == code).collect()
}

fn c1() -> Result<String, String> {
    let p = prog("listing1");
    let mut notes = Vec::new();
    for k in POLICIES {
        notes.push(expect_output(&p, policy(k), &["84"])?);
    }
    Ok(notes.join(", "))
}

fn c2() -> Result<String, String> {
    let a = expect_output(&prog("listing4"), policy(PolicyKind::UseSite), &["42"])?;
    let b = expect_output(&prog("listing5"), policy(PolicyKind::UseSite), &["6"])?;
    Ok(format!("{a}, {b}"))
}

fn c3() -> Result<String, String> {
    let pol = policy(PolicyKind::UseSite);
    let ok = build(&prog("listing11_unambiguous"), pol);
    if has_errors(&ok.diags) {
        return Err(format!("F64 use alone rejected: {:?}", codes(&ok.diags)));
    }
    let both = build(&prog("listing11"), pol);
    let amb = errors_with(&both, Code::Ambiguous);
    let [d] = amb.as_slice() else { return Err(format!("expected one E-AMBIGUOUS, got {:?}", codes(&both.diags))) };
    if codes(&both.diags).len() != 1 {
        return Err(format!("extra errors: {:?}", codes(&both.diags)));
    }
    if !d.message.contains("Option[Int]") {
        return Err(format!("ambiguity is not the Int call: {}", d.message));
    }
    let model_lines: BTreeSet<u32> = both
        .program
        .module("listing11")
        .expect("module")
        .models
        .iter()
        .filter(|m| m.concept.name == "StringConvertible")
        .map(|m| m.span.start.line)
        .collect();
    let cited: BTreeSet<u32> = d.related.iter().map(|r| r.span.start.line).collect();
    if cited != model_lines || cited.len() != 2 {
        return Err(format!("candidates cite lines {cited:?}, models are at {model_lines:?}"));
    }
    Ok(format!("E-AMBIGUOUS at {} citing lines {cited:?}", d.span))
}

fn c4() -> Result<String, String> {
    let c = build(&prog("listing11_duplicate"), policy(PolicyKind::UseSite));
    match codes(&c.diags).as_slice() {
        ["E-DUPLICATE"] => Ok("E-DUPLICATE with no uses".into()),
        other => Err(format!("got {other:?}")),
    }
}

fn c5() -> Result<String, String> {
    let pol = policy(PolicyKind::DefSiteStrict);
    let swift = build(&prog("swift_optional"), pol);
    if codes(&swift.diags) != ["E-CONSTRUCTOR-DUP"] {
        return Err(format!("swift_optional: {:?}", codes(&swift.diags)));
    }
    let blanket = build(&prog("listing9"), pol);
    if !has_code(&blanket.diags, Code::BlanketSelf) {
        return Err(format!("listing9: {:?}", codes(&blanket.diags)));
    }
    Ok("E-CONSTRUCTOR-DUP, E-BLANKET-SELF".into())
}

fn c6() -> Result<String, String> {
    let pol = policy(PolicyKind::DefSiteDisjoint);
    let want = [("rust_option_int", vec![]), ("rust_option_int_show", vec!["E-OVERLAP"]), ("rust_show_display", vec!["E-OVERLAP"])];
    for (name, w) in want {
        let c = build(&prog(name), pol);
        if codes(&c.diags) != w {
            return Err(format!("{name}: {:?}, expected {w:?}", codes(&c.diags)));
        }
    }
    Ok("accepted / E-OVERLAP / E-OVERLAP".into())
}

/// Each downstream crate is checked together with the upstream one only.
fn c7() -> Result<String, String> {
    let dir = corpus_dir().join("orphans");
    let pol = policy(PolicyKind::DefSiteDisjoint);
    let verdicts: [(&str, &str, bool); 6] = [
        ("local_types", "StringConvertible[S]", true),
        ("local_types", "StringConvertible[SBox[T]]", true),
        ("local_types", "StringConvertible[Option[S]]", false),
        ("local_types", "From[String, S]", true),
        ("crate_b", "From[T, B]", false),
        ("crate_c", "From[C, T]", true),
    ];
    let mut per_crate: BTreeMap<&str, Compiled> = BTreeMap::new();
    for (m, _, _) in verdicts {
        per_crate.entry(m).or_insert_with(|| {
            let p = Prog { name: m.into(), files: vec![dir.join("upstream.sl"), dir.join(format!("{m}.sl"))] };
            build(&p, pol)
        });
    }
    for (m, head, legal) in verdicts {
        let c = &per_crate[m];
        let module = c.program.module(m).ok_or_else(|| format!("{m} did not check"))?;
        let model = module
            .models
            .iter()
            .find(|md| md.label().contains(head))
            .ok_or_else(|| format!("no model {head} in {m}"))?;
        let orphan = c.diags.iter().any(|d| d.code == Code::Orphan && d.span.start.line == model.span.start.line);
        if orphan == legal {
            return Err(format!("{head} in {m}: orphan={orphan}, expected legal={legal}"));
        }
        let others: Vec<_> = c.diags.iter().filter(|d| d.is_error() && d.code != Code::Orphan).collect();
        if !others.is_empty() {
            return Err(format!("{m}: unexpected {:?}", others.iter().map(|d| d.code.as_str()).collect::<Vec<_>>()));
        }
    }
    Ok("ok, ok, E-ORPHAN, ok, E-ORPHAN, ok".into())
}

fn names_b_and_c(d: &Diagnostic) -> bool {
    let text = d.to_string();
    text.contains("modules B and C") || (text.contains(" B") && text.contains(" C"))
}

fn c8() -> Result<String, String> {
    let p = prog("figure1");
    let mut notes = Vec::new();
    for k in UNIQUENESS {
        let c = build(&p, policy(k));
        let conflict = c.diags.iter().find(|d| d.code == Code::LinkConflict);
        let orphans: BTreeSet<&str> = c.diags.iter().filter(|d| d.code == Code::Orphan).map(|d| d.module.as_str()).collect();
        let ok = match conflict {
            Some(d) => names_b_and_c(d),
            None => orphans == BTreeSet::from(["B", "C"]),
        };
        if !ok || !has_errors(&c.diags) {
            return Err(format!("{}: {:?}", k.as_str(), codes(&c.diags)));
        }
        notes.push(format!("{}:{}", k.as_str(), if conflict.is_some() { "E-LINK-CONFLICT" } else { "E-ORPHAN" }));
    }
    let scoped = build(&p, policy(PolicyKind::Scoped));
    if has_errors(&scoped.diags) {
        return Err(format!("scoped: {:?}", codes(&scoped.diags)));
    }
    notes.push("scoped:accepted".into());
    Ok(notes.join(", "))
}

fn c9() -> Result<String, String> {
    let p = prog("swift_unsound");
    let mut notes = Vec::new();
    for k in POLICIES {
        let c = build(&p, policy(k));
        if !has_errors(&c.diags) {
            return Err(format!("accepted under {}", k.as_str()));
        }
        let ok = match k {
            PolicyKind::DefSiteDisjoint => {
                let m: BTreeSet<&str> = c.diags.iter().filter(|d| d.code == Code::Orphan).map(|d| d.module.as_str()).collect();
                m == BTreeSet::from(["B", "C"])
            }
            PolicyKind::UseSite | PolicyKind::DefSiteStrict => {
                c.diags.iter().any(|d| d.code == Code::LinkConflict && names_b_and_c(d))
            }
            PolicyKind::Scoped => c.diags.iter().any(|d| {
                d.code == Code::TypeMismatch && d.module == "D" && d.message.contains("B.m.X") && d.message.contains("C.m.X")
            }),
        };
        if !ok {
            return Err(format!("{}: {:?}", k.as_str(), c.diags.iter().map(|d| d.to_string()).collect::<Vec<_>>()));
        }
        notes.push(format!("{}:{}", k.as_str(), codes(&c.diags)[0]));
    }
    Ok(notes.join(", "))
}

/// Ground types of bounded depth over every type constructor the program
/// can name.
fn universe(c: &Compiled) -> Vec<Type> {
    let mut cons: Vec<TyCon> = PRIM_TYPES.iter().map(|n| TyCon::new(sl_core::types::STD, n, 0)).collect();
    for m in &c.program.modules {
        cons.extend(m.datas.iter().map(|d| d.con()));
    }
    ground_universe(&cons, UNIVERSE_DEPTH)
}

fn accepted_under_uniqueness() -> Vec<(Prog, PolicyKind, Compiled)> {
    let mut out = Vec::new();
    for p in every_prog() {
        for k in UNIQUENESS {
            let c = build(&p, policy(k));
            if !has_errors(&c.diags) {
                out.push((p.clone(), k, c));
            }
        }
    }
    out
}

/// The goals to enumerate. Def-site policies promise every ground goal has
/// at most one derivation; use-site promises it only for goals the program
/// discharges, taken at every ground instantiation of their function.
fn enumerated_goals(c: &Compiled, k: PolicyKind, u: &[Type]) -> Vec<Constraint> {
    let mut out = Vec::new();
    for m in c.program.user_modules() {
        if k != PolicyKind::UseSite {
            for cd in &m.concepts {
                out.extend(tuples(u, cd.params.len()).into_iter().map(|ts| Constraint::conf(cd.id.clone(), ts)));
            }
            continue;
        }
        let world = &c.program.worlds[&m.name];
        for (_, g) in m.goal_sites() {
            if g.constraint.is_ground() {
                out.push(g.constraint.clone());
            }
        }
        for f in m.funs.iter().filter(|f| !f.tparams.is_empty()) {
            for a in satisfying_assignments(f, u, world, DEFAULT_DEPTH) {
                out.extend(f.body.goals.iter().map(|g| g.constraint.apply(&a)).filter(Constraint::is_ground));
            }
        }
    }
    out
}

fn c10() -> Result<String, String> {
    let t0 = Instant::now();
    let mut goals = 0usize;
    let mut programs = 0usize;
    for (p, k, c) in accepted_under_uniqueness() {
        programs += 1;
        let u = universe(&c);
        for g in enumerated_goals(&c, k, &u) {
            goals += 1;
            let n = count_derivations(&g, &c.program.link_world, DEFAULT_DEPTH, 2);
            if n > 1 {
                return Err(format!("{} under {}: {g} has {n} derivations", p.name, k.as_str()));
            }
        }
    }
    Ok(format!("{goals} ground goals over {programs} accepted programs, each <= 1 derivation, {:.1?}", t0.elapsed()))
}

/// Unstable goal sites of every generic function, over all satisfying
/// ground assignments.
fn unstable_sites(c: &Compiled, pol: Policy) -> BTreeSet<String> {
    let u = universe(c);
    let mut out = BTreeSet::new();
    for m in c.program.user_modules() {
        let world = &c.program.worlds[&m.name];
        for f in m.funs.iter().filter(|f| !f.tparams.is_empty()) {
            for a in satisfying_assignments(f, &u, world, DEFAULT_DEPTH) {
                for e in check_stability(f, &a, world, pol, DEFAULT_DEPTH) {
                    if !e.stable {
                        out.insert(format!("{} {}", e.site, e.goal));
                    }
                }
            }
        }
    }
    out
}

fn c11() -> Result<String, String> {
    let mut checked = 0;
    for (p, k, c) in accepted_under_uniqueness() {
        let bad = unstable_sites(&c, policy(k));
        if !bad.is_empty() {
            return Err(format!("{} under {}: unstable {bad:?}", p.name, k.as_str()));
        }
        checked += 1;
    }
    let pol = Policy { incoherent_ok: true, ..policy(PolicyKind::UseSite) };
    let c = build(&prog("listing10"), pol);
    if has_errors(&c.diags) {
        return Err(format!("listing10 --incoherent-ok rejected: {:?}", codes(&c.diags)));
    }
    let bad = unstable_sites(&c, pol);
    if bad.len() != 1 {
        return Err(format!("listing10 --incoherent-ok: {} unstable goals {bad:?}", bad.len()));
    }
    Ok(format!("{checked} accepted configurations stable; listing10 unstable at {}", bad.iter().next().unwrap()))
}

fn c12() -> Result<String, String> {
    let mut n = 0;
    for p in every_prog() {
        for k in POLICIES {
            let mut pol = policy(k);
            for incoherent in [false, true] {
                if incoherent && k != PolicyKind::UseSite {
                    continue;
                }
                pol.incoherent_ok = incoherent;
                let c = build(&p, pol);
                if has_errors(&c.diags) {
                    continue;
                }
                let core = c.core.as_ref().ok_or_else(|| format!("{}: accepted without a core", p.name))?;
                if let Err(ds) = core_check(core) {
                    return Err(format!("{} under {}: {}", p.name, k.as_str(), ds[0]));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n}/{n} accepted configurations elaborate to well-typed core"))
}

/// The oracle's own term language, so its equality is independent of the
/// library's.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Term {
    Var(usize),
    Node(&'static str, Vec<Term>),
}

const SIGNATURE: [(&str, usize); 5] = [("U64", 0), ("Bool", 0), ("Option", 1), ("List", 1), ("Pair", 2)];
const VARS: usize = 2;

fn terms_up_to(depth: usize, with_vars: bool) -> Vec<Term> {
    let mut level: Vec<Term> = SIGNATURE.iter().filter(|(_, a)| *a == 0).map(|(n, _)| Term::Node(n, vec![])).collect();
    if with_vars {
        level.extend((0..VARS).map(Term::Var));
    }
    for _ in 1..depth {
        let prev = level.clone();
        let mut next: BTreeSet<Term> = prev.iter().cloned().collect();
        for (n, a) in SIGNATURE.iter().filter(|(_, a)| *a > 0) {
            let mut argss = vec![vec![]];
            for _ in 0..*a {
                argss = argss.into_iter().flat_map(|p: Vec<Term>| prev.iter().map(move |x| [p.clone(), vec![x.clone()]].concat())).collect();
            }
            next.extend(argss.into_iter().map(|args| Term::Node(n, args)));
        }
        level = next.into_iter().collect();
    }
    level
}

fn ground(t: &Term, theta: &[Term]) -> Term {
    match t {
        Term::Var(i) => theta[*i].clone(),
        Term::Node(n, args) => Term::Node(n, args.iter().map(|a| ground(a, theta)).collect()),
    }
}

fn to_type(t: &Term, vars: &[TyVar]) -> Type {
    match t {
        Term::Var(i) => Type::Var(vars[*i].clone()),
        Term::Node(n, args) => {
            let con = TyCon::new(sl_core::types::STD, n, args.len());
            if args.is_empty() {
                Type::Con(con)
            } else {
                Type::App(con, args.iter().map(|a| to_type(a, vars)).collect())
            }
        }
    }
}

fn from_type(t: &Type, vars: &[TyVar]) -> Term {
    match t {
        Type::Var(v) => Term::Var(vars.iter().position(|x| x == v).expect("only oracle variables")),
        Type::Con(c) => Term::Node(SIGNATURE.iter().find(|(n, _)| *n == c.name.name).expect("known constructor").0, vec![]),
        Type::App(c, args) => Term::Node(
            SIGNATURE.iter().find(|(n, _)| *n == c.name.name).expect("known constructor").0,
            args.iter().map(|a| from_type(a, vars)).collect(),
        ),
        Type::Assoc(_) => panic!("no projections in the oracle universe"),
    }
}

/// Ground unifiers are searched over ground terms of the same depth bound:
/// with both sides of depth at most 2, a variable below the root can only
/// be bound to a leaf, so no most general unifier needs deeper witnesses.
fn c13() -> Result<String, String> {
    let t0 = Instant::now();
    let vars: Vec<TyVar> = (0..VARS).map(|i| TyVar::fresh(format!("v{i}"))).collect();
    let terms = terms_up_to(2, true);
    let grounds = terms_up_to(2, false);
    let thetas: Vec<Vec<Term>> = (0..grounds.len().pow(VARS as u32))
        .map(|mut k| {
            (0..VARS)
                .map(|_| {
                    let g = grounds[k % grounds.len()].clone();
                    k /= grounds.len();
                    g
                })
                .collect()
        })
        .collect();
    let inst: Vec<Vec<Term>> = terms.iter().map(|t| thetas.iter().map(|th| ground(t, th)).collect()).collect();
    let mut pairs = 0;
    for (i, a) in terms.iter().enumerate() {
        for (j, b) in terms.iter().enumerate() {
            pairs += 1;
            let unifiers: Vec<usize> = (0..thetas.len()).filter(|&k| inst[i][k] == inst[j][k]).collect();
            let (ta, tb) = (to_type(a, &vars), to_type(b, &vars));
            match unify(&ta, &tb) {
                Err(_) if unifiers.is_empty() => {}
                Err(e) => return Err(format!("{a:?} ~ {b:?}: unify failed ({e:?}) but {} ground unifiers exist", unifiers.len())),
                Ok(_) if unifiers.is_empty() => return Err(format!("{a:?} ~ {b:?}: unify succeeded, no ground unifier")),
                Ok(s) => {
                    let (sa, sb) = (from_type(&s.apply(&ta), &vars), from_type(&s.apply(&tb), &vars));
                    if sa != sb {
                        return Err(format!("{a:?} ~ {b:?}: result does not unify"));
                    }
                    let images: Vec<Term> = vars.iter().map(|v| from_type(&s.apply(&Type::Var(v.clone())), &vars)).collect();
                    for k in unifiers {
                        let th = &thetas[k];
                        if (0..VARS).any(|v| ground(&images[v], th) != th[v]) {
                            return Err(format!("{a:?} ~ {b:?}: ground unifier {th:?} is not an instance of the result"));
                        }
                    }
                }
            }
        }
    }
    let dt = t0.elapsed();
    if dt >= MGU_BUDGET {
        return Err(format!("{pairs} pairs took {dt:?}"));
    }
    Ok(format!("{pairs} pairs over {} terms agree with the oracle in {dt:.1?}", terms.len()))
}

fn corpus_json() -> String {
    let mut out = String::new();
    for p in every_prog() {
        for k in POLICIES {
            let cfg = RunConfig {
                policy: policy(k),
                json: true,
                files: p.files.iter().map(|f| f.to_string_lossy().into_owned()).collect(),
                ..RunConfig::default()
            };
            let r = cmd_check(&cfg);
            out += &format!("{} {} {}\n{}", p.name, k.as_str(), r.exit, r.stdout);
        }
    }
    out
}

fn c14() -> Result<String, String> {
    let (a, b) = (corpus_json(), corpus_json());
    if a != b {
        return Err("two runs differ".into());
    }
    Ok(format!("{} bytes identical across two runs", a.len()))
}

type Criterion = (u32, &'static str, fn() -> Result<String, String>);

fn main() {
    let criteria: [Criterion; 14] = [
        (1, "listing1.sl prints 84 under every policy", c1),
        (2, "listing4.sl and listing5.sl print 42 and 6", c2),
        (3, "listing11.sl under use-site", c3),
        (4, "duplicate pair rejected without uses", c4),
        (5, "def-site-strict constructor and blanket limits", c5),
        (6, "def-site-disjoint bounded overlap", c6),
        (7, "orphan verdicts", c7),
        (8, "figure1 across policies", c8),
        (9, "unsound multi-module program rejected everywhere", c9),
        (10, "coherence by enumeration", c10),
        (11, "stability", c11),
        (12, "elaboration preserves typing", c12),
        (13, "unification agrees with the exhaustive oracle", c13),
        (14, "deterministic --json", c14),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (n, what, f) in criteria {
        if filter.as_ref().is_some_and(|x| x.parse() != Ok(n)) {
            continue;
        }
        let r = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match r {
            Ok(note) => println!("criterion {n:>2} PASS  {what}: {note}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {what}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
