//! Small whole programs, each pinned to the diagnostic or output it must
//! produce.

use sl_core::coherence::{Policy, PolicyKind};
use sl_core::diag::has_errors;
use sl_core::driver::{compile, run_core};
use sl_core::linker::{LinkOptions, SourceFile};
use sl_core::resolver::DEFAULT_DEPTH;

fn sources(files: &[(&str, &str)]) -> Vec<SourceFile> {
    files.iter().map(|(n, t)| SourceFile::new(format!("{n}.sl"), format!("module {n}\n{t}"))).collect()
}

fn codes_under(pol: Policy, files: &[(&str, &str)]) -> Vec<String> {
    let c = compile(&sources(files), LinkOptions { policy: pol, depth: DEFAULT_DEPTH });
    c.diags.iter().filter(|d| d.is_error()).map(|d| d.code.to_string()).collect()
}

fn codes(kind: PolicyKind, files: &[(&str, &str)]) -> Vec<String> {
    codes_under(Policy::new(kind), files)
}

fn output_under(pol: Policy, files: &[(&str, &str)]) -> Vec<String> {
    let c = compile(&sources(files), LinkOptions { policy: pol, depth: DEFAULT_DEPTH });
    assert!(!has_errors(&c.diags), "{:?}", c.diags.iter().map(|d| d.to_string()).collect::<Vec<_>>());
    run_core(c.core.as_ref().unwrap(), sl_core::eval::DEFAULT_FUEL).map_err(|(e, _)| e.to_string()).unwrap()
}

fn output(kind: PolicyKind, files: &[(&str, &str)]) -> Vec<String> {
    output_under(Policy::new(kind), files)
}

const TAG: &str = "
concept Tag[Self] {
  fn tag(x: Self) -> String
}
";

#[test]
fn import_cycles_and_unknown_imports() {
    assert_eq!(codes(PolicyKind::UseSite, &[("a", "import b\n"), ("b", "import a\n")]), ["E-CYCLE"]);
    assert_eq!(codes(PolicyKind::UseSite, &[("c", "import nowhere\n")]), ["E-UNRESOLVED-IMPORT"]);
}

#[test]
fn missing_requirement() {
    let m = format!("{TAG}\nmodel Tag[Int] {{\n}}\n");
    assert_eq!(codes(PolicyKind::UseSite, &[("m", &m)]), ["E-MISSING-REQ"]);
}

#[test]
fn scoped_models_need_names() {
    let m = format!("{TAG}\nmodel Tag[Int] {{\n  fn tag(x) = \"x\"\n}}\n");
    assert_eq!(codes(PolicyKind::Scoped, &[("m", &m)]), ["E-NEEDS-NAME"]);
    assert!(codes(PolicyKind::UseSite, &[("m", &m)]).is_empty());
}

const OVERLAP: &str = "
model Tag[Option[A]] {
  fn tag(x) = \"generic\"
}

model Tag[Option[Int]] {
  fn tag(x) = \"specific\"
}

fn main() -> Unit = print(tag(Some(1:Int)))
";

#[test]
fn prioritize_specific_picks_the_instance() {
    let m = format!("{TAG}{OVERLAP}");
    assert_eq!(codes(PolicyKind::UseSite, &[("m", &m)]), ["E-AMBIGUOUS"]);
    let pol = Policy { prioritize_specific: true, ..Policy::new(PolicyKind::UseSite) };
    assert_eq!(output_under(pol, &[("m", &m)]), ["specific"]);
    let pol = Policy { incoherent_ok: true, ..Policy::new(PolicyKind::UseSite) };
    assert_eq!(output_under(pol, &[("m", &m)]), ["generic"]);
}

/// Named models of one conformance stay distinct dictionaries: each module
/// keeps using its own.
#[test]
fn scoped_models_are_distinct_dictionaries() {
    let base = format!("{TAG}\nfn describe[T](x: T) -> String where Tag[T] = tag(x)\n");
    let b = "import base\n\nmodel mb: Tag[Int] {\n  fn tag(x) = \"from b\"\n}\n\nfn viaB() -> String = describe(1:Int)\n";
    let c = "import base\n\nmodel mc: Tag[Int] {\n  fn tag(x) = \"from c\"\n}\n\nfn viaC() -> String = describe(1:Int)\n";
    let d = "import b\nimport c\n\nfn main() -> Unit =\n  let u = print(b.viaB()) in\n  print(c.viaC())\n";
    let files = [("base", base.as_str()), ("b", b), ("c", c), ("d", d)];
    assert_eq!(output(PolicyKind::Scoped, &files), ["from b", "from c"]);
    assert_eq!(codes(PolicyKind::UseSite, &files), ["E-LINK-CONFLICT"]);
}

#[test]
fn scoped_inner_models_shadow_imports_and_siblings_clash() {
    let base = format!("{TAG}\nmodel outer: Tag[Int] {{\n  fn tag(x) = \"outer\"\n}}\n");
    let inner = "import base\n\nmodel inner: Tag[Int] {\n  fn tag(x) = \"inner\"\n}\n\nfn main() -> Unit = print(tag(1:Int))\n";
    assert_eq!(output(PolicyKind::Scoped, &[("base", &base), ("inner", inner)]), ["inner"]);
    let twins = format!(
        "{TAG}\nmodel one: Tag[Int] {{\n  fn tag(x) = \"one\"\n}}\n\nmodel two: Tag[Int] {{\n  fn tag(x) = \"two\"\n}}\n\nfn main() -> Unit = print(tag(1:Int))\n"
    );
    assert_eq!(codes(PolicyKind::Scoped, &[("twins", &twins)]), ["E-AMBIGUOUS"]);
}

#[test]
fn failing_context_is_an_error_not_backtracking() {
    let m = format!(
        "{TAG}\nconcept Extra[Self] {{\n  fn extra(x: Self) -> Bool\n}}\n\nmodel Tag[Option[A]] where Extra[A] {{\n  fn tag(x) = \"needs extra\"\n}}\n\nfn main() -> Unit = print(tag(Some(1:Int)))\n"
    );
    assert_eq!(codes(PolicyKind::UseSite, &[("m", &m)]), ["E-NO-MODEL"]);
}

#[test]
fn associated_types_reduce_through_models() {
    let m = "
concept Container[Self] {
  type Item
  fn first(c: Self) -> Self.Item
}

model Container[List[A]] {
  type Item = Option[A]
  fn first(c) = match c {
    Cons(x, _) => Some(x),
    Nil => None
  }
}

fn main() -> Unit = match first(Cons(7u8, Nil)) {
  Some(x) => print(show(x)),
  None => print(\"empty\")
}
";
    for k in [PolicyKind::UseSite, PolicyKind::DefSiteStrict, PolicyKind::DefSiteDisjoint] {
        assert_eq!(output(k, &[("m", m)]), ["7"]);
    }
}

#[test]
fn equality_constraints_are_checked_at_calls() {
    let m = "
concept Iterator[Self] {
  type Element
  fn next(it: Self) -> Option[(Self.Element, Self)]
}

model Iterator[List[A]] {
  type Element = A
  fn next(l) = match l {
    Cons(x, xs) => Some((x, xs)),
    Nil => None
  }
}

fn same[A, B](a: A, b: B) -> Bool where Iterator[A], Iterator[B], A.Element == B.Element = true

fn main() -> Unit = print(show(same(Cons(1u8, Nil), Cons(true, Nil))))
";
    assert_eq!(codes(PolicyKind::UseSite, &[("m", m)]), ["E-TYPE-MISMATCH"]);
}

/// The parallel checks report exactly what the sequential ones do, in the
/// same order.
#[test]
fn sequential_and_parallel_agree() {
    let base = format!("{TAG}\nfn describe[T](x: T) -> String where Tag[T] = tag(x)\n");
    let sib = |i: usize| {
        let mut s = String::from("import base\n");
        for k in 0..6 {
            s += &format!("\ndata D{k} = D{k}(U64)\n\nmodel Tag[Option[D{k}]] {{\n  fn tag(x) = \"{i}.{k}\"\n}}\n\nmodel Tag[List[A]] {{\n  fn tag(x) = \"{i}\"\n}}\n");
        }
        s
    };
    let sibs: Vec<String> = (0..6).map(sib).collect();
    let names: Vec<String> = (0..6).map(|i| format!("s{i}")).collect();
    let mut files = vec![("base", base.as_str())];
    files.extend(names.iter().map(String::as_str).zip(sibs.iter().map(String::as_str)));
    for kind in [PolicyKind::UseSite, PolicyKind::DefSiteStrict, PolicyKind::DefSiteDisjoint, PolicyKind::Scoped] {
        let opts = LinkOptions { policy: Policy::new(kind), depth: DEFAULT_DEPTH };
        let render = |c: &sl_core::driver::Compiled| c.diags.iter().map(|d| d.to_string()).collect::<Vec<_>>();
        let par = compile(&sources(&files), opts);
        let seq = sl_core::par::sequentially(|| compile(&sources(&files), opts));
        assert_eq!(render(&par), render(&seq), "{}", kind.as_str());
        assert!(!par.diags.is_empty() || kind == PolicyKind::Scoped);
    }
}
