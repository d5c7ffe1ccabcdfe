//! Whole-pipeline compile of a generated program, on rayon and with the
//! helpers forced onto one thread.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sl_core::coherence::{Policy, PolicyKind};
use sl_core::driver::compile;
use sl_core::linker::{LinkOptions, SourceFile};
use sl_core::par;
use sl_core::resolver::DEFAULT_DEPTH;

/// `mods` sibling modules, each with `per` data types and a model of a
/// shared concept for each, so the link check compares every pair.
fn generated(mods: usize, per: usize) -> Vec<SourceFile> {
    let mut files = vec![SourceFile::new(
        "base.sl",
        "module base\n\nconcept Tag[Self] {\n  fn tag(x: Self) -> String\n}\n\nfn describe[T](x: T) -> String where Tag[T] = tag(x)\n",
    )];
    let mut top = String::from("module top\n");
    for i in 0..mods {
        let mut src = format!("module m{i}\nimport base\n");
        for k in 0..per {
            src += &format!(
                "\ndata D{k} = D{k}(U64)\n\nmodel Tag[Option[D{k}]] {{\n  fn tag(x) = \"m{i}.{k}\"\n}}\n\nfn use{k}() -> String = describe(Some(D{k}({k}:U64)))\n"
            );
        }
        files.push(SourceFile::new(format!("m{i}.sl"), src));
        top += &format!("import m{i}\n");
    }
    top += "\nfn main() -> Unit = print(m0.use0())\n";
    files.push(SourceFile::new("top.sl", top));
    files
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("compile");
    g.sample_size(10);
    for (mods, per) in [(8, 8), (16, 16)] {
        let files = generated(mods, per);
        for kind in [PolicyKind::UseSite, PolicyKind::DefSiteDisjoint] {
            let opts = LinkOptions { policy: Policy::new(kind), depth: DEFAULT_DEPTH };
            let id = format!("{}/{mods}x{per}", kind.as_str());
            g.bench_with_input(BenchmarkId::new("sequential", &id), &files, |b, fs| {
                b.iter(|| par::sequentially(|| compile(fs, opts)))
            });
            if par::is_parallel() {
                g.bench_with_input(BenchmarkId::new("parallel", &id), &files, |b, fs| b.iter(|| compile(fs, opts)));
            }
        }
    }
    g.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
