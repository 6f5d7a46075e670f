use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use nl2pbt_core::codegen::{emit_test, EmitConfig};
use nl2pbt_core::corpus::{evaluate, shipped::sttp_cases};
use nl2pbt_core::lexicon::{shipped, tokenize};
use nl2pbt_core::logic::{beta_normalize, DEFAULT_FUEL};
use nl2pbt_core::parser::{logical_forms, parse, ParseConfig};

fn corpus(c: &mut Criterion) {
    let lex = shipped::sttp();
    let cfg = ParseConfig::default();
    let cases = sttp_cases();

    c.bench_function("lexicon/load_shipped", |b| b.iter(shipped::sttp));

    let mut group = c.benchmark_group("parse");
    for case in &cases {
        let toks = tokenize(&case.sentence).unwrap();
        group.bench_function(format!("row{}", case.id), |b| b.iter(|| parse(black_box(&toks), &lex, &cfg).unwrap()));
    }
    group.finish();

    let derivations: Vec<_> =
        cases.iter().map(|case| parse(&tokenize(&case.sentence).unwrap(), &lex, &cfg).unwrap().derivations).collect();
    c.bench_function("normalize/all_rows", |b| {
        b.iter(|| {
            for ds in &derivations {
                for d in ds {
                    black_box(beta_normalize(&d.root.semantics, DEFAULT_FUEL).unwrap());
                }
            }
        })
    });
    c.bench_function("dedupe/all_rows", |b| {
        b.iter(|| derivations.iter().map(|ds| logical_forms(ds, &cfg).unwrap().len()).sum::<usize>())
    });

    let emit = EmitConfig::default();
    c.bench_function("emit/all_rows", |b| {
        b.iter(|| cases.iter().map(|k| emit_test(&k.expected_form, &emit).unwrap().source.len()).sum::<usize>())
    });
    c.bench_function("eval/corpus", |b| b.iter(|| evaluate(black_box(&cases), &lex, &cfg).passed()));
}

criterion_group!(benches, corpus);
criterion_main!(benches);
