use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use relplp_core::ground::{ground_relevant, GroundAtom, GroundProgram};
use relplp_core::relevance::{evaluate_all, InterpretiveHypothesis, Priors};
use relplp_core::syntax::{desugar_annotated_bodies, parse_atom, parse_program};
use relplp_core::wmc::{conditional, InferenceMode, InferenceOptions, Literal};
use relplp_core::Parallelism;

const INT1: &str = include_str!("../../../fixtures/paper/int1_reconciled.pl");
const INT3: &str = include_str!("../../../fixtures/paper/int3.pl");
const INT5: &str = include_str!("../../../fixtures/paper/int5.pl");
const PRIORS: &str = include_str!("../../../fixtures/paper/priors.tsv");
const PRIORS_INT5: &str = include_str!("../../../fixtures/paper/priors_int5.tsv");

fn ga(text: &str) -> GroundAtom {
    GroundAtom::new(parse_atom(text).unwrap()).unwrap()
}

/// A layered reachability graph: `width` nodes per layer, every node linked
/// to every node of the next layer.
fn layered(width: usize, layers: usize) -> String {
    let mut src = String::from("path(X,Y) :- edge(X,Y).\npath(X,Y) :- edge(X,Z), path(Z,Y).\n");
    src.push_str("0.5::edge(s,n0_0).\n");
    for l in 0..layers - 1 {
        for i in 0..width {
            for j in 0..width {
                let p = 0.3 + 0.05 * ((i + 2 * j + l) % 8) as f64;
                src.push_str(&format!("{p:.2}::edge(n{l}_{i},n{}_{j}).\n", l + 1));
            }
        }
    }
    for i in 0..width {
        src.push_str(&format!("edge(n{}_{i},t).\n", layers - 1));
    }
    src
}

struct Case {
    name: &'static str,
    gp: GroundProgram,
    queries: Vec<GroundAtom>,
    evidence: Vec<Literal>,
}

fn fixture_case(name: &'static str, source: &str, priors: &str) -> Case {
    let h = InterpretiveHypothesis::from_source(name, source, Priors::parse(priors).unwrap()).unwrap();
    Case {
        name,
        gp: h.ground().unwrap(),
        queries: h.expectation_queries.clone(),
        evidence: h.evidence.clone(),
    }
}

fn synthetic_case() -> Case {
    let program = desugar_annotated_bodies(&parse_program(&layered(3, 3)).unwrap());
    let queries: Vec<GroundAtom> = ["path(s,t)", "path(n0_0,t)", "path(s,n2_1)", "path(s,n1_2)"]
        .iter()
        .map(|q| ga(q))
        .collect();
    Case {
        name: "layered-3x3",
        gp: ground_relevant(&program, &queries).unwrap(),
        queries,
        evidence: Vec::new(),
    }
}

fn options(mode: InferenceMode, parallelism: Parallelism) -> InferenceOptions {
    InferenceOptions {
        mode,
        parallelism,
        ..InferenceOptions::default()
    }
}

fn posteriors(c: &mut Criterion) {
    let cases = [
        fixture_case("int1", INT1, PRIORS),
        fixture_case("int3", INT3, PRIORS),
        synthetic_case(),
    ];
    for mode in [InferenceMode::Enumerate, InferenceMode::Compiled] {
        let mut group = c.benchmark_group(format!("conditional/{mode:?}").to_lowercase());
        group.sample_size(20);
        for case in &cases {
            for parallelism in [Parallelism::Sequential, Parallelism::Parallel] {
                let id = BenchmarkId::new(format!("{parallelism:?}").to_lowercase(), case.name);
                let opts = options(mode, parallelism);
                group.bench_with_input(id, case, |b, case| {
                    b.iter(|| conditional(&case.gp, &case.queries, &case.evidence, &opts).unwrap())
                });
            }
        }
        group.finish();
    }
}

fn hypotheses(c: &mut Criterion) {
    let priors = Priors::parse(PRIORS).unwrap();
    let all: Vec<InterpretiveHypothesis> = [("int1", INT1), ("int3", INT3)]
        .iter()
        .map(|(l, s)| InterpretiveHypothesis::from_source(*l, s, priors.clone()).unwrap())
        .chain(std::iter::once(
            InterpretiveHypothesis::from_source("int5", INT5, Priors::parse(PRIORS_INT5).unwrap()).unwrap(),
        ))
        .collect();
    let mut group = c.benchmark_group("evaluate_all");
    group.sample_size(20);
    for parallelism in [Parallelism::Sequential, Parallelism::Parallel] {
        let opts = options(InferenceMode::Enumerate, parallelism);
        group.bench_function(format!("{parallelism:?}").to_lowercase(), |b| {
            b.iter(|| evaluate_all(&all, &opts))
        });
    }
    group.finish();
}

criterion_group!(benches, posteriors, hypotheses);
criterion_main!(benches);
