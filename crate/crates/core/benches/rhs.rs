// Right-hand-side assembly on a 2-D bubble problem, one thread against the
// rayon line-parallel path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use multifluid::integrator::{ghost_width, Scheme, Solver};
use multifluid::io::RunConfig;
use multifluid::problems::initialize;
use multifluid::ExecPolicy;

fn solver(scheme: Scheme, n: usize, policy: ExecPolicy) -> Solver {
    let cfg = RunConfig::new("ex7", scheme);
    let spec = cfg.problem_spec().unwrap();
    let mut sc = cfg.scheme_config(&spec);
    sc.policy = policy;
    let grid = spec.grid(n, n, ghost_width(scheme));
    Solver::new(initialize(&spec, &grid), sc).unwrap()
}

fn policies() -> Vec<(&'static str, ExecPolicy)> {
    #[allow(unused_mut)]
    let mut v = vec![("sequential", ExecPolicy::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", ExecPolicy::Parallel));
    v
}

fn rhs_assembly(c: &mut Criterion) {
    let n = 128;
    for scheme in [Scheme::LdPccu, Scheme::AiWeno] {
        let mut group = c.benchmark_group(format!("rhs_{}", scheme.name()));
        group.throughput(Throughput::Elements((n * n) as u64));
        group.sample_size(20);
        for (name, policy) in policies() {
            let mut s = solver(scheme, n, policy);
            group.bench_function(BenchmarkId::new(name, n), |b| {
                b.iter(|| black_box(s.rhs().unwrap().max_speed_x));
            });
        }
        group.finish();
    }
}

criterion_group!(benches, rhs_assembly);
criterion_main!(benches);
