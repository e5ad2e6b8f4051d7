use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};
use strangeness_core::arrangement::{event_model, event_model_of, triple_delta, EventKind, EventType};
use strangeness_core::canon::canonical;
use strangeness_core::constructions::{q3_braid, q_local_pair, triangle_gadget, Ambient, Direction, GadgetSpec, Orientation::*};
use strangeness_core::movie::{dst2_pair, st2};
use strangeness_core::numbering::{alexander_numbering, st1};
use strangeness_core::rational;
use strangeness_core::verify::numbering_oracle;

fn curves(c: &mut Criterion) {
    let g = triangle_gadget(&GadgetSpec::omega3([Out, In, In], Ambient::Nested)).unwrap();
    c.bench_function("alexander_numbering/gadget", |b| {
        b.iter(|| alexander_numbering(black_box(&g.before), rational::int(-1)).unwrap())
    });
    c.bench_function("numbering_oracle/gadget", |b| {
        b.iter(|| numbering_oracle(black_box(&g.before), rational::int(-1)).unwrap())
    });
    c.bench_function("st1/gadget", |b| b.iter(|| st1(black_box(&g.after), rational::int(-1)).unwrap()));
    c.bench_function("canonical/gadget", |b| b.iter(|| canonical(black_box(&g.before)).unwrap()));
}

fn surfaces(c: &mut Criterion) {
    let mut grp = c.benchmark_group("movies");
    grp.sample_size(10).measurement_time(Duration::from_secs(10));
    let spec = GadgetSpec::q([Out, In, In, In], Direction::Upward);
    grp.bench_function("q_local_pair", |b| b.iter(|| q_local_pair(black_box(&spec)).unwrap()));
    let q = q_local_pair(&spec).unwrap();
    grp.bench_function("dst2_pair/local", |b| b.iter(|| dst2_pair(black_box(&q.before), &q.after).unwrap()));
    let braid = q3_braid(2, false).unwrap();
    grp.bench_function("st2/braid2", |b| b.iter(|| st2(black_box(&braid.before)).unwrap()));
    grp.bench_function("q3_braid/2", |b| b.iter(|| q3_braid(black_box(2), false).unwrap()));
    grp.finish();
}

fn arrangements(c: &mut Criterion) {
    let mut grp = c.benchmark_group("arrangements");
    grp.sample_size(10);
    grp.bench_function("event_model/Q", |b| {
        b.iter(|| event_model(EventKind::Q, black_box(&[Out, In, In, In])).unwrap())
    });
    let m = event_model(EventKind::Q, &[Out, In, In, In]).unwrap();
    grp.bench_function("triple_delta/Q", |b| b.iter(|| triple_delta(black_box(&m), rational::half(-3)).unwrap()));
    grp.bench_function("event_model/H-", |b| b.iter(|| event_model_of(black_box(EventType::HMinus)).unwrap()));
    grp.finish();
}

criterion_group!(benches, curves, surfaces, arrangements);
criterion_main!(benches);
