use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use icsaead::envelope::{generate_nonce, open, seal_with_nonce};
use icsaead::{aead_encrypt, chacha20_block, poly1305_mac, BlockCounter32, Key256, Nonce96, OsEntropy};

const SIZES: [usize; 4] = [28, 56, 112, 224];

fn primitives(c: &mut Criterion) {
    let key = Key256::new([0x24; 32]);
    let nonce = Nonce96::new([0x42; 12]);
    c.bench_function("chacha20_block", |b| {
        b.iter(|| chacha20_block(black_box(&key), BlockCounter32(1), black_box(&nonce)))
    });
    c.bench_function("generate_nonce/os", |b| b.iter(|| generate_nonce(&mut OsEntropy).unwrap()));

    let mut g = c.benchmark_group("poly1305");
    for size in SIZES {
        let msg = vec![0x5a; size];
        g.throughput(Throughput::Bytes(size as u64));
        g.bench_with_input(BenchmarkId::from_parameter(size), &msg, |b, m| {
            b.iter(|| poly1305_mac(&[7; 32], black_box(m)).unwrap())
        });
    }
    g.finish();
}

fn aead(c: &mut Criterion) {
    let key = Key256::new([0x24; 32]);
    let nonce = Nonce96::new([0x42; 12]);
    let mut g = c.benchmark_group("aead_encrypt");
    for size in SIZES {
        let pt = vec![0xa5; size];
        g.throughput(Throughput::Bytes(size as u64));
        g.bench_with_input(BenchmarkId::from_parameter(size), &pt, |b, pt| {
            b.iter(|| aead_encrypt(&key, &nonce, black_box(pt), &[]))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("envelope_cycle");
    for size in SIZES {
        let pt = vec![0xa5; size];
        g.throughput(Throughput::Bytes(size as u64));
        g.bench_with_input(BenchmarkId::from_parameter(size), &pt, |b, pt| {
            b.iter(|| {
                let sealed = seal_with_nonce(&key, &nonce, black_box(pt));
                open(&key, &sealed).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, primitives, aead);
criterion_main!(benches);
