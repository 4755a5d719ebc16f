//! Times `apps::hnf` against the naive elimination on random square input.
//!
//! Usage: `cargo run --release --example bench -- [n ...]`

use std::time::Instant;

use hnfkit::apps::hnf;
use hnfkit::oracle::naive_hnf;
use hnfkit::{BigInt, IntMat, Options};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let sizes: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let sizes = if sizes.is_empty() { vec![8, 16, 32] } else { sizes };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in sizes {
        let a = IntMat::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-(1i64 << 15)..(1 << 15))));
        let t = Instant::now();
        let slow = naive_hnf(&a).expect("singular draw");
        let ts = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let fast = hnf(&a, &Options::default()).unwrap();
        let tf = t.elapsed().as_secs_f64();
        assert_eq!(fast, slow);
        println!("n={n} hnf={tf:.3}s naive={ts:.3}s");
    }
}
