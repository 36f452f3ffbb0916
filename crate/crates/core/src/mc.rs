//! Chunked Monte Carlo driver.
//!
//! The sample index space is cut into fixed-size chunks. Chunk `i` draws from
//! ChaCha stream `i` of the run seed, and partial results are merged in chunk
//! order, so the outcome is bitwise identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Samples per chunk.
pub const CHUNK_SAMPLES: u64 = 8192;

/// Partial result of one chunk.
pub trait Partial: Default + Send {
    fn merge(&mut self, other: Self);
}

/// Independent generator for (`seed`, `stream`).
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `body(rng, count)` over every chunk of `n` samples and merges the
/// partials in chunk order.
///
/// `threads == 1` is the sequential reference path; `0` uses every core.
pub fn run_chunked<P, F>(n: u64, seed: u64, threads: usize, body: F) -> Result<P>
where
    P: Partial,
    F: Fn(&mut ChaCha8Rng, u64) -> P + Sync,
{
    let chunks = n.div_ceil(CHUNK_SAMPLES);
    let run_one = |i: u64| {
        let count = CHUNK_SAMPLES.min(n - i * CHUNK_SAMPLES);
        body(&mut stream_rng(seed, i), count)
    };

    let partials: Vec<P> = if threads == 1 || chunks <= 1 {
        (0..chunks).map(run_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?;
        pool.install(|| (0..chunks).into_par_iter().map(run_one).collect())
    };

    let mut total = P::default();
    for p in partials {
        total.merge(p);
    }
    Ok(total)
}
