//! Thread pool shared by assembly, sampling and the finite-difference solver.
//!
//! The pool size is read once from `BOWTIE_THREADS`; otherwise rayon's default is used.
//! Every parallel loop writes into disjoint, index-addressed output slots, so results do
//! not depend on the thread count.

use std::sync::OnceLock;

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

pub fn pool() -> &'static rayon::ThreadPool {
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("BOWTIE_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            b = b.num_threads(n);
        }
        b.build().expect("failed to build thread pool")
    })
}

/// Run `f` inside the crate thread pool.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    pool().install(f)
}
