//! Trial scheduling: a rayon worker pool when the `parallel` feature is on,
//! a plain loop otherwise. Trials are pure functions of their index, and the
//! reduction is an integer sum, so the result does not depend on the number
//! of workers.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// Run on a worker pool: the global rayon pool, or a dedicated pool of
    /// `workers` threads. Without the `parallel` feature this runs
    /// sequentially.
    #[default]
    Parallel,
    Workers(usize),
    Sequential,
}

impl Execution {
    /// Number of indices in `0..trials` for which `trial` returns `true`.
    pub fn count<F>(self, trials: u64, trial: F) -> u64
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        match self {
            Execution::Sequential => sequential(trials, &trial),
            #[cfg(feature = "parallel")]
            Execution::Parallel => parallel(trials, &trial),
            #[cfg(feature = "parallel")]
            Execution::Workers(workers) => rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .expect("failed to start worker pool")
                .install(|| parallel(trials, &trial)),
            #[cfg(not(feature = "parallel"))]
            Execution::Parallel | Execution::Workers(_) => sequential(trials, &trial),
        }
    }
}

fn sequential<F: Fn(u64) -> bool>(trials: u64, trial: &F) -> u64 {
    (0..trials).filter(|&t| trial(t)).count() as u64
}

#[cfg(feature = "parallel")]
fn parallel<F: Fn(u64) -> bool + Sync + Send>(trials: u64, trial: &F) -> u64 {
    use rayon::prelude::*;
    (0..trials).into_par_iter().filter(|&t| trial(t)).count() as u64
}
