//! Job execution over independent work items.
//!
//! With the `parallel` feature the items run on a dedicated rayon pool of
//! the requested size; without it, or with one worker, they run in order on
//! the calling thread. Results never depend on the path taken: every job is
//! a pure function of its inputs and its own seed.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Runs batches of independent jobs with a fixed worker count.
#[derive(Debug, Clone, Copy)]
pub struct Executor {
    workers: usize,
}

impl Default for Executor {
    fn default() -> Self {
        Self::sequential()
    }
}

impl Executor {
    pub fn new(workers: usize) -> Self {
        Self {
            workers: workers.max(1),
        }
    }

    pub fn sequential() -> Self {
        Self { workers: 1 }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Whether jobs will actually be dispatched to a thread pool.
    pub fn is_parallel(&self) -> bool {
        cfg!(feature = "parallel") && self.workers > 1
    }

    /// Maps `f` over `items`, returning results in item order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.workers > 1 {
            return self.pool().install(|| items.par_iter().map(&f).collect());
        }
        map_sequential(items, f)
    }

    /// Runs `f` on every item and hands each `(index, result)` to
    /// `on_done` on the calling thread as soon as it is available.
    /// Completion order is unspecified when running in parallel.
    pub fn for_each_completion<T, R, F, D>(&self, items: &[T], f: F, mut on_done: D)
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
        D: FnMut(usize, R),
    {
        #[cfg(feature = "parallel")]
        if self.workers > 1 {
            let (tx, rx) = std::sync::mpsc::channel();
            let f = &f;
            self.pool().in_place_scope(|scope| {
                for (i, item) in items.iter().enumerate() {
                    let tx = tx.clone();
                    scope.spawn(move |_| {
                        // receiver outlives the scope
                        let _ = tx.send((i, f(item)));
                    });
                }
                drop(tx);
                for (i, r) in rx.iter() {
                    on_done(i, r);
                }
            });
            return;
        }
        for (i, item) in items.iter().enumerate() {
            on_done(i, f(item));
        }
    }

    #[cfg(feature = "parallel")]
    fn pool(&self) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .expect("failed to build rayon thread pool")
    }
}

/// Plain in-order map on the calling thread.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}
