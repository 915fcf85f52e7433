//! Order-preserving map over a slice, parallel when the `parallel` feature
//! is enabled and more than one worker is requested.

/// Runs batches of independent work items.
///
/// Results always come back in input order, so reports do not depend on the
/// worker count.
pub struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    pub fn new(workers: usize) -> Self {
        #[cfg(feature = "parallel")]
        {
            let pool = if workers > 1 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .ok()
            } else {
                None
            };
            Executor { pool }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = workers;
            Executor {}
        }
    }

    pub fn sequential() -> Self {
        Executor::new(1)
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| items.par_iter().map(&f).collect());
        }
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order_at_any_width() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = Executor::new(1).map(&items, |x| x * x);
        let par = Executor::new(4).map(&items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 998_001);
    }
}
