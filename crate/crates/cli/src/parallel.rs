use dephaselab_core::analysis::Executor;
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Caps the worker count of sweep executors.
pub const THREADS_ENV: &str = "DEPHASELAB_THREADS";

/// Runs grid points on a dedicated rayon pool; results stay in index order.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            b = b.num_threads(n);
        }
        let pool = b.build().map_err(|e| CliError::invalid(format!("thread pool: {e}")))?;
        Ok(RayonExecutor { pool })
    }

    /// Reads the thread cap from the environment; unset means one per core.
    pub fn from_env() -> Result<Self> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(s) => match s.trim().parse::<usize>() {
                Ok(n) if n > 0 => Some(n),
                _ => return Err(CliError::invalid(format!("{THREADS_ENV} must be a positive integer, got `{s}`"))),
            },
            Err(_) => None,
        };
        Self::new(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_index_order() {
        let exec = RayonExecutor::new(Some(3)).unwrap();
        assert_eq!(exec.threads(), 3);
        assert_eq!(exec.map(100, |i| i * i), (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}
