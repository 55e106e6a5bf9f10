//! Batch execution: rayon when the `parallel` feature is on, a plain loop
//! otherwise. Output order always follows input order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sequential,
    #[default]
    Parallel,
}

impl Mode {
    /// `Parallel` silently degrades to `Sequential` without the feature.
    pub fn effective(self) -> Self {
        if cfg!(feature = "parallel") {
            self
        } else {
            Mode::Sequential
        }
    }
}

pub fn map_slice<T, U, F>(items: &[T], mode: Mode, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode.effective() {
        Mode::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        Mode::Parallel => unreachable!(),
    }
}

pub fn map_range<U, F>(n: usize, mode: Mode, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    match mode.effective() {
        Mode::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        Mode::Parallel => unreachable!(),
    }
}
