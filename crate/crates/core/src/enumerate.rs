//! Exhaustive enumeration over finite fields, split across worker threads.
//! Workers see disjoint contiguous index ranges and results are merged in
//! index order, so output never depends on the number of workers.

use std::thread;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Default cap on the size of one enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// `p^len` for a prime field, or `ResourceLimit` past `cap`.
pub fn space_size(field: FieldSpec, len: usize, cap: u128, what: &str) -> Result<u64> {
    let p = match field.size() {
        Some(p) => p as u128,
        None => return Err(Error::WrongField(format!("{what} needs a finite field"))),
    };
    let mut total: u128 = 1;
    for _ in 0..len {
        total = total.saturating_mul(p);
        if total > cap {
            return Err(Error::ResourceLimit {
                what: what.to_string(),
                requested: p.checked_pow(len as u32).unwrap_or(u128::MAX),
                cap,
            });
        }
    }
    Ok(total as u64)
}

/// The `index`-th vector of `GF(p)^len`, most significant coordinate first,
/// so indices follow lexicographic order.
pub fn vector_at(field: FieldSpec, len: usize, mut index: u64) -> Vec<Scalar> {
    let p = field.size().expect("finite field");
    let mut out = vec![field.zero(); len];
    for slot in out.iter_mut().rev() {
        *slot = field.element(index % p);
        index /= p;
    }
    out
}

/// Worker count from an explicit request, else `LRA_JOBS`, else the number of CPUs.
pub fn resolve_jobs(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var("LRA_JOBS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

/// Applies `f` to every index in `0..count` and keeps the `Some` results in
/// index order.
pub fn collect_indexed<T, F>(count: u64, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<Option<T>> + Sync,
{
    let jobs = (jobs.max(1) as u64).min(count.max(1));
    if jobs == 1 {
        let mut out = Vec::new();
        for i in 0..count {
            if let Some(x) = f(i)? {
                out.push(x);
            }
        }
        return Ok(out);
    }
    let chunk = count.div_ceil(jobs);
    let parts: Vec<Result<Vec<T>>> = thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let f = &f;
                s.spawn(move || {
                    let mut out = Vec::new();
                    for i in (w * chunk)..((w + 1) * chunk).min(count) {
                        if let Some(x) = f(i)? {
                            out.push(x);
                        }
                    }
                    Ok(out)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}
