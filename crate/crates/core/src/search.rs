//! Evaluation of given degeneration indices and the exhaustive scan of all
//! `3^n` of them.
//!
//! With pruning on, the scan walks the index tree with columns fixed left to right. Each node
//! carries the transform of a fraction-free Gauss-Jordan elimination of the
//! columns chosen so far, so a child costs one sparse matrix-vector product
//! and one rank-one update. If the first `n - 1` columns are dependent, the
//! last minor vanishes and every index below that node fails the sign test,
//! so the subtree is skipped. Candidates found this way are re-evaluated
//! through [`SlopeProblem::evaluate`] before they are reported. Without
//! pruning every index gets its own signed-minor computation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::degeneration::{degenerate_entry, degeneration_matrix, DegenerationIndex, IndexValue};
use crate::error::{Error, Result};
use crate::exact::{signed_maximal_minors, ExactInt};
use crate::gluing::ExponentMatrix;
use crate::peripheral::{Outcome, Slope, SlopeProblem, SlopeResult};

/// Above this many tetrahedra a scan is worth a warning.
pub const WARN_ABOVE: usize = 16;
/// Above this many tetrahedra a scan needs [`SearchOptions::force`].
pub const FORCE_ABOVE: usize = 18;
/// `3^40` is the largest power of three below `u64::MAX`.
pub const MAX_TETS: usize = 40;

/// How a scan of a given size is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    Ok,
    Warn,
    NeedsForce,
}

pub fn budget(tets: usize) -> Budget {
    if tets > FORCE_ABOVE {
        Budget::NeedsForce
    } else if tets > WARN_ABOVE {
        Budget::Warn
    } else {
        Budget::Ok
    }
}

/// Where an interrupted scan stopped: the start rank of the last completed
/// chunk and the chunk size. Written as `start:size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResumeToken {
    pub last_chunk_start: u64,
    pub chunk_size: u64,
}

impl ResumeToken {
    fn next_start(&self) -> u64 {
        self.last_chunk_start + self.chunk_size
    }
}

impl fmt::Display for ResumeToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.last_chunk_start, self.chunk_size)
    }
}

impl FromStr for ResumeToken {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ResumeToken(s.to_string());
        let (a, b) = s.trim().split_once(':').ok_or_else(bad)?;
        let last_chunk_start = a.parse().map_err(|_| bad())?;
        let chunk_size: u64 = b.parse().map_err(|_| bad())?;
        if chunk_size == 0 || last_chunk_start % chunk_size != 0 {
            return Err(bad());
        }
        Ok(ResumeToken {
            last_chunk_start,
            chunk_size,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads; `0` means one per available core.
    pub workers: usize,
    /// Skip subtrees whose leading columns are dependent.
    pub prune: bool,
    /// Number of leading index entries that identify a chunk.
    pub chunk_depth: Option<usize>,
    pub resume: Option<ResumeToken>,
    /// Stop after this many chunks and hand back a resume token.
    pub max_chunks: Option<u64>,
    /// Checked before each chunk starts.
    pub cancel: Option<Arc<AtomicBool>>,
    /// Allow scans above [`FORCE_ABOVE`] tetrahedra.
    pub force: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: 1,
            prune: false,
            chunk_depth: None,
            resume: None,
            max_chunks: None,
            cancel: None,
            force: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    /// Certified ideal points with a slope, by enumeration rank (or in input
    /// order for [`verify_indices`]).
    pub certified: Vec<SlopeResult>,
    /// For [`verify_indices`], every given index that did not yield a slope.
    /// For a scan, ideal points where both valuations vanish.
    pub rejected: Vec<Outcome>,
    /// Indices covered, counting skipped subtrees and earlier resumed runs.
    pub scanned: u64,
    pub total: u64,
    pub distinct_slopes: Vec<Slope>,
    pub wall_time: Duration,
    pub resume_token: Option<ResumeToken>,
}

impl SearchReport {
    pub fn complete(&self) -> bool {
        self.scanned == self.total
    }

    fn finish(
        certified: Vec<SlopeResult>,
        rejected: Vec<Outcome>,
        scanned: u64,
        total: u64,
        started: Instant,
        resume_token: Option<ResumeToken>,
    ) -> Self {
        let distinct_slopes = certified
            .iter()
            .map(|r| r.slope.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        SearchReport {
            certified,
            rejected,
            scanned,
            total,
            distinct_slopes,
            wall_time: started.elapsed(),
            resume_token,
        }
    }

    /// Everything but the wall time, so equal runs print equal JSON.
    pub fn to_json(&self) -> Value {
        json!({
            "certified": self.certified.iter().map(SlopeResult::to_json).collect::<Vec<_>>(),
            "rejected": self.rejected.iter().map(Outcome::to_json).collect::<Vec<_>>(),
            "scanned": self.scanned,
            "total": self.total,
            "complete": self.complete(),
            "distinct_slopes": self.distinct_slopes.iter().map(Slope::to_string).collect::<Vec<_>>(),
            "resume_token": self.resume_token.map(|t| t.to_string()),
        })
    }
}

/// Evaluates exactly the given indices, in order.
pub fn verify_indices(
    problem: &SlopeProblem,
    indices: &[DegenerationIndex],
) -> Result<SearchReport> {
    let started = Instant::now();
    let mut certified = Vec::new();
    let mut rejected = Vec::new();
    for index in indices {
        match problem.evaluate(index)? {
            Outcome::Certified(r) => certified.push(r),
            other => rejected.push(other),
        }
    }
    let n = indices.len() as u64;
    Ok(SearchReport::finish(
        certified, rejected, n, n, started, None,
    ))
}

fn pow3(k: usize) -> u64 {
    3u64.pow(k as u32)
}

/// Columns of every `R(I)` in sparse form: `columns[k][v]` lists the nonzero
/// `(row, value)` pairs of column `k` when `i_k = v`.
struct Columns {
    rows: usize,
    columns: Vec<[Vec<(usize, i64)>; 3]>,
}

impl Columns {
    fn new(r: &ExponentMatrix) -> Self {
        let rows = r.matrix().rows();
        let columns = (0..r.tets())
            .map(|k| {
                IndexValue::ALL.map(|v| {
                    (0..rows)
                        .filter_map(|j| {
                            let e = degenerate_entry(v, r.r_prime(j, k), r.r_double_prime(j, k));
                            (e != 0).then_some((j, e))
                        })
                        .collect()
                })
            })
            .collect();
        Columns { rows, columns }
    }
}

/// Per-depth elimination state: `t` is the `rows x rows` transform, `prev`
/// the last pivot.
struct Walker<'a, T> {
    cols: &'a Columns,
    transforms: Vec<Vec<T>>,
    prevs: Vec<T>,
    y: Vec<T>,
    found: Vec<u64>,
}

impl<'a, T: ExactInt> Walker<'a, T> {
    fn new(cols: &'a Columns) -> Self {
        let r = cols.rows;
        let n = cols.columns.len();
        let mut identity = vec![T::from_i64(0); r * r];
        for i in 0..r {
            identity[i * r + i] = T::from_i64(1);
        }
        let mut transforms = vec![identity.clone(); n];
        transforms[0] = identity;
        Walker {
            cols,
            transforms,
            prevs: vec![T::from_i64(1); n],
            y: vec![T::from_i64(0); r],
            found: Vec::new(),
        }
    }

    /// `y = T_depth · column`.
    fn project(&mut self, depth: usize, column: &[(usize, i64)]) -> Option<()> {
        let r = self.cols.rows;
        let t = &self.transforms[depth];
        for i in 0..r {
            let mut acc = T::from_i64(0);
            for &(k, c) in column {
                let tik = &t[i * r + k];
                if !tik.is_zero() {
                    acc = T::mul_add(&acc, tik, &T::from_i64(c))?;
                }
            }
            self.y[i] = acc;
        }
        Some(())
    }

    /// True when the last column completes a sign-definite vector.
    fn leaf_certifies(&self, depth: usize) -> bool {
        let d = self.prevs[depth].signum();
        self.y.iter().all(|v| v.signum() == -d)
    }

    /// Pivots the projected column into row `depth`, writing the state for
    /// `depth + 1`. Returns `Some(false)` when the column adds no rank.
    fn pivot(&mut self, depth: usize) -> Option<bool> {
        let r = self.cols.rows;
        let Some(p) = (depth..r).find(|&i| !self.y[i].is_zero()) else {
            return Some(false);
        };
        let (before, after) = self.transforms.split_at_mut(depth + 1);
        let src = &before[depth];
        let dst = &mut after[0];
        dst.clone_from(src);
        if p != depth {
            self.y.swap(p, depth);
            for k in 0..r {
                dst.swap(p * r + k, depth * r + k);
            }
        }
        let piv = self.y[depth].clone();
        let prev = &self.prevs[depth];
        for i in (0..r).filter(|&i| i != depth) {
            let yi = &self.y[i];
            for k in 0..r {
                let (tik, tjk) = (&dst[i * r + k], &dst[depth * r + k]);
                if yi.is_zero() && tik.is_zero() {
                    continue;
                }
                dst[i * r + k] = T::cross_div(&piv, tik, yi, tjk, prev)?;
            }
        }
        self.prevs[depth + 1] = piv;
        Some(true)
    }

    /// Walks the subtree under `prefix`, recording ranks of candidates.
    fn walk(&mut self, depth: usize, rank: u64, prefix: &[IndexValue]) -> Option<()> {
        let n = self.cols.columns.len();
        let last = n - 1;
        let fixed = prefix.get(depth).copied();
        for v in IndexValue::ALL {
            if fixed.is_some_and(|f| f != v) {
                continue;
            }
            let child = rank * 3 + u64::from(v.digit());
            let column = &self.cols.columns[depth][v.digit() as usize];
            self.project(depth, column)?;
            if depth == last {
                if self.leaf_certifies(depth) {
                    self.found.push(child);
                }
            } else if self.pivot(depth)? {
                self.walk(depth + 1, child, prefix)?;
            }
        }
        Some(())
    }
}

fn pruned_chunk<T: ExactInt>(cols: &Columns, prefix: &[IndexValue]) -> Option<Vec<u64>> {
    let mut walker = Walker::<T>::new(cols);
    walker.walk(0, 0, prefix)?;
    Some(walker.found)
}

fn unpruned_chunk(r: &ExponentMatrix, n: usize, start: u64, size: u64) -> Result<Vec<u64>> {
    let mut found = Vec::new();
    for rank in start..start + size {
        let index = DegenerationIndex::from_rank(rank, n);
        let ri = degeneration_matrix(r, &index)?;
        let certifies = match signed_maximal_minors::<i64>(&ri) {
            Some(d) => sign_definite(&d),
            None => sign_definite(
                &signed_maximal_minors::<BigInt>(&ri).expect("bigint arithmetic does not overflow"),
            ),
        };
        if certifies {
            found.push(rank);
        }
    }
    Ok(found)
}

fn sign_definite<T: ExactInt>(d: &[T]) -> bool {
    let s = d.first().map_or(0, ExactInt::signum);
    s != 0 && d.iter().all(|v| v.signum() == s)
}

fn scan_chunk(
    problem: &SlopeProblem,
    cols: &Columns,
    prune: bool,
    start: u64,
    size: u64,
    depth: usize,
) -> Result<Vec<u64>> {
    let n = problem.tets();
    if !prune {
        return unpruned_chunk(problem.exponent_matrix(), n, start, size);
    }
    let prefix = &DegenerationIndex::from_rank(start / size, depth)
        .entries()
        .to_vec();
    Ok(match pruned_chunk::<i64>(cols, prefix) {
        Some(found) => found,
        None => pruned_chunk::<BigInt>(cols, prefix).expect("bigint arithmetic does not overflow"),
    })
}

fn default_chunk_depth(n: usize, workers: usize) -> usize {
    // enough chunks to balance the pool, each still a sizeable subtree
    let want = (64 * workers.max(1)).max(729) as u64;
    (0..=n).find(|&p| pow3(p) >= want).unwrap_or(n)
}

/// Scans every index in `{0, 1, ∞}^n` in enumeration order.
pub fn exhaustive_search(problem: &SlopeProblem, options: &SearchOptions) -> Result<SearchReport> {
    let started = Instant::now();
    let n = problem.tets();
    if n == 0 {
        return Err(Error::OutOfRange(
            "cannot search an empty triangulation".into(),
        ));
    }
    if n > MAX_TETS {
        return Err(Error::Budget(format!(
            "3^{n} indices do not fit the enumeration counter (at most {MAX_TETS} tetrahedra)"
        )));
    }
    if budget(n) == Budget::NeedsForce && !options.force {
        return Err(Error::Budget(format!(
            "3^{n} indices; scans above {FORCE_ABOVE} tetrahedra must be forced"
        )));
    }
    let total = pow3(n);
    let workers = if options.workers == 0 {
        std::thread::available_parallelism().map_or(1, |w| w.get())
    } else {
        options.workers
    };

    let (chunk_size, begin) = match options.resume {
        Some(token) => {
            let valid_size = (0..=n).any(|p| pow3(n - p) == token.chunk_size);
            if !valid_size || token.next_start() > total {
                return Err(Error::ResumeToken(token.to_string()));
            }
            (token.chunk_size, token.next_start())
        }
        None => {
            let depth = options
                .chunk_depth
                .unwrap_or_else(|| default_chunk_depth(n, workers))
                .min(n);
            (pow3(n - depth), 0)
        }
    };
    let depth = (0..=n)
        .find(|&p| pow3(n - p) == chunk_size)
        .expect("chunk size is a power of three");
    let remaining = (total - begin) / chunk_size;
    let planned = options.max_chunks.map_or(remaining, |m| m.min(remaining));

    let cols = Columns::new(problem.exponent_matrix());
    let cancel = options.cancel.clone();
    let run_chunk = |c: u64| -> Option<Result<Vec<u64>>> {
        if cancel.as_ref().is_some_and(|f| f.load(Ordering::Relaxed)) {
            return None;
        }
        let start = begin + c * chunk_size;
        Some(scan_chunk(
            problem,
            &cols,
            options.prune,
            start,
            chunk_size,
            depth,
        ))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    let chunks: Vec<Option<Result<Vec<u64>>>> =
        pool.install(|| (0..planned).into_par_iter().map(run_chunk).collect());

    // Only a contiguous run of finished chunks can be described by a token.
    let mut candidates = Vec::new();
    let mut done = 0u64;
    for chunk in chunks {
        match chunk {
            Some(found) => {
                candidates.extend(found?);
                done += 1;
            }
            None => break,
        }
    }
    let scanned = begin + done * chunk_size;
    let resume_token = (scanned < total && scanned > 0).then(|| ResumeToken {
        last_chunk_start: scanned - chunk_size,
        chunk_size,
    });

    let mut certified = Vec::new();
    let mut rejected = Vec::new();
    for rank in candidates {
        let index = DegenerationIndex::from_rank(rank, n);
        match problem.evaluate(&index)? {
            Outcome::Certified(r) => certified.push(r),
            no_slope @ Outcome::NoSlope { .. } => rejected.push(no_slope),
            Outcome::NotSignDefinite { .. } => {
                return Err(Error::Internal(format!(
                    "index {index} passed the scan but its degeneration vector is not sign-definite"
                )))
            }
        }
    }
    Ok(SearchReport::finish(
        certified,
        rejected,
        scanned,
        total,
        started,
        resume_token,
    ))
}
