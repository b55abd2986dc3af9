//! Splitting the `Φ_p` search tree into independent subtrees and reducing
//! their partial sums.
//!
//! A [`SubtreeTask`] fixes the rightmost `d` values. [`run_task`] finishes
//! the backtracking below it, factoring the falling-factorial products
//! through the tree: a node's value is `Σ_child ± E^{(p)}(child) · value(child)`,
//! so products are shared between siblings and the deep, numerous nodes stay
//! in `i128`. Overflow promotes to `BigInt`.
//!
//! Partial results form a commutative monoid under exact addition, so the
//! reduced result is independent of worker count, split depth and schedule.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::backtrack::{check_generator_order, SuffixState};
use crate::coefficient::{falling_factorial, falling_factorial_u128};
use crate::error::{Error, Result};
use crate::permutation::Parity;
use crate::ExactInt;

/// Largest split depth picked automatically.
pub const MAX_AUTO_DEPTH: usize = 4;

/// Tasks per worker the automatic depth aims for.
pub const TASKS_PER_WORKER: usize = 8;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses every available core. Ignored without the
    /// `parallel` feature.
    pub workers: Option<usize>,
    /// Split depth; `None` picks one from the worker count.
    pub depth: Option<usize>,
    /// Periodic `tasks_done/tasks_total, terms_evaluated` lines on stderr.
    pub progress: bool,
}

impl RunOptions {
    pub fn workers(&self) -> usize {
        self.workers.unwrap_or_else(default_workers).max(1)
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// A subtree of the search: the fixed values at positions `N, N-1, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeTask {
    state: SuffixState,
}

impl SubtreeTask {
    /// Rejects suffixes that the pruning rule would never construct.
    pub fn new(p: u32, fixed_suffix: &[u8]) -> Result<Self> {
        Ok(SubtreeTask {
            state: SuffixState::from_suffix(p, fixed_suffix)?,
        })
    }

    pub fn p(&self) -> u32 {
        self.state.p()
    }

    pub fn fixed_suffix(&self) -> &[u8] {
        self.state.chosen()
    }

    pub fn running_sum(&self) -> i64 {
        self.state.running_sum()
    }

    pub fn state(&self) -> &SuffixState {
        &self.state
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialResult {
    pub signed_sum: ExactInt,
    pub even_count: u64,
    pub odd_count: u64,
    pub terms_evaluated: u64,
}

impl PartialResult {
    pub fn zero() -> Self {
        PartialResult {
            signed_sum: ExactInt::zero(),
            even_count: 0,
            odd_count: 0,
            terms_evaluated: 0,
        }
    }

    pub fn combine(mut self, other: PartialResult) -> Self {
        self.signed_sum += other.signed_sum;
        self.even_count += other.even_count;
        self.odd_count += other.odd_count;
        self.terms_evaluated += other.terms_evaluated;
        self
    }
}

impl Default for PartialResult {
    fn default() -> Self {
        Self::zero()
    }
}

pub fn reduce<I: IntoIterator<Item = PartialResult>>(parts: I) -> PartialResult {
    parts
        .into_iter()
        .fold(PartialResult::zero(), PartialResult::combine)
}

/// All reachable suffixes of length `depth`, lexicographic in
/// `(σ(N), σ(N-1), …)`. For `p = 1` the tree has no interior and the single
/// root task is returned for any depth.
pub fn partition_work(p: u32, depth: usize) -> Result<Vec<SubtreeTask>> {
    let n = check_generator_order(p)?;
    if n == 2 {
        return Ok(vec![SubtreeTask {
            state: SuffixState::root(p)?,
        }]);
    }
    if depth == 0 || depth > n - 2 {
        return Err(Error::invalid(format!(
            "split depth {depth} out of range 1..={} for p = {p}",
            n - 2
        )));
    }
    let mut tasks = Vec::new();
    let mut stack = vec![SuffixState::root(p)?];
    // Reverse push order so that smaller values pop first.
    while let Some(state) = stack.pop() {
        if state.chosen().len() == depth {
            tasks.push(SubtreeTask { state });
            continue;
        }
        for v in (2..=n as u8).rev() {
            if let Some(child) = state.extend(v) {
                stack.push(child);
            }
        }
    }
    Ok(tasks)
}

/// Smallest depth giving at least [`TASKS_PER_WORKER`] tasks per worker,
/// capped at [`MAX_AUTO_DEPTH`] and at the tree height.
pub fn default_depth(p: u32, workers: usize) -> Result<usize> {
    let n = check_generator_order(p)?;
    if n == 2 {
        return Ok(1);
    }
    let cap = MAX_AUTO_DEPTH.min(n - 2);
    let target = TASKS_PER_WORKER * workers.max(1);
    for d in 1..cap {
        if partition_work(p, d)?.len() >= target {
            return Ok(d);
        }
    }
    Ok(cap)
}

#[derive(Debug, Clone)]
enum Wide {
    Small(i128),
    Big(BigInt),
}

impl Wide {
    fn into_big(self) -> BigInt {
        match self {
            Wide::Small(v) => BigInt::from(v),
            Wide::Big(b) => b,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Wide::Small(v) => *v == 0,
            Wide::Big(b) => b.is_zero(),
        }
    }

    fn mul(&self, f: &Factor) -> Wide {
        match (self, f.small) {
            (Wide::Small(a), Some(b)) => match a.checked_mul(b) {
                Some(v) => Wide::Small(v),
                None => Wide::Big(BigInt::from(*a) * b),
            },
            (Wide::Small(a), None) => Wide::Big(&f.big * *a),
            (Wide::Big(a), _) => Wide::Big(a * &f.big),
        }
    }

    fn add_signed(&mut self, other: Wide, negate: bool) {
        if let (Wide::Small(a), Wide::Small(b)) = (&*self, &other) {
            let r = if negate {
                a.checked_sub(*b)
            } else {
                a.checked_add(*b)
            };
            if let Some(v) = r {
                *self = Wide::Small(v);
                return;
            }
        }
        let lhs = std::mem::replace(self, Wide::Small(0)).into_big();
        let rhs = other.into_big();
        *self = Wide::Big(if negate { lhs - rhs } else { lhs + rhs });
    }
}

/// `(T + p)^{(p)}` for a running sum `T`.
#[derive(Debug, Clone)]
struct Factor {
    small: Option<i128>,
    big: BigInt,
}

/// Per-`p` lookup of falling factorials by running sum.
#[derive(Debug, Clone)]
pub(crate) struct Kernel {
    p: u32,
    n: u8,
    factors: Vec<Factor>,
}

struct Subtotal {
    sum: Wide,
    even: u64,
    odd: u64,
}

impl Kernel {
    pub(crate) fn new(p: u32) -> Result<Self> {
        let n = check_generator_order(p)?;
        // With k values drawn from the top of 2..=N the sum peaks at p(p-1)/2.
        let max_t = (p as usize * (p as usize).saturating_sub(1)) / 2;
        let factors = (0..=max_t as u64)
            .map(|t| {
                let e = t + p as u64;
                let small =
                    falling_factorial_u128(e, p as u64).and_then(|v| i128::try_from(v).ok());
                let big = match small {
                    Some(v) => BigInt::from(v),
                    None => falling_factorial(e, p as u64),
                };
                Factor { small, big }
            })
            .collect();
        Ok(Kernel {
            p,
            n: n as u8,
            factors,
        })
    }

    /// Signed sum of the leaves below a node, each leaf weighted by the
    /// factors strictly below the node and signed by the inversions added
    /// strictly below it.
    fn explore(&self, placed: u64, sum: i64, remaining: usize) -> Subtotal {
        if remaining == 0 {
            return Subtotal {
                sum: Wide::Small(1),
                even: 1,
                odd: 0,
            };
        }
        let mut acc = Subtotal {
            sum: Wide::Small(0),
            even: 0,
            odd: 0,
        };
        // Candidates with v < p + 1 - sum are pruned.
        let start = (self.p as i64 + 1 - sum).max(2) as u8;
        for v in start..=self.n {
            let bit = 1u64 << (v - 1);
            if placed & bit != 0 {
                continue;
            }
            let t = sum + v as i64 - 1 - self.p as i64;
            let child = self.explore(placed | bit, t, remaining - 1);
            let flip = (placed & (bit - 1)).count_ones() % 2 == 1;
            let weighted = child.sum.mul(&self.factors[t as usize]);
            if !weighted.is_zero() {
                acc.sum.add_signed(weighted, flip);
            }
            if flip {
                acc.even += child.odd;
                acc.odd += child.even;
            } else {
                acc.even += child.even;
                acc.odd += child.odd;
            }
        }
        acc
    }

    pub(crate) fn run(&self, task: &SubtreeTask) -> PartialResult {
        let state = task.state();
        let remaining = self.n as usize - 1 - state.chosen().len();
        let below = self.explore(state.placed_mask(), state.running_sum(), remaining);

        // Factors along the fixed suffix.
        let mut prefix = BigInt::one();
        let mut t = 0i64;
        for &v in state.chosen() {
            t += v as i64 - 1 - self.p as i64;
            prefix *= &self.factors[t as usize].big;
        }
        let mut signed_sum = below.sum.into_big() * prefix;
        let (mut even, mut odd) = (below.even, below.odd);
        if state.parity() == Parity::Odd {
            signed_sum = -signed_sum;
            std::mem::swap(&mut even, &mut odd);
        }
        PartialResult {
            signed_sum,
            even_count: even,
            odd_count: odd,
            terms_evaluated: even + odd,
        }
    }
}

/// Completes the search below `task`, returning its exact partial sum.
pub fn run_task(task: &SubtreeTask) -> PartialResult {
    Kernel::new(task.p())
        .expect("task order was validated at construction")
        .run(task)
}

struct Progress {
    enabled: bool,
    total: usize,
    done: AtomicUsize,
    terms: AtomicU64,
    last: Mutex<Instant>,
}

impl Progress {
    const PERIOD: Duration = Duration::from_millis(500);

    fn new(enabled: bool, total: usize) -> Self {
        Progress {
            enabled,
            total,
            done: AtomicUsize::new(0),
            terms: AtomicU64::new(0),
            last: Mutex::new(Instant::now()),
        }
    }

    fn tick(&self, part: &PartialResult) {
        if !self.enabled {
            return;
        }
        let done = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        let terms = self
            .terms
            .fetch_add(part.terms_evaluated, Ordering::Relaxed)
            + part.terms_evaluated;
        let mut last = self.last.lock().expect("progress lock poisoned");
        if done == self.total || last.elapsed() >= Self::PERIOD {
            *last = Instant::now();
            eprintln!("{done}/{}, {terms}", self.total);
        }
    }
}

/// Runs `tasks` one after another on the calling thread.
pub fn run_tasks_sequential(tasks: &[SubtreeTask]) -> PartialResult {
    run_sequential_with(tasks, &Progress::new(false, tasks.len()))
}

fn run_sequential_with(tasks: &[SubtreeTask], progress: &Progress) -> PartialResult {
    let Some(first) = tasks.first() else {
        return PartialResult::zero();
    };
    let kernel = Kernel::new(first.p()).expect("validated task");
    reduce(tasks.iter().map(|t| {
        let part = kernel.run(t);
        progress.tick(&part);
        part
    }))
}

/// Runs `tasks` on a dedicated rayon pool of `workers` threads.
#[cfg(feature = "parallel")]
pub fn run_tasks_parallel(tasks: &[SubtreeTask], workers: usize) -> Result<PartialResult> {
    run_parallel_with(tasks, workers, &Progress::new(false, tasks.len()))
}

#[cfg(feature = "parallel")]
fn run_parallel_with(
    tasks: &[SubtreeTask],
    workers: usize,
    progress: &Progress,
) -> Result<PartialResult> {
    use rayon::prelude::*;

    let Some(first) = tasks.first() else {
        return Ok(PartialResult::zero());
    };
    let kernel = Kernel::new(first.p())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                let part = kernel.run(t);
                progress.tick(&part);
                part
            })
            .reduce(PartialResult::zero, PartialResult::combine)
    }))
}

/// Partitions `Φ_p` and reduces every subtree.
pub fn run(p: u32, options: &RunOptions) -> Result<PartialResult> {
    let workers = options.workers();
    let depth = match options.depth {
        Some(d) => d,
        None => default_depth(p, workers)?,
    };
    let tasks = partition_work(p, depth)?;
    let progress = Progress::new(options.progress, tasks.len());

    #[cfg(feature = "parallel")]
    {
        if workers > 1 {
            return run_parallel_with(&tasks, workers, &progress);
        }
    }
    Ok(run_sequential_with(&tasks, &progress))
}
