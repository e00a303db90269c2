//! Best-first interval branch-and-bound.
//!
//! The engine maximises an [`Objective`] over a [`RegionSpec`]. Boxes are
//! kept in a max-heap on their enclosure upper bound (FIFO among equal
//! bounds), bisected on the wider side, and discarded when a constraint
//! certifiably fails on them or when their upper bound falls below the best
//! certified point value. The upper bound reported is always the largest
//! enclosure among the live boxes, so it stays sound when the budget runs
//! out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::algebra::{Box2, Interval};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::region::{Feasibility, RegionSpec};

/// Anything that can be enclosed over a box of a region.
pub trait Objective<F: Scalar>: Sync {
    /// Enclosure of the objective over the feasible points of `b`.
    fn enclose(&self, b: &Box2<F>, region: &RegionSpec<F>) -> Interval<F>;

    /// Enclosure at a single point.
    fn enclose_point(&self, p: (F, F), region: &RegionSpec<F>) -> Interval<F> {
        self.enclose(&Box2::new(Interval::point(p.0), Interval::point(p.1)), region)
    }
}

/// `-objective`
pub struct Negated<'a, O>(pub &'a O);

impl<F: Scalar, O: Objective<F>> Objective<F> for Negated<'_, O> {
    fn enclose(&self, b: &Box2<F>, region: &RegionSpec<F>) -> Interval<F> {
        -self.0.enclose(b, region)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BbOptions<F> {
    pub tol: F,
    /// Maximum number of boxes bisected.
    pub budget: usize,
    /// 0 runs single-threaded (deterministic box counts).
    pub threads: usize,
}

impl<F: Scalar> BbOptions<F> {
    pub fn new(tol: F, budget: usize) -> Self {
        Self {
            tol,
            budget,
            threads: 0,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > F::zero()) {
            return Err(Error::InvalidInput(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.budget == 0 {
            return Err(Error::InvalidInput("budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// `upper - lower <= tol`.
    Converged,
    /// Budget used up; the upper bound is still sound.
    BudgetExhausted,
    /// A caller-supplied stop condition fired.
    Stopped,
    /// Remaining boxes cannot be bisected further in this precision.
    Resolution,
}

#[derive(Clone, Debug)]
pub struct BbOutcome<F> {
    pub upper: F,
    /// Certified lower bound on the objective at `witness`.
    pub lower: F,
    pub witness: Option<(F, F)>,
    pub boxes: usize,
    pub termination: Termination,
}

struct Node<F> {
    ub: F,
    seq: u64,
    bx: Box2<F>,
}

impl<F: Scalar> PartialEq for Node<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<F: Scalar> Eq for Node<F> {}

impl<F: Scalar> PartialOrd for Node<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Scalar> Ord for Node<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub
            .partial_cmp(&other.ub)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Child<F> {
    bx: Box2<F>,
    ub: F,
    best_point: Option<((F, F), F)>,
}

fn best_point<F: Scalar, O: Objective<F>>(obj: &O, region: &RegionSpec<F>, bx: &Box2<F>) -> Option<((F, F), F)> {
    let mut best: Option<((F, F), F)> = None;
    let c = bx.center();
    for p in std::iter::once(c).chain(bx.corners()) {
        if !region.contains_point(p) {
            continue;
        }
        let v = obj.enclose_point(p, region).lo();
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((p, v));
        }
    }
    best
}

fn expand<F: Scalar, O: Objective<F>>(obj: &O, region: &RegionSpec<F>, parent: &Node<F>) -> Vec<Child<F>> {
    let (a, b) = parent.bx.bisect();
    [a, b]
        .into_iter()
        .filter(|bx| region.feasibility(bx) != Feasibility::Infeasible)
        .map(|bx| {
            let enc = obj.enclose(&bx, region);
            Child {
                ub: enc.hi().min(parent.ub),
                best_point: best_point(obj, region, &bx),
                bx,
            }
        })
        .collect()
}

fn splittable<F: Scalar>(b: &Box2<F>) -> bool {
    let can = |i: &Interval<F>| {
        let m = i.mid();
        m > i.lo() && m < i.hi()
    };
    can(&b.x) || can(&b.y)
}

/// Maximise `obj` over `region`. `stop(upper, lower)` is consulted before
/// each bisection and ends the search early when it returns true.
pub fn maximize<F, O>(
    obj: &O,
    region: &RegionSpec<F>,
    opts: &BbOptions<F>,
    stop: impl Fn(F, F) -> bool,
) -> Result<BbOutcome<F>>
where
    F: Scalar,
    O: Objective<F>,
{
    opts.validate()?;
    let root = region.bounds;
    if region.feasibility(&root) == Feasibility::Infeasible {
        return Err(Error::InvalidInput(format!("region {} is empty", region.name)));
    }
    let pool = if opts.threads > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut lower = F::neg_infinity();
    let mut witness = None;
    if let Some((p, v)) = best_point(obj, region, &root) {
        lower = v;
        witness = Some(p);
    }
    heap.push(Node {
        ub: obj.enclose(&root, region).hi(),
        seq,
        bx: root,
    });
    let mut boxes = 0usize;
    let batch_size = opts.threads.max(1) * 8;

    let termination = loop {
        let Some(top) = heap.pop() else {
            // every box was pruned: nothing feasible beats the witness
            heap.push(Node {
                ub: lower,
                seq: u64::MAX,
                bx: root,
            });
            break Termination::Converged;
        };
        let upper = top.ub;
        if upper - lower <= opts.tol {
            heap.push(top);
            break Termination::Converged;
        }
        if stop(upper, lower) {
            heap.push(top);
            break Termination::Stopped;
        }
        if boxes >= opts.budget {
            heap.push(top);
            break Termination::BudgetExhausted;
        }
        if !splittable(&top.bx) {
            heap.push(top);
            break Termination::Resolution;
        }

        let mut batch = vec![top];
        if pool.is_some() {
            while batch.len() < batch_size && boxes + batch.len() < opts.budget {
                match heap.pop() {
                    Some(n) if splittable(&n.bx) => batch.push(n),
                    Some(n) => {
                        heap.push(n);
                        break;
                    }
                    None => break,
                }
            }
        }
        boxes += batch.len();
        let children: Vec<Vec<Child<F>>> = match &pool {
            Some(pool) => pool.install(|| batch.par_iter().map(|n| expand(obj, region, n)).collect()),
            None => batch.iter().map(|n| expand(obj, region, n)).collect(),
        };
        for child in children.into_iter().flatten() {
            if let Some((p, v)) = child.best_point {
                if v > lower {
                    lower = v;
                    witness = Some(p);
                }
            }
            if child.ub < lower {
                continue;
            }
            seq += 1;
            heap.push(Node {
                ub: child.ub,
                seq,
                bx: child.bx,
            });
        }
    };

    let upper = heap.peek().map(|n| n.ub).unwrap_or(lower).max(lower);
    Ok(BbOutcome {
        upper,
        lower,
        witness,
        boxes,
        termination,
    })
}
