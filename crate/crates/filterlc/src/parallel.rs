//! Sweeps fanned out over a thread pool.
//!
//! Candidate sets are built sequentially (the analysed-class ledger is
//! threaded through them in loop order); only the sweeps run in parallel,
//! and outcomes are reassembled in set order, so the report does not depend
//! on the number of threads.

use filterlc_core::lb::{BoundReport, Mode, Order, Plan, SweepOutcome};
use rayon::prelude::*;

/// `jobs == 0` uses every available core; `jobs == 1` stays on the caller.
pub fn lb_bound_jobs(l: u32, k: u32, mode: Mode, order: Order, jobs: usize) -> filterlc_core::Result<BoundReport> {
    let plan = Plan::new(l, k, mode, order)?;
    if jobs == 1 {
        return Ok(plan.run());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let outcomes: Vec<SweepOutcome> =
        pool.install(|| (0..plan.sets.len()).into_par_iter().map(|i| plan.sweep_set(i)).collect());
    Ok(plan.assemble(&outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_count_does_not_change_the_report() {
        for (l, k) in [(11, 6), (13, 5), (17, 9)] {
            let one = lb_bound_jobs(l, k, Mode::Rotational, Order::Doubling, 1).unwrap();
            for jobs in [2, 4] {
                assert_eq!(lb_bound_jobs(l, k, Mode::Rotational, Order::Doubling, jobs).unwrap(), one);
            }
        }
    }
}
