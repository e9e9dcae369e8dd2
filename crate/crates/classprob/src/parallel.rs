//! Multi-threaded replication driver.
//!
//! Chunk `i` always draws from `rng.substream(i)` and partials are combined in
//! chunk order, so the output is bit-identical to the single-threaded
//! [`classprob_core::montecarlo::run`] for any number of lanes.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::thread;

use classprob_core::montecarlo::{chunk_plan, Simulation};
use classprob_core::rng::RngStream;

/// Lanes to use when the caller does not say: one per available core.
pub fn default_lanes() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn run<S: Simulation>(sim: &S, n: u64, rng: &RngStream, lanes: usize) -> S::Output {
    let plan: Vec<(u64, u64)> = chunk_plan(n).collect();
    let lanes = lanes.clamp(1, plan.len().max(1));
    if lanes == 1 {
        return classprob_core::montecarlo::run(sim, n, rng);
    }
    let next = AtomicU64::new(0);
    let slots: Vec<Mutex<Option<S::Partial>>> = plan.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|scope| {
        for _ in 0..lanes {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(index, count)) = plan.get(i as usize) else { break };
                let part = sim.run_chunk(&mut rng.substream(index), count);
                *slots[i as usize].lock().expect("no panics while holding the slot") = Some(part);
            });
        }
    });
    let parts = slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("lanes joined").expect("every chunk ran"))
        .collect();
    sim.combine(rng.master_seed(), n, parts)
}

/// Applies `f` to every item on up to `lanes` threads; results keep input order.
pub fn map_ordered<T: Sync, R: Send>(items: &[T], lanes: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let lanes = lanes.clamp(1, items.len().max(1));
    if lanes == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicU64::new(0);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|scope| {
        for _ in 0..lanes {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed) as usize;
                let Some(item) = items.get(i) else { break };
                let r = f(item);
                *slots[i].lock().expect("no panics while holding the slot") = Some(r);
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().expect("lanes joined").expect("every item ran")).collect()
}
