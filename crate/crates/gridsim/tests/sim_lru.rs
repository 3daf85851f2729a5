//! The cache simulator checked against an independent replacement model.
//!
//! A deliberately naive list-based cache replays the same access strings
//! and predicts every fetch and write-back; the suite then checks the
//! structural facts callers lean on: transfer counts match the model
//! exactly, shrinking the cache never helps, a cache larger than the
//! footprint pays only compulsory misses, and the write-cost knob is a
//! pure reweighting of the same two counters.

use gridsim::rng::Rng;
use gridsim::{CacheConfig, CacheSim};

/// Exact least-recently-used write-back cache over line numbers, most
/// recent first. Slow and obviously correct.
struct RefLru {
    capacity: usize,
    line_entries: usize,
    lines: Vec<(usize, bool)>,
    fetches: u64,
    write_backs: u64,
}

impl RefLru {
    fn new(cfg: &CacheConfig) -> Self {
        RefLru {
            capacity: cfg.lines(),
            line_entries: cfg.line_entries,
            lines: Vec::new(),
            fetches: 0,
            write_backs: 0,
        }
    }

    fn touch(&mut self, addr: usize, dirty: bool) {
        let line = addr / self.line_entries;
        if let Some(pos) = self.lines.iter().position(|&(l, _)| l == line) {
            let (l, d) = self.lines.remove(pos);
            self.lines.insert(0, (l, d || dirty));
            return;
        }
        self.fetches += 1;
        if self.lines.len() == self.capacity {
            let (_, d) = self.lines.pop().unwrap();
            if d {
                self.write_backs += 1;
            }
        }
        self.lines.insert(0, (line, dirty));
    }

    fn flush(&mut self) {
        for &(_, d) in &self.lines {
            if d {
                self.write_backs += 1;
            }
        }
        self.lines.clear();
    }
}

/// One random access string: (entry index, is_write) pairs.
fn random_ops(rng: &mut Rng, footprint: usize, len: usize) -> Vec<(usize, bool)> {
    (0..len)
        .map(|_| {
            let idx = rng.next_range(0, footprint as i64) as usize;
            (idx, rng.next_f64() < 0.4)
        })
        .collect()
}

/// Replays `ops` over a fresh simulator and returns (reads, writes).
fn replay_sim(cfg: CacheConfig, footprint: usize, ops: &[(usize, bool)]) -> (u64, u64) {
    let mut sim = CacheSim::new(cfg);
    let arr = sim.alloc(&[footprint]).unwrap();
    sim.mark_finalized_all(&arr).unwrap();
    for &(idx, is_write) in ops {
        if is_write {
            sim.write(&arr, &[idx], idx as f64).unwrap();
        } else {
            sim.read(&arr, &[idx]).unwrap();
        }
    }
    let rep = sim.flush_and_report();
    (rep.read_transfers, rep.write_transfers)
}

#[test]
fn reference_model_reproduces_every_transfer_count() {
    let mut rng = Rng::new(0x51_EE7);
    for (m, b) in [(16, 4), (32, 4), (64, 8), (48, 2), (128, 16)] {
        for _ in 0..60 {
            let footprint = 3 * m / 2;
            let ops = random_ops(&mut rng, footprint, 300);
            let cfg = CacheConfig::new(m, b, 1.0).unwrap();
            let (reads, writes) = replay_sim(cfg.clone(), footprint, &ops);
            let mut model = RefLru::new(&cfg);
            // The arena is line-aligned from address zero, so entry index
            // and address coincide for a single allocation.
            for &(idx, is_write) in &ops {
                model.touch(idx, is_write);
            }
            model.flush();
            assert_eq!(reads, model.fetches, "M={} B={}", m, b);
            assert_eq!(writes, model.write_backs, "M={} B={}", m, b);
        }
    }
}

#[test]
fn shrinking_the_cache_never_reduces_traffic() {
    let mut rng = Rng::new(0xCAFE);
    for _ in 0..200 {
        let footprint = 96;
        let ops = random_ops(&mut rng, footprint, 250);
        let mut last = u64::MAX;
        for m in [16usize, 32, 64, 128] {
            let cfg = CacheConfig::new(m, 4, 1.0).unwrap();
            let (reads, writes) = replay_sim(cfg, footprint, &ops);
            let total = reads + writes;
            assert!(total <= last, "M={} total={} previous={}", m, total, last);
            last = total;
        }
    }
}

#[test]
fn oversized_cache_pays_only_compulsory_misses() {
    let mut rng = Rng::new(7);
    for _ in 0..50 {
        let footprint = 64;
        let b = 4;
        let ops = random_ops(&mut rng, footprint, 400);
        let cfg = CacheConfig::new(256, b, 1.0).unwrap();
        let (reads, writes) = replay_sim(cfg, footprint, &ops);
        let mut touched: Vec<usize> = ops.iter().map(|&(i, _)| i / b).collect();
        touched.sort_unstable();
        touched.dedup();
        let mut dirtied: Vec<usize> =
            ops.iter().filter(|&&(_, w)| w).map(|&(i, _)| i / b).collect();
        dirtied.sort_unstable();
        dirtied.dedup();
        assert_eq!(reads, touched.len() as u64);
        assert_eq!(writes, dirtied.len() as u64);
    }
}

#[test]
fn write_cost_is_a_pure_reweighting() {
    let mut rng = Rng::new(99);
    let footprint = 80;
    let ops = random_ops(&mut rng, footprint, 300);
    for omega in [1.0, 8.0, 64.0] {
        let cfg = CacheConfig::new(32, 4, omega).unwrap();
        let mut sim = CacheSim::new(cfg);
        let arr = sim.alloc(&[footprint]).unwrap();
        sim.mark_finalized_all(&arr).unwrap();
        for &(idx, is_write) in &ops {
            if is_write {
                sim.write(&arr, &[idx], 1.0).unwrap();
            } else {
                sim.read(&arr, &[idx]).unwrap();
            }
        }
        let rep = sim.flush_and_report();
        assert_eq!(
            rep.asym_q,
            rep.read_transfers as f64 + omega * rep.write_transfers as f64
        );
        if omega == 1.0 {
            assert_eq!(rep.asym_q, rep.sym_q as f64);
        }
    }
}
