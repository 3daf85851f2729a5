//! Acceptance gate: one test per criterion, each printing a single
//! `ACCEPTANCE <nn> <name>: PASS|FAIL` line (run with `--nocapture` to see
//! the lines on passing tests too). Tolerances are pinned in the code next
//! to each check.
//!
//! Criteria 03 and 05 contain sub-checks whose pinned parameter points sit
//! outside the regime where the measured effect exists on this simulator's
//! exact-LRU cache; those print honest FAILs, and companion tests directly
//! below them demonstrate the same property in its regime. The mechanics
//! are quantified in the companion test comments.

use gridbench::{execute, least_squares_slope, verify, ExperimentConfig, Policy};
use gridsim::rng::Rng;
use gridsim::{
    cross_check, solve, solve_gap_baseline, CacheConfig, CacheSim, ExecOptions, GapWeights,
    Instance, Kind, Mode, SplitPolicy, WeightPreset,
};
use std::time::Instant;

/// Prints the per-criterion verdict line and panics on failure.
fn gate(id: u32, name: &str, checks: Vec<(String, bool)>) {
    let ok = checks.iter().all(|(_, pass)| *pass);
    let detail: Vec<String> = checks
        .iter()
        .map(|(text, pass)| format!("{}[{}]", if *pass { "ok" } else { "FAIL" }, text))
        .collect();
    println!(
        "ACCEPTANCE {:02} {}: {} — {}",
        id,
        name,
        if ok { "PASS" } else { "FAIL" },
        detail.join("; ")
    );
    assert!(ok, "criterion {:02} {} failed: {}", id, name, detail.join("; "));
}

fn sweep_config(kind: &str, sizes: &[usize], m: usize, b: usize, omegas: &[f64]) -> ExperimentConfig {
    ExperimentConfig {
        kind: kind.into(),
        sizes: sizes.to_vec(),
        cache_entries: m,
        line_entries: b,
        omegas: omegas.to_vec(),
        policy: Policy::Classic,
        base_threshold: 8,
        seed: 1,
        preset: None,
        out: "/dev/null".into(),
    }
}

/// log2-log2 slope of a metric across sizes.
fn size_slope(sizes: &[usize], values: &[f64]) -> f64 {
    let xs: Vec<f64> = sizes.iter().map(|n| (*n as f64).log2()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.log2()).collect();
    least_squares_slope(&xs, &ys)
}

/// Symmetric traffic per size for one kind under the pinned cache.
fn sym_q_curve(kind: &str, sizes: &[usize], m: usize, b: usize) -> Vec<f64> {
    let rows = execute(&sweep_config(kind, sizes, m, b, &[1.0])).expect("sweep");
    rows.iter().map(|r| r.sym_q as f64).collect()
}

fn solve_with(
    inst: &Instance,
    m: usize,
    b: usize,
    omega: f64,
    policy: SplitPolicy,
    mode: Mode,
) -> gridsim::CostReport {
    let cache = CacheConfig::new(m, b, omega).unwrap();
    let opts = ExecOptions::default().with_policy(policy).with_mode(mode);
    solve(inst, cache, &opts).unwrap().report
}

fn rand_inst(kind: Kind, n: usize, seed: u64) -> Instance {
    Instance::generate(kind, n, WeightPreset::Random { seed, range: 9 }, seed)
}

// ---------------------------------------------------------------- 01

#[test]
fn criterion_01_reference_verification_all_kinds() {
    let start = Instant::now();
    let mut runs = 0u32;
    for kind in Kind::ALL {
        for seed in 0..200u64 {
            let mix = seed.wrapping_mul(0x9E37_79B9).wrapping_add(7);
            let n = match kind {
                Kind::Rna => 4 + (mix % 13) as usize,          // up to 16
                Kind::Strassen => 1usize << (2 + (mix % 4)),   // 4..32, power of two
                _ => 4 + (mix % 29) as usize,                  // up to 32
            };
            verify(kind, n, seed, false)
                .unwrap_or_else(|e| panic!("{kind} n={n} seed={seed}: {e}"));
            runs += 1;
        }
    }
    let elapsed = start.elapsed();
    gate(
        1,
        "reference-verification",
        vec![
            (format!("{runs} verifies, all matched"), runs == 2400),
            (
                format!("elapsed {:.1?} < 300 s", elapsed),
                elapsed.as_secs_f64() < 300.0,
            ),
        ],
    );
}

// ---------------------------------------------------------------- 02

#[test]
fn criterion_02_policy_and_mode_invariance() {
    let variants: [(SplitPolicy, Mode); 4] = [
        (SplitPolicy::Classic, Mode::Sequential),
        (SplitPolicy::Classic, Mode::Parallel),
        (SplitPolicy::Asymmetric { write_cost: 8.0 }, Mode::Sequential),
        (SplitPolicy::Asymmetric { write_cost: 8.0 }, Mode::Parallel),
    ];
    let mut compared = 0u32;
    for kind in Kind::ALL {
        for i in 0..50u64 {
            // Integer-valued instances keep every engine variant exactly
            // bit-equal; the float kinds use dyadic-rational constructions
            // whose arithmetic is exact in binary floating point.
            let inst = match kind {
                Kind::Gauss => Instance::gauss_exact(4 + (i % 13) as usize, i),
                Kind::Triangular => Instance::triangular_exact(4 + (i % 13) as usize, i),
                Kind::Strassen => rand_inst(kind, 1usize << (2 + i % 3), i),
                Kind::Rna => rand_inst(kind, 4 + (i % 9) as usize, i),
                _ => rand_inst(kind, 4 + (i.wrapping_mul(13) % 21) as usize, i),
            };
            let cache = CacheConfig::new(64, 4, 8.0).unwrap();
            let mut base: Option<Vec<u64>> = None;
            for (policy, mode) in variants {
                let opts = ExecOptions::default()
                    .with_policy(policy)
                    .with_mode(mode)
                    .with_base_threshold(4);
                let sol = solve(&inst, cache, &opts)
                    .unwrap_or_else(|e| panic!("{kind} i={i} {policy:?} {mode:?}: {e}"));
                let bits: Vec<u64> = sol.values.iter().map(|v| v.to_bits()).collect();
                match &base {
                    None => base = Some(bits),
                    Some(b) => {
                        assert_eq!(
                            b, &bits,
                            "{kind} instance {i}: {policy:?}/{mode:?} diverged"
                        );
                        compared += 1;
                    }
                }
            }
        }
    }
    gate(
        2,
        "policy-and-mode-invariance",
        vec![(
            format!("{compared} variant comparisons identical across 12 kinds x 50 instances"),
            compared == 12 * 50 * 3,
        )],
    );
}

// ---------------------------------------------------------------- 03

#[test]
fn criterion_03_symmetric_traffic_exponents() {
    let start = Instant::now();
    let big: [usize; 4] = [64, 128, 256, 512];
    let rna_sizes: [usize; 4] = [16, 32, 48, 64];
    // (kind, sizes, expected exponent); window is +-0.3 around expected.
    let cases: [(&str, &[usize], f64); 6] = [
        ("matmul", &big, 3.0),
        ("kleene", &big, 3.0),
        ("parenthesis", &big, 3.0),
        ("lws", &big, 2.0),
        ("knapsack2", &big, 2.0),
        ("rna", &rna_sizes, 4.0),
    ];
    let mut checks = Vec::new();
    for (kind, sizes, expected) in cases {
        let slope = size_slope(sizes, &sym_q_curve(kind, sizes, 256, 8));
        checks.push((
            format!("{kind} slope {slope:.3} in [{:.1}, {:.1}]", expected - 0.3, expected + 0.3),
            (slope - expected).abs() <= 0.3,
        ));
    }
    let elapsed = start.elapsed();
    checks.push((
        format!("elapsed {:.1?} < 600 s", elapsed),
        elapsed.as_secs_f64() < 600.0,
    ));
    gate(3, "symmetric-traffic-exponents", checks);
}

// The lws sub-check above pins sizes 64..512 with a 256-entry cache. A
// one-dimensional-data recurrence pays a compulsory n/B term that still
// dominates its n^2/(B*M) term there (n/M <= 2 at the pinned point), so
// the measured exponent sits near 1.4 no matter how the solver schedules —
// the quadratic regime needs n >> M. This companion runs the same solver,
// same cache, at sizes where that holds, and lands inside the pinned
// window.
#[test]
fn criterion_03_companion_lws_reaches_its_exponent_at_scale() {
    let sizes: [usize; 4] = [2048, 4096, 8192, 16384];
    let slope = size_slope(&sizes, &sym_q_curve("lws", &sizes, 256, 8));
    gate(
        3,
        "symmetric-traffic-exponents-companion-lws",
        vec![(
            format!("lws slope {slope:.3} in [1.7, 2.3] over n = 2048..16384"),
            (slope - 2.0).abs() <= 0.3,
        )],
    );
}

// ---------------------------------------------------------------- 04

/// Runs the single-layout scheme with flat row and column pushes (one 3-d
/// grid per quadrant edge instead of the per-row/per-column 2-d family) on
/// one array copy — the shipped pre-improvement comparator.
fn gap_baseline_sym_q(n: usize, cache: CacheConfig) -> u64 {
    let inst = rand_inst(Kind::Gap, n, 1);
    let Instance::Gap { n, w, wp, r } = &inst else { unreachable!() };
    let mut sim = CacheSim::new(cache);
    let m = n + 1;
    let d = sim.alloc(&[m, m]).unwrap();
    for i in 0..m {
        for j in 0..m {
            sim.poke(&d, &[i, j], f64::INFINITY).unwrap();
        }
    }
    sim.poke(&d, &[0, 0], 0.0).unwrap();
    for j in 1..=*n {
        sim.poke(&d, &[0, j], w.eval(&[0, j as i64])).unwrap();
    }
    for i in 1..=*n {
        sim.poke(&d, &[i, 0], wp.eval(&[0, i as i64])).unwrap();
    }
    for t in 0..m {
        sim.mark_finalized(&d, &[0, t]).unwrap();
        sim.mark_finalized(&d, &[t, 0]).unwrap();
    }
    sim.mark_persistent();
    let ws = GapWeights { w, wp, r };
    solve_gap_baseline(&mut sim, &d, &ws, &ExecOptions::default()).unwrap();
    sim.flush_and_report().sym_q
}

#[test]
fn criterion_04_gap_scheme_improvement() {
    let m_entries = 1024usize;
    let cache = CacheConfig::new(m_entries, 8, 1.0).unwrap();
    let sizes: [usize; 4] = [64, 128, 256, 512];
    let mut ratios = Vec::new();
    let mut curve = Vec::new();
    for &n in &sizes {
        let sol = solve(&rand_inst(Kind::Gap, n, 1), cache, &ExecOptions::default()).unwrap();
        let nf = n as f64;
        let per_area = sol.report.sym_q as f64 / (nf * nf / 8.0);
        let bound = nf / m_entries as f64 + (m_entries as f64).log2();
        ratios.push(per_area / bound);
        curve.push(sol.report.sym_q as f64);
    }
    let new_q = curve[3] as u64;
    let base_q = gap_baseline_sym_q(512, cache);
    let max_ratio = ratios.iter().cloned().fold(0.0f64, f64::max);
    let slope = size_slope(&sizes, &curve);
    gate(
        4,
        "gap-scheme-improvement",
        vec![
            (
                format!("baseline/new = {base_q}/{new_q} = {:.2} >= 2", base_q as f64 / new_q as f64),
                base_q as f64 >= 2.0 * new_q as f64,
            ),
            (
                // Transposes below cache size are absorbed by residency, so
                // traffic per output area grows like lg(n / sqrt(M)), which
                // stays under lg M for every sweep size; c = 4 covers the
                // measured constants.
                format!("per-area traffic <= 4.0 x (n/M + lg M), max ratio {max_ratio:.2}"),
                max_ratio <= 4.0,
            ),
            (
                format!("sym_Q slope {slope:.3} in [2.0, 2.6] (area term plus one log factor)"),
                (2.0..=2.6).contains(&slope),
            ),
        ],
    );
}

// ---------------------------------------------------------------- 05

#[test]
fn criterion_05_asymmetric_write_reduction_pinned() {
    // Matmul pinned at n = 256, M = 256, B = 8. At this cache the
    // discounted tile side sqrt(M / (2 * 64^(2/3))) is about 2.8 entries —
    // a third of a line — so every output line spans multiple tiles and is
    // evicted dirty once per reduction pass under exact LRU regardless of
    // policy. See the companion test below for the same measurement in the
    // regime where the tile side clears the line.
    let inst = rand_inst(Kind::Matmul, 256, 1);
    let asym = |omega: f64| {
        solve_with(
            &inst,
            256,
            8,
            omega,
            SplitPolicy::Asymmetric { write_cost: omega },
            Mode::Sequential,
        )
    };
    let w1 = asym(1.0);
    let w64 = asym(64.0);
    let classic64 = solve_with(&inst, 256, 8, 64.0, SplitPolicy::Classic, Mode::Sequential);
    let write_ratio = w64.write_transfers as f64 / w1.write_transfers as f64;
    let q_ratio = w64.asym_q / classic64.asym_q;

    // LWS analog, k = 2, same cache.
    let lws = rand_inst(Kind::Lws, 4096, 1);
    let lws_run = |omega: f64| {
        solve_with(
            &lws,
            256,
            8,
            omega,
            SplitPolicy::Asymmetric { write_cost: omega },
            Mode::Sequential,
        )
    };
    let lws_ratio =
        lws_run(64.0).write_transfers as f64 / lws_run(1.0).write_transfers as f64;

    gate(
        5,
        "asymmetric-write-reduction",
        vec![
            (
                format!("matmul write ratio {write_ratio:.3} <= 0.15"),
                write_ratio <= 0.15,
            ),
            (
                format!("matmul asym_Q policy ratio {q_ratio:.3} <= 0.5"),
                q_ratio <= 0.5,
            ),
            (
                format!("lws write ratio {lws_ratio:.3} <= 0.3"),
                lws_ratio <= 0.3,
            ),
        ],
    );
}

// Same measurements, cache large enough that the discounted tile side
// sqrt(M / (2 * omega^(2/3))) reaches the 8-entry line (M >= 2 * B^2 *
// omega^(2/3) = 2048 at omega = 64). Measured: write ratio 0.25 at both
// cache sizes, asymmetric-policy asym_Q at 0.53 / 0.36 of classic, and
// write transfers monotone non-increasing in omega.
#[test]
fn criterion_05_companion_write_saving_regime() {
    let inst = rand_inst(Kind::Matmul, 256, 1);
    let run = |m: usize, omega: f64, policy: SplitPolicy| {
        solve_with(&inst, m, 8, omega, policy, Mode::Sequential)
    };
    let mut checks = Vec::new();
    for (m, wr_cap, q_cap) in [(2048usize, 0.35, 0.62), (8192, 0.35, 0.45)] {
        let a1 = run(m, 1.0, SplitPolicy::Asymmetric { write_cost: 1.0 });
        let a64 = run(m, 64.0, SplitPolicy::Asymmetric { write_cost: 64.0 });
        let c64 = run(m, 64.0, SplitPolicy::Classic);
        let wr = a64.write_transfers as f64 / a1.write_transfers as f64;
        let qr = a64.asym_q / c64.asym_q;
        checks.push((format!("M={m} write ratio {wr:.3} <= {wr_cap}"), wr <= wr_cap));
        checks.push((format!("M={m} asym_Q ratio {qr:.3} <= {q_cap}"), qr <= q_cap));
    }
    let writes: Vec<u64> = [1.0, 8.0, 64.0]
        .into_iter()
        .map(|w| run(2048, w, SplitPolicy::Asymmetric { write_cost: w }).write_transfers)
        .collect();
    checks.push((
        format!("writes non-increasing in omega at M=2048: {writes:?}"),
        writes.windows(2).all(|p| p[0] >= p[1]),
    ));
    gate(5, "asymmetric-write-reduction-companion", checks);
}

// ---------------------------------------------------------------- 06

#[test]
fn criterion_06_omega_scaling_exponents() {
    let omegas = [1.0f64, 8.0, 64.0, 512.0];
    let omega_slope = |qs: &[f64]| {
        let xs: Vec<f64> = omegas.iter().map(|w| w.log2()).collect();
        let ys: Vec<f64> = qs.iter().map(|q| q.log2()).collect();
        least_squares_slope(&xs, &ys)
    };
    // Matmul: n >> M with a unit line isolates the tile-reshaping effect
    // (any line structure quantizes the discounted tile side away at high
    // omega). Sequential schedule, n = 256, M = 32.
    let mm = rand_inst(Kind::Matmul, 256, 1);
    let mm_qs: Vec<f64> = omegas
        .iter()
        .map(|&w| {
            solve_with(&mm, 32, 1, w, SplitPolicy::Asymmetric { write_cost: w }, Mode::Sequential)
                .asym_q
        })
        .collect();
    let mm_slope = omega_slope(&mm_qs);

    // LWS: the buffered parallel schedule keeps merge temporaries
    // cache-resident, so output write-backs actually fall with omega;
    // n = 16384 >> M = 64.
    let lws = rand_inst(Kind::Lws, 16384, 1);
    let lws_qs: Vec<f64> = omegas
        .iter()
        .map(|&w| {
            solve_with(&lws, 64, 1, w, SplitPolicy::Asymmetric { write_cost: w }, Mode::Parallel)
                .asym_q
        })
        .collect();
    let lws_slope = omega_slope(&lws_qs);

    gate(
        6,
        "omega-scaling-exponents",
        vec![
            (
                format!("matmul asym_Q vs omega slope {mm_slope:.3} in [0.183, 0.483]"),
                (mm_slope - 1.0 / 3.0).abs() <= 0.15,
            ),
            (
                format!("lws asym_Q vs omega slope {lws_slope:.3} in [0.35, 0.65]"),
                (lws_slope - 0.5).abs() <= 0.15,
            ),
        ],
    );
}

// ---------------------------------------------------------------- 07

#[test]
fn criterion_07_span_growth() {
    let span_curve = |kind: Kind, sizes: &[usize]| -> Vec<f64> {
        sizes
            .iter()
            .map(|&n| {
                solve_with(
                    &rand_inst(kind, n, 1),
                    256,
                    8,
                    1.0,
                    SplitPolicy::Classic,
                    Mode::Parallel,
                )
                .span as f64
            })
            .collect()
    };
    let lws_sizes: [usize; 4] = [1024, 2048, 4096, 8192];
    let lws_slope = size_slope(&lws_sizes, &span_curve(Kind::Lws, &lws_sizes));
    let paren_sizes: [usize; 4] = [64, 128, 256, 512];
    let paren_slope = size_slope(&paren_sizes, &span_curve(Kind::Parenthesis, &paren_sizes));
    let rna_sizes: [usize; 4] = [16, 32, 48, 64];
    let rna_slope = size_slope(&rna_sizes, &span_curve(Kind::Rna, &rna_sizes));
    let log2_3 = 3f64.log2();

    // Plain grid: parallel matmul span against squared log size over four
    // doublings; bounded means no growth from first to last and under a
    // pinned constant.
    let grid_sizes: [usize; 4] = [32, 64, 128, 256];
    let grid_ratio: Vec<f64> = grid_sizes
        .iter()
        .map(|&n| {
            let span = solve_with(
                &rand_inst(Kind::Matmul, n, 1),
                256,
                8,
                1.0,
                SplitPolicy::Classic,
                Mode::Parallel,
            )
            .span as f64;
            let l = (n as f64).log2();
            span / (l * l)
        })
        .collect();

    gate(
        7,
        "span-growth",
        vec![
            (
                format!("lws span slope {lws_slope:.3} in [0.85, 1.15]"),
                (lws_slope - 1.0).abs() <= 0.15,
            ),
            (
                format!("parenthesis span slope {paren_slope:.3} in [{:.3}, {:.3}]", log2_3 - 0.15, log2_3 + 0.15),
                (paren_slope - log2_3).abs() <= 0.15,
            ),
            (
                format!("rna span slope {rna_slope:.3} in [{:.3}, {:.3}]", log2_3 - 0.15, log2_3 + 0.15),
                (rna_slope - log2_3).abs() <= 0.15,
            ),
            (
                format!(
                    "grid span/lg^2 n bounded over 4 doublings: {:?}",
                    grid_ratio.iter().map(|r| (r * 10.0).round() / 10.0).collect::<Vec<f64>>()
                ),
                grid_ratio.iter().all(|&r| r <= 25.0) && grid_ratio[3] <= grid_ratio[0],
            ),
        ],
    );
}

// ---------------------------------------------------------------- 08

#[test]
fn criterion_08_scratch_space_doubling() {
    let peaks = |kind: Kind, sizes: &[usize]| -> Vec<f64> {
        sizes
            .iter()
            .map(|&n| {
                solve_with(
                    &rand_inst(kind, n, 1),
                    256,
                    8,
                    1.0,
                    SplitPolicy::Classic,
                    Mode::Parallel,
                )
                .peak_temp_entries as f64
            })
            .collect()
    };
    let mm = peaks(Kind::Matmul, &[32, 64, 128, 256]); // k = 3: cap 2^2 + 0.3
    let lws = peaks(Kind::Lws, &[2048, 4096, 8192, 16384]); // k = 2: cap 2 + 0.3
    let ratios = |p: &[f64]| -> Vec<f64> { p.windows(2).map(|w| w[1] / w[0]).collect() };
    let mm_r = ratios(&mm);
    let lws_r = ratios(&lws);
    gate(
        8,
        "scratch-space-doubling",
        vec![
            (
                format!("k=3 matmul peak ratios {:?} all <= 4.3 over 3 doublings", round3(&mm_r)),
                mm_r.iter().all(|&r| r <= 4.3),
            ),
            (
                format!("k=2 lws peak ratios {:?} all <= 2.3 over 3 doublings", round3(&lws_r)),
                lws_r.iter().all(|&r| r <= 2.3),
            ),
        ],
    );
}

fn round3(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|x| (x * 1000.0).round() / 1000.0).collect()
}

// ---------------------------------------------------------------- 09

#[test]
fn criterion_09_simulator_soundness() {
    let start = Instant::now();
    let mut rng = Rng::new(0xACCE55);
    let footprint = 96usize;
    let caches: [usize; 4] = [16, 32, 64, 128];

    let replay = |mixed: &[(usize, bool)], m: usize, b: usize, omega: f64| {
        let mut sim = CacheSim::new(CacheConfig::new(m, b, omega).unwrap());
        let arr = sim.alloc(&[footprint]).unwrap();
        sim.mark_finalized_all(&arr).unwrap();
        for &(idx, is_write) in mixed {
            if is_write {
                sim.write(&arr, &[idx], idx as f64).unwrap();
            } else {
                sim.read(&arr, &[idx]).unwrap();
            }
        }
        sim.flush_and_report()
    };

    let mut monotone_ok = true;
    let mut compulsory_ok = true;
    let mut identity_ok = true;
    for _ in 0..1000 {
        let ops: Vec<(usize, bool)> = (0..150)
            .map(|_| {
                (
                    rng.next_range(0, footprint as i64) as usize,
                    rng.next_f64() < 0.4,
                )
            })
            .collect();
        // (a) shrinking the cache never reduces total traffic
        let mut prev = u64::MAX;
        for &m in &caches {
            let q = replay(&ops, m, 4, 1.0).sym_q;
            if q > prev {
                monotone_ok = false;
            }
            prev = q;
        }
        // (b) a cache covering the whole footprint pays only compulsory
        // misses: one fetch per touched line, one write-back per dirtied
        // line
        let report = replay(&ops, 128, 4, 1.0);
        let mut touched = std::collections::BTreeSet::new();
        let mut dirtied = std::collections::BTreeSet::new();
        for &(idx, is_write) in &ops {
            touched.insert(idx / 4);
            if is_write {
                dirtied.insert(idx / 4);
            }
        }
        if report.read_transfers != touched.len() as u64
            || report.write_transfers != dirtied.len() as u64
        {
            compulsory_ok = false;
        }
        // (c) asym_Q is exactly reads + omega * writes
        let omega = 1.0 + (rng.next_u64() % 512) as f64;
        let r = replay(&ops, 32, 4, omega);
        if r.asym_q != r.read_transfers as f64 + omega * r.write_transfers as f64 {
            identity_ok = false;
        }
    }
    let elapsed = start.elapsed();
    gate(
        9,
        "simulator-soundness",
        vec![
            ("LRU traffic monotone in cache size, 1000 traces".into(), monotone_ok),
            ("full-footprint cache pays exactly compulsory misses".into(), compulsory_ok),
            ("asym_Q == reads + omega * writes".into(), identity_ok),
            (
                format!("elapsed {:.1?} < 60 s", elapsed),
                elapsed.as_secs_f64() < 60.0,
            ),
        ],
    );
}

// ---------------------------------------------------------------- 10

#[test]
fn criterion_10_strassen_work_and_equality() {
    let work = |n: usize| {
        solve(&rand_inst(Kind::Strassen, n, 2), CacheConfig::new(64, 4, 1.0).unwrap(), &ExecOptions::default())
            .unwrap()
            .report
            .work as f64
    };
    let r16 = work(16) / work(8);
    let r32 = work(32) / work(16);
    let mut equality_ok = true;
    for (n, seed) in [(32usize, 5u64), (64, 6)] {
        let inst = rand_inst(Kind::Strassen, n, seed);
        let sol = solve(&inst, CacheConfig::new(256, 8, 1.0).unwrap(), &ExecOptions::default())
            .unwrap();
        if cross_check(&inst, &sol.values, &sol.shape).is_err() {
            equality_ok = false;
        }
    }
    gate(
        10,
        "strassen-work-and-equality",
        vec![
            (
                format!("work(2n)/work(n) = {r16:.3}, {r32:.3} in [6.8, 7.2]"),
                (6.8..=7.2).contains(&r16) && (6.8..=7.2).contains(&r32),
            ),
            ("output equals reference matmul at n = 32, 64".into(), equality_ok),
        ],
    );
}
