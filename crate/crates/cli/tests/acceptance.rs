//! End-to-end acceptance checks. Each criterion prints one `PASS`/`FAIL`
//! line with its measured runtime and budget, then asserts.
//!
//! Run with `cargo test -p qaoa-landscape-cli --test acceptance -- --nocapture`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use common::*;
use qaoa_landscape::landscape::{lattice, scan_energies, NoCache};
use qaoa_landscape::problems::{Cnf3Formula, Literal};
use qaoa_landscape::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Criteria run one at a time so the reported runtimes are not inflated by
// neighbouring tests competing for cores.
static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(id: u32, title: &str, budget: Duration, body: impl FnOnce() -> Result<String, String>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let (verdict, detail) = match (&outcome, in_time) {
        (Ok(d), true) => ("PASS", d.clone()),
        (Ok(d), false) => ("FAIL", format!("{d}; over time budget")),
        (Err(d), _) => ("FAIL", d.clone()),
    };
    println!(
        "criterion {id} [{verdict}] {title}: {detail} ({:.1}s of {}s)",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(outcome.is_ok() && in_time, "criterion {id} failed: {detail}");
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_point(p: usize, rng: &mut ChaCha8Rng) -> ParamPoint {
    let gammas = (0..p).map(|_| rng.random_range(-3.2..3.2)).collect();
    let betas = (0..p).map(|_| rng.random_range(-1.6..1.6)).collect();
    ParamPoint::new(gammas, betas).unwrap()
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    let edges: Vec<_> = pairs.enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| e).collect();
    Graph::new(n, edges, 0).unwrap()
}

fn maxcut_suite(n: usize, count: u64) -> Vec<IsingHamiltonian> {
    (0..count).map(|seed| maxcut_to_ising(&gen_regular_graph(n, 3, seed).unwrap()).unwrap()).collect()
}

fn run_scan(h: &IsingHamiltonian, cfg: &ScanConfig) -> (ScanResult, SpectrumBounds) {
    let d = DiagonalEnergies::from_hamiltonian(h).unwrap();
    let r = scan_energies(&d, cfg, &mut NoCache).unwrap();
    (r, d.bounds())
}

fn sequential_cfg(p_target: usize) -> ScanConfig {
    ScanConfig {
        p_start: 1,
        p_target,
        p_step: 1,
        strategy: Strategy::Sequential,
        grid: GridSpec::regular_maxcut(32),
    }
}

#[test]
fn c1_simulator_matches_dense_oracle() {
    criterion(1, "statevector vs dense evolution", Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hs = Vec::new();
        for n in [4, 6] {
            for seed in 0..2 {
                let g = gen_regular_graph(n, 3, seed).unwrap();
                hs.push(maxcut_to_ising(&g).unwrap());
                hs.push(vertexcover_to_ising(&g, 2.0).unwrap());
            }
        }
        for (n_vars, m) in [(3, 1), (3, 2), (3, 3)] {
            let f = gen_3cnf(n_vars, m as f64 / n_vars as f64, m).unwrap();
            hs.push(max3sat_to_ising(&f, 2.0).unwrap());
        }
        let mut worst = 0.0f64;
        let mut checked = 0;
        for h in &hs {
            assert!(h.n_qubits() <= 6);
            let d = DiagonalEnergies::from_hamiltonian(h).unwrap();
            for p in 1..=3 {
                for _ in 0..100 {
                    let pt = random_point(p, &mut rng);
                    worst = worst.max((expectation(&d, &pt) - dense_expectation(h, &pt)).abs());
                    checked += 1;
                }
            }
        }
        check(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
        Ok(format!("{checked} points, {} instances, max deviation {worst:.1e}", hs.len()))
    });
}

#[test]
fn c2_mappings_match_brute_force() {
    criterion(2, "encodings vs brute force", Duration::from_secs(300), || {
        let mut maxcut_count = 0;
        for n in (4..=16).step_by(2) {
            for seed in 0..5 {
                let g = gen_regular_graph(n, 3, seed).unwrap();
                let e0 = spectrum_bounds(&maxcut_to_ising(&g).unwrap()).unwrap().e0;
                let best = brute_force_max_cut(&g) as f64;
                check(e0 == -best, || format!("maxcut n={n} seed={seed}: {e0} vs -{best}"))?;
                maxcut_count += 1;
            }
        }

        // every labelled graph up to six vertices, then a random sample above
        let mut graphs = Vec::new();
        for n in 2..=6 {
            let pairs = n * (n - 1) / 2;
            graphs.extend((0..1u64 << pairs).map(|mask| graph_from_mask(n, mask)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 7..=8 {
            let pairs = n * (n - 1) / 2;
            graphs.extend((0..2000).map(|_| graph_from_mask(n, rng.random_range(0..1u64 << pairs))));
        }
        graphs.extend((0..5).map(|seed| gen_regular_graph(8, 3, seed).unwrap()));
        for g in &graphs {
            let h = vertexcover_to_ising(g, 2.0).unwrap();
            let d = DiagonalEnergies::from_hamiltonian(&h).unwrap();
            let e0 = d.values().iter().copied().fold(f64::INFINITY, f64::min);
            let minimisers: Vec<u64> =
                (0..d.values().len() as u64).filter(|&k| d.values()[k as usize] == e0).collect();
            let covers = minimum_vertex_covers(g);
            check(minimisers == covers, || {
                format!("vertex cover {:?}: {minimisers:?} vs {covers:?}", g.edges())
            })?;
        }

        // every multiset of up to four sign-patterned clauses, literals in variable order
        let mut formulas = 0;
        for n_vars in 3..=4 {
            let mut clauses = Vec::new();
            for a in 0..n_vars {
                for b in a + 1..n_vars {
                    for c in b + 1..n_vars {
                        for signs in 0..8 {
                            clauses.push([
                                Literal::new(a, signs & 1 == 1),
                                Literal::new(b, signs & 2 == 2),
                                Literal::new(c, signs & 4 == 4),
                            ]);
                        }
                    }
                }
            }
            let k = clauses.len();
            let mut stack: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
            while let Some(idx) = stack.pop() {
                let f = Cnf3Formula::new(
                    n_vars,
                    idx.iter().map(|&i| clauses[i]).collect(),
                    idx.len() as f64 / n_vars as f64,
                    0,
                )
                .unwrap();
                check_max3sat(&f)?;
                formulas += 1;
                if idx.len() < 4 {
                    let last = *idx.last().unwrap();
                    stack.extend((last..k).map(|i| [idx.as_slice(), &[i]].concat()));
                }
            }
        }
        // literal order inside a clause decides which pair the ancilla tracks
        for seed in 0..500 {
            let n_vars = 3 + (seed % 2) as usize;
            let m = 1 + (seed % 4) as usize;
            check_max3sat(&gen_3cnf(n_vars, m as f64 / n_vars as f64, seed).unwrap())?;
            formulas += 1;
        }
        Ok(format!("{maxcut_count} maxcut graphs, {} vertex-cover graphs, {formulas} formulas", graphs.len()))
    });
}

fn check_max3sat(f: &Cnf3Formula) -> Result<(), String> {
    let e0 = spectrum_bounds(&max3sat_to_ising(f, 2.0).unwrap()).unwrap().e0;
    let expected = (f.clauses().len() - brute_force_max_sat(f)) as f64;
    check(e0 == expected, || format!("max3sat {:?}: {e0} vs {expected}", f.clauses()))
}

#[test]
fn c3_symmetries() {
    criterion(3, "time reversal, beta and gamma periods", Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = gen_regular_graph(8, 3, 3).unwrap();
        let all = [
            ("maxcut", maxcut_to_ising(&g).unwrap()),
            ("vertexcover", vertexcover_to_ising(&g, 2.0).unwrap()),
            ("max3sat", max3sat_to_ising(&gen_3cnf(5, 0.8, 3).unwrap(), 2.0).unwrap()),
        ];
        let mut worst = 0.0f64;
        for (name, h) in &all {
            let d = DiagonalEnergies::from_hamiltonian(h).unwrap();
            check(d.is_integer_valued(), || format!("{name} spectrum is not integer"))?;
            for p in 1..=3 {
                for _ in 0..50 {
                    let pt = random_point(p, &mut rng);
                    let e = expectation(&d, &pt);
                    let reversed = expectation(&d, &pt.negated());
                    let shifted_gamma = ParamPoint::new(
                        pt.gammas().iter().map(|g| g + 2.0 * std::f64::consts::PI).collect(),
                        pt.betas().to_vec(),
                    )
                    .unwrap();
                    worst = worst.max((e - reversed).abs()).max((e - expectation(&d, &shifted_gamma)).abs());
                    if *name == "maxcut" {
                        let shifted_beta = ParamPoint::new(
                            pt.gammas().to_vec(),
                            pt.betas().iter().map(|b| b + std::f64::consts::PI).collect(),
                        )
                        .unwrap();
                        worst = worst.max((e - expectation(&d, &shifted_beta)).abs());
                    }
                }
            }
        }
        check(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
        Ok(format!("max deviation {worst:.1e}"))
    });
}

#[test]
fn c4_sequential_is_monotone_and_settles_on_zero_beta() {
    criterion(4, "sequential monotonicity, n=10, p=7", Duration::from_secs(600), || {
        let cfg = sequential_cfg(7);
        let mut zero_beta = 0;
        let mut onsets = Vec::new();
        for (k, h) in maxcut_suite(10, 10).iter().enumerate() {
            let (r, bounds) = run_scan(h, &cfg);
            let residuals: Vec<f64> =
                r.layers.iter().map(|l| residual(l.chosen.energy, &bounds).unwrap()).collect();
            check(residuals.windows(2).all(|w| w[1] <= w[0]), || {
                format!("instance {k} residuals increase: {residuals:?}")
            })?;
            if r.layers.iter().filter(|l| l.p >= 5).all(|l| l.chosen.beta == 0.0) {
                zero_beta += 1;
            }
            // first depth from which every fixed beta is zero, if any
            let tail = r.layers.iter().rev().take_while(|l| l.chosen.beta == 0.0).count();
            onsets.push(if tail == 0 { "-".to_string() } else { (cfg.p_target + 1 - tail).to_string() });
        }
        check(zero_beta >= 8, || {
            format!("only {zero_beta}/10 instances fix beta = 0 for p >= 5; zero-beta onset per instance {onsets:?}")
        })?;
        Ok(format!("10/10 monotone, {zero_beta}/10 fix beta = 0 for p >= 5"))
    });
}

#[test]
fn c5_ramp_sign_sets_direction() {
    criterion(5, "linear ramp direction, n=10, p=7", Duration::from_secs(120), || {
        let hs = maxcut_suite(10, 10);
        let mean = |spec: RampSpec| {
            let pt = linear_ramp(&spec).unwrap();
            let rs: Vec<f64> = hs
                .iter()
                .map(|h| {
                    let d = DiagonalEnergies::from_hamiltonian(h).unwrap();
                    residual(expectation(&d, &pt), &d.bounds()).unwrap()
                })
                .collect();
            rs.iter().sum::<f64>() / rs.len() as f64
        };
        let minus = mean(RampSpec::minus_beta(7));
        let plus = mean(RampSpec::plus_beta(7));
        check(minus < plus && plus > 0.5 && minus < 0.5, || {
            format!("mean residual ramp- {minus:.4}, ramp+ {plus:.4}")
        })?;
        Ok(format!("mean residual ramp- {minus:.4} < 0.5 < ramp+ {plus:.4}"))
    });
}

#[test]
fn c6_p1_spread_is_small() {
    criterion(6, "p=1 residual spread over n=10,12", Duration::from_secs(120), || {
        let mut layers = Vec::new();
        for n in [10, 12] {
            for h in maxcut_suite(n, 5) {
                let (r, bounds) = run_scan(&h, &sequential_cfg(1));
                layers.push(ResidualLayer::from_layer(&r.layers[0], &bounds).unwrap());
            }
        }
        let agg = aggregate(&layers).unwrap();
        let worst = agg.std.iter().copied().fold(0.0, f64::max);
        check(worst <= 0.08, || format!("max std {worst:.4}"))?;
        Ok(format!("max std {worst:.4} over {} instances", agg.count))
    });
}

#[test]
fn c7_lattice_closed_form() {
    criterion(7, "grid lattice closed form", Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.random_range(1..=256usize);
            let lower = rng.random_range(-10.0..10.0);
            let upper = lower + rng.random_range(1e-3..20.0);
            let pts = lattice((lower, upper), n);
            check(pts.len() == n, || format!("length {} for n={n}", pts.len()))?;
            for (i, &x) in pts.iter().enumerate() {
                let expected = upper - (i as f64 / n as f64) * (upper - lower);
                check((x - expected).abs() <= 1e-12, || format!("n={n} i={i}: {x} vs {expected}"))?;
            }
            check(pts[0] == upper && pts.iter().all(|&x| x > lower), || format!("endpoints for n={n}"))?;
        }
        Ok("1000 specs".into())
    });
}

fn binary_scan(instance: &Path, out: &Path, threads: usize) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_qaoa-land"))
        .args(["--threads", &threads.to_string(), "scan", "--instance"])
        .arg(instance)
        .args(["--strategy", "sequential", "--p-target", "7", "--resolution", "32", "--out-dir"])
        .arg(out)
        .status()
        .unwrap();
    assert!(status.success());
    fs::read(out.join("landscape.csv")).unwrap()
}

#[test]
fn c8_thread_count_does_not_change_output() {
    criterion(8, "byte-identical CSVs for 1 and 8 threads", Duration::from_secs(1200), || {
        let tmp = tempfile::tempdir().unwrap();
        let gen = Command::new(env!("CARGO_BIN_EXE_qaoa-land"))
            .args(["gen", "--kind", "maxcut", "--n", "10", "--count", "10", "--out-dir"])
            .arg(tmp.path().join("inst"))
            .status()
            .unwrap();
        assert!(gen.success());
        for seed in 0..10 {
            let inst = tmp.path().join(format!("inst/maxcut_n10_s{seed}.json"));
            let one = binary_scan(&inst, &tmp.path().join(format!("t1_{seed}")), 1);
            let eight = binary_scan(&inst, &tmp.path().join(format!("t8_{seed}")), 8);
            check(one == eight, || format!("instance seed {seed} differs"))?;
        }
        Ok("10 instances identical".into())
    });
}

#[test]
fn c9_n16_scan_fits_the_desk_budget() {
    criterion(9, "sequential scan, n=16, p=7, 32x32", Duration::from_secs(600), || {
        let h = maxcut_suite(16, 1).remove(0);
        let (r, _) = run_scan(&h, &sequential_cfg(7));
        check(r.grid_evaluations == 7 * 1024, || format!("{} grid evaluations", r.grid_evaluations))?;
        Ok(format!("{} grid evaluations on {} threads", r.grid_evaluations, rayon_threads()))
    });
}

fn rayon_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
