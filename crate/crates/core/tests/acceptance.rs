//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spa_sim::config::Config;
use spa_sim::control::{timer_tick, ControllerState, PumpCommand, Schedule, SpaController};
use spa_sim::growth::EcBand;
use spa_sim::ledger::{calibrate_flow, Regime, WaterLedger};
use spa_sim::ppm::encode;
use spa_sim::render::{capture_distance, draw, rasterize, CameraConfig};
use spa_sim::scenario::{
    run_fertigation_comparison, run_growth_experiment, run_monitoring_trace, ComparisonReport,
};
use spa_sim::vision::{analyze, VisionConfig};
use spa_sim::{Execution, SimTime};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn preset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../presets")
        .join(name)
}

fn water_savings(r: &ComparisonReport, elapsed: Duration) -> Outcome {
    let (Some(s), Some(auto)) = (r.savings, r.auto_mean_l_per_day) else {
        return outcome(false, "no complete timer/auto days");
    };
    let ok = (0.80..=0.90).contains(&s)
        && (auto - 17.3).abs() <= 4.0
        && elapsed < Duration::from_secs(30);
    outcome(
        ok,
        format!(
            "savings {:.4}, auto {auto:.2} L/day, timer {:.2} L/day, {:.1?}",
            s,
            r.timer_mean_l_per_day.unwrap_or(f64::NAN),
            elapsed
        ),
    )
}

fn timer_arithmetic() -> Outcome {
    let schedule = Schedule::default();
    let pump = calibrate_flow(101.6, 18).unwrap();
    let mut ledger = WaterLedger::new();
    let mut minutes_on = 0;
    let mut ok = true;
    for day in 0..3 {
        ledger.open_day(day, Regime::Timer).unwrap();
        for m in 0..1440 {
            let cmd = timer_tick(&schedule, SimTime::at(day, m));
            minutes_on += cmd.duration_min();
            ledger.accrue(cmd, SimTime::at(day, m), &pump).unwrap();
        }
    }
    ledger.finish(SimTime::at(3, 0));
    for row in ledger.rows() {
        ok &= row.activations == 18 && (row.liters - 101.6).abs() <= 0.1;
    }
    ok &= minutes_on == 3 * 54;
    let row = ledger.rows()[0];
    outcome(
        ok,
        format!(
            "{} activations, {} pump-min, {:.4} L per day (flow {:.4} L/min)",
            row.activations,
            minutes_on / 3,
            row.liters,
            pump.flow_l_per_min
        ),
    )
}

fn monitoring_event() -> Outcome {
    let cfg = match Config::load(preset("monitor.cfg")) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let r = run_monitoring_trace(&cfg).unwrap();
    let span = r.rows.last().map(|x| x.time.minutes() - r.start.minutes());
    let ok = r.events == [(17, 255)] && r.rows.len() == 26 && span == Some(375);
    outcome(
        ok,
        format!(
            "events (index, minute) {:?} over {} samples spanning {} min",
            r.events,
            r.rows.len(),
            span.unwrap_or(0)
        ),
    )
}

fn wilt_rule_grid() -> Outcome {
    let ctl = SpaController::default();
    let t0 = SimTime::at(1, 8 * 60);
    let mut cases = 0;
    let mut mismatches = Vec::new();
    let mut boundary = [0, 0];
    for r in [50i64, 100, 150, 200, 400] {
        let lo = r * 90 / 100;
        let hi = r * 102 / 100;
        for prev in lo..=hi {
            for cur in lo..=hi {
                let s = ctl.tick(&ControllerState::default(), r as f64, t0).unwrap();
                let s = ctl.tick(&s.state, prev as f64, t0.plus(30)).unwrap();
                let s = ctl.tick(&s.state, cur as f64, t0.plus(60)).unwrap();
                // wilt > 2% ⇔ 50·(r − cur) > r, in exact integers.
                let expect = 50 * (r - cur) > r && prev > cur;
                if 50 * (r - cur) == r {
                    boundary[0] += 1;
                }
                if prev == cur && 50 * (r - cur) > r {
                    boundary[1] += 1;
                }
                if (s.command == PumpCommand::On) != expect {
                    mismatches.push((r, prev, cur));
                }
                cases += 1;
            }
        }
    }
    outcome(
        mismatches.is_empty() && boundary[0] > 0 && boundary[1] > 0,
        format!(
            "{cases} cases ({} at wilt = 2%, {} with prev = cur), mismatches {:?}",
            boundary[0],
            boundary[1],
            &mismatches[..mismatches.len().min(5)]
        ),
    )
}

fn vision_oracle() -> Outcome {
    let cam = CameraConfig::default();
    let vision = VisionConfig::default();
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let schedule: Vec<f64> = (0..=14).map(|k| 30.0 + 10.0 * k as f64).collect();
    let start = Instant::now();
    let (mut pixel_err, mut phys_err, mut worst_invariance) = (0, 0, 0.0f64);
    for _ in 0..1000 {
        let age: f64 = rng.random_range(0.0..=48.0);
        let band = EcBand::ALL[rng.random_range(0..3)];
        let vigor = rng.random_range(0.95..=1.05);
        let turgor: f64 = rng.random_range(0.0..=1.0);
        let h = cfg.plant.seedling_height_cm * (cfg.plant.rate_per_day(band) * vigor * age).exp();
        let w = h * cfg.plant.seedling_width_cm / cfg.plant.seedling_height_cm
            * (1.0 - cfg.plant.max_shrink * (1.0 - turgor));
        let fits: Vec<f64> = schedule
            .iter()
            .copied()
            .filter(|&d| rasterize(h, w, &cam, d).is_ok())
            .collect();
        let d1 = fits[rng.random_range(0..fits.len())];
        let d2 = fits[rng.random_range(0..fits.len())];
        let mut heights = [0.0; 2];
        for (k, d) in [d1, d2].into_iter().enumerate() {
            let sil = rasterize(h, w, &cam, d).unwrap();
            let gt = sil.ground_truth();
            let frame = draw(&sil, &cam, d, SimTime(0), 0);
            let m = analyze(&frame, &cam, &vision).unwrap();
            if m.height_px != gt.height_px || m.width_px != gt.width_px {
                pixel_err += 1;
            }
            let px_cm = d / cam.focal_px;
            if (m.height_cm - h).abs() > px_cm + 1e-9 || (m.width_cm - w).abs() > px_cm + 1e-9 {
                phys_err += 1;
            }
            heights[k] = m.height_cm;
        }
        worst_invariance =
            worst_invariance.max((heights[0] - heights[1]).abs() / heights[0].max(heights[1]));
    }
    let elapsed = start.elapsed();
    outcome(
        pixel_err == 0
            && phys_err == 0
            && worst_invariance <= 0.02
            && elapsed < Duration::from_secs(10),
        format!(
            "1000 pairs: {pixel_err} pixel mismatches, {phys_err} physical > 1 px, \
             worst distance spread {:.2}%, {:.1?}",
            100.0 * worst_invariance,
            elapsed
        ),
    )
}

fn growth_ordering() -> Outcome {
    let mut failures = Vec::new();
    for seed in 1..=10 {
        let cfg = Config {
            seed,
            ..Config::default()
        };
        let r = run_growth_experiment(&cfg, Execution::default()).unwrap();
        if r.capture_days.len() != 15 || !r.passed() {
            failures.push(format!(
                "seed {seed}: {} capture days, {}",
                r.capture_days.len(),
                r.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.detail.as_str())
                    .collect::<Vec<_>>()
                    .join("; ")
            ));
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "ordering on all 15 capture days and non-decreasing increments for seeds 1-10"
                .to_string()
        } else {
            failures.join(" | ")
        },
    )
}

fn growth_maintenance(r: &ComparisonReport) -> Outcome {
    match (r.auto_period_growth, r.growth_gap()) {
        (Some((d0, d1, a, c)), Some(gap)) => outcome(
            gap <= 0.10,
            format!(
                "day {d0}-{d1}: auto +{a:.2} cm vs control +{c:.2} cm, gap {:.2}%",
                100.0 * gap
            ),
        ),
        _ => outcome(false, "no automatic period in the timeline"),
    }
}

fn read_tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((
                    p.strip_prefix(dir).unwrap().to_path_buf(),
                    fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

fn determinism(first_compare: &ComparisonReport) -> Outcome {
    let cfg = Config::default();
    let root = tempfile::tempdir().unwrap();
    let dir = |run: &str, name: &str| root.path().join(run).join(name);
    let mut files = 0;
    let mut diffs = Vec::new();

    first_compare.write_outputs(&dir("a", "compare")).unwrap();
    run_fertigation_comparison(&cfg, Execution::Sequential)
        .unwrap()
        .write_outputs(&dir("b", "compare"))
        .unwrap();
    for run in ["a", "b"] {
        let exec = if run == "a" {
            Execution::default()
        } else {
            Execution::Sequential
        };
        run_growth_experiment(&cfg, exec)
            .unwrap()
            .write_outputs(&dir(run, "growth"))
            .unwrap();
        let m = run_monitoring_trace(&cfg).unwrap();
        m.write_outputs(&dir(run, "monitor")).unwrap();
        m.write_frames(&cfg, &dir(run, "monitor/frames")).unwrap();
    }
    let (a, b) = (
        read_tree(&root.path().join("a")),
        read_tree(&root.path().join("b")),
    );
    if a.len() != b.len() {
        diffs.push(format!("{} vs {} files", a.len(), b.len()));
    }
    for ((pa, ba), (pb, bb)) in a.iter().zip(&b) {
        files += 1;
        if pa != pb || ba != bb {
            diffs.push(pa.display().to_string());
        }
    }
    let ppm = a
        .iter()
        .filter(|(p, _)| p.extension().is_some_and(|e| e == "ppm"))
        .count();

    let cam = CameraConfig {
        noise_amplitude: 20,
        ..CameraConfig::default()
    };
    let sil = rasterize(40.0, 12.0, &cam, 100.0).unwrap();
    if encode(&draw(&sil, &cam, 100.0, SimTime(0), 9))
        != encode(&draw(&sil, &cam, 100.0, SimTime(0), 9))
    {
        diffs.push("noisy frame".into());
    }
    outcome(
        diffs.is_empty() && ppm > 0,
        format!("{files} files ({ppm} PPM) byte-identical across runs and execution modes; differing: {diffs:?}"),
    )
}

fn distance_schedule() -> Outcome {
    let mut bad = Vec::new();
    for k in 0..=14 {
        for offset in [0.0, 1.0, 2.0, 2.999] {
            let day = 3.0 * k as f64 + offset;
            let want = if offset == 0.0 || k < 14 {
                30.0 + 10.0 * k as f64
            } else {
                170.0
            };
            if capture_distance(day).unwrap() != want {
                bad.push(day);
            }
        }
    }
    for day in [43.0, 45.0, 60.0, 100.0, 1000.0] {
        if capture_distance(day).unwrap() != 170.0 {
            bad.push(day);
        }
    }
    let negative_rejected = capture_distance(-1.0).is_err();
    outcome(
        bad.is_empty() && negative_rejected,
        format!("days 0,3,..,42 map to 30..170 cm, clamped after; mismatches {bad:?}"),
    )
}

fn main() -> ExitCode {
    let cfg = Config::default();
    let start = Instant::now();
    let compare = run_fertigation_comparison(&cfg, Execution::default()).unwrap();
    let compare_time = start.elapsed();

    let results = [
        ("1 water savings", water_savings(&compare, compare_time)),
        ("2 timer arithmetic", timer_arithmetic()),
        ("3 monitoring trace event", monitoring_event()),
        ("4 wilt rule grid", wilt_rule_grid()),
        ("5 vision/renderer oracle", vision_oracle()),
        ("6 growth ordering", growth_ordering()),
        ("7 growth maintenance", growth_maintenance(&compare)),
        ("8 determinism", determinism(&compare)),
        ("9 distance schedule", distance_schedule()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "[{}] {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
