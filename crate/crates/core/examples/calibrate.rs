//! Sweeps the two demand presets and prints the resulting controller
//! behaviour.
//!
//! ```text
//! cargo run --release -p spa-sim --example calibrate -- monitor 0.001 0.003 21
//! cargo run --release -p spa-sim --example calibrate -- compare 0.001 0.004 7
//! ```

use std::env;
use std::time::Instant;

use spa_sim::config::Config;
use spa_sim::scenario::{
    first_overlap_day, run_fertigation_comparison, run_growth_experiment, run_monitoring_trace,
};
use spa_sim::Execution;

fn main() -> spa_sim::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let what = args.first().map(String::as_str).unwrap_or("monitor");
    let num = |i: usize, d: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let (lo, hi, n) = (num(1, 0.001), num(2, 0.004), num(3, 7.0) as usize);
    let seed = num(4, 0.0) as u64;

    for k in 0..n {
        let peak = if n > 1 {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        } else {
            lo
        };
        let mut cfg = Config::default();
        if seed != 0 {
            cfg.seed = seed;
        }
        if let Some(d) = args.get(5).and_then(|s| s.parse().ok()) {
            cfg.plant.recovery_duration_min = d;
        }
        if let Some(x) = args.get(6).and_then(|s| s.parse().ok()) {
            cfg.demand.shape = x;
        }
        match what {
            "monitor" => {
                cfg.demand.monitor_peak_loss_per_min = peak;
                let r = run_monitoring_trace(&cfg)?;
                let min_wilt = r.rows.iter().map(|x| x.wilt_degree).fold(0.0, f64::max);
                println!(
                    "peak {peak:.6}: events {:?} max wilt {min_wilt:.4}",
                    r.events
                );
            }
            "compare" => {
                cfg.demand.greenhouse_peak_loss_per_min = peak;
                let t = Instant::now();
                let r = run_fertigation_comparison(&cfg, Execution::default())?;
                let acts = r.auto_activations_per_day();
                println!(
                    "peak {peak:.6}: timer {:?} auto {:?} savings {:?} gap {:?} acts {acts:?} ({:.1?})",
                    r.timer_mean_l_per_day,
                    r.auto_mean_l_per_day,
                    r.savings,
                    r.growth_gap(),
                    t.elapsed()
                );
            }
            "trace" => {
                cfg.demand.greenhouse_peak_loss_per_min = peak;
                let r = run_fertigation_comparison(&cfg, Execution::default())?;
                for t in &r.trace {
                    println!(
                        "{} w {:.3} wilt {:+.4} {}",
                        t.time,
                        t.width_cm,
                        t.wilt_degree,
                        t.command.label()
                    );
                }
            }
            "growth" => {
                let r = run_growth_experiment(&cfg, Execution::default())?;
                let overlap = first_overlap_day(&cfg, Execution::default(), 60)?;
                println!(
                    "captures {} overlap {:?} skipped {} last means {:?}",
                    r.capture_days.len(),
                    overlap,
                    r.skipped,
                    r.daily_true_means.last()
                );
                for c in &r.checks {
                    println!("  {}", c.line());
                }
            }
            other => panic!("unknown sweep {other}"),
        }
    }
    Ok(())
}
