use std::path::Path;

use super::output::{
    checks_text, ensure_dir, write_csv, write_text, Check, TraceRow, TRACE_HEADER,
};
use super::{
    capture_instants, plant_rng, simulate_plant, timer_events, Capture, Pipeline, PlantSpec,
    Weather,
};
use crate::config::Config;
use crate::control::{timer_tick, ControllerState, PumpCommand};
use crate::exec::Execution;
use crate::growth::PlantState;
use crate::ledger::{savings, DailyUsage, PumpEvent, Regime, WaterLedger};
use crate::time::SimTime;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HeightRow {
    pub day: i64,
    pub regime: Regime,
    pub plants_measured: usize,
    pub mean_height_cm: f64,
    /// Same capture in the all-timer control run.
    pub control_mean_height_cm: f64,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub water: Vec<DailyUsage>,
    pub events: Vec<PumpEvent>,
    pub heights: Vec<HeightRow>,
    pub trace: Vec<TraceRow>,
    pub timer_mean_l_per_day: Option<f64>,
    pub auto_mean_l_per_day: Option<f64>,
    pub savings: Option<f64>,
    /// Mean height gain over the automatic period, and the same gain in the
    /// control run: `(first capture day, last capture day, auto, control)`.
    pub auto_period_growth: Option<(i64, i64, f64, f64)>,
    pub skipped: usize,
    pub checks: Vec<Check>,
    /// Representative plant at the end of the closed loop.
    pub representative_final: PlantState,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn auto_activations_per_day(&self) -> Vec<u32> {
        self.water
            .iter()
            .filter(|r| r.regime == Regime::Auto)
            .map(|r| r.activations)
            .collect()
    }

    /// Relative gap between the automatic-period height gain and the
    /// control run's gain over the same captures.
    pub fn growth_gap(&self) -> Option<f64> {
        self.auto_period_growth
            .map(|(_, _, a, c)| (a - c).abs() / c.abs())
    }

    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        ensure_dir(dir)?;
        write_csv(
            &dir.join("water.csv"),
            &["day", "regime", "activations", "liters", "complete"],
            self.water.iter().map(|r| {
                vec![
                    r.day.to_string(),
                    r.regime.to_string(),
                    r.activations.to_string(),
                    format!("{:.3}", r.liters),
                    r.complete.to_string(),
                ]
            }),
        )?;
        write_csv(
            &dir.join("heights.csv"),
            &[
                "day",
                "regime",
                "plants_measured",
                "mean_height_cm",
                "control_mean_height_cm",
            ],
            self.heights.iter().map(|h| {
                vec![
                    h.day.to_string(),
                    h.regime.to_string(),
                    h.plants_measured.to_string(),
                    format!("{:.4}", h.mean_height_cm),
                    format!("{:.4}", h.control_mean_height_cm),
                ]
            }),
        )?;
        write_csv(
            &dir.join("trace.csv"),
            &TRACE_HEADER,
            self.trace.iter().map(TraceRow::record),
        )?;

        let fmt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.2}"));
        let mut s = String::from("fertigation comparison\n");
        s += &format!("timer mean: {} L/day\n", fmt(self.timer_mean_l_per_day));
        s += &format!("auto mean: {} L/day\n", fmt(self.auto_mean_l_per_day));
        s += &format!(
            "savings: {}\n",
            self.savings
                .map_or("n/a".to_string(), |v| format!("{:.1}%", 100.0 * v))
        );
        if let Some((d0, d1, a, c)) = self.auto_period_growth {
            s += &format!(
                "height gain day {d0}-{d1}: auto {a:.2} cm, all-timer control {c:.2} cm\n"
            );
        }
        s += &format!(
            "pump events: {}\nskipped samples: {}\n",
            self.events.len(),
            self.skipped
        );
        s += &checks_text(&self.checks);
        write_text(&dir.join("summary.txt"), &s)
    }
}

struct ClosedLoop {
    ledger: WaterLedger,
    events: Vec<SimTime>,
    trace: Vec<TraceRow>,
    skipped: usize,
    representative: PlantState,
}

/// Runs the representative plant through the regime timeline, deciding
/// every pump activation.
fn closed_loop(cfg: &Config, weather: &Weather) -> Result<ClosedLoop> {
    let c = &cfg.compare;
    let model = &cfg.plant;
    let controller = cfg.schedule.controller(c.sample_interval_min)?;
    let schedule = controller.schedule;
    let pump = cfg.pump_model()?;
    let pipeline = Pipeline::new(cfg);
    let end = SimTime::at(c.total_days(), 0);

    let mut rng = plant_rng(cfg.seed, 0);
    let mut plant = model.seedling(c.band, model.draw_vigor(&mut rng));
    let mut ctrl = ControllerState::default();
    let mut ledger = WaterLedger::new();
    let mut events = Vec::new();
    let mut trace = Vec::new();
    let mut skipped = 0;
    let mut day = -1;
    let mut regime = Regime::Timer;
    let mut demand = weather.on(0);

    while plant.time < end {
        let t = plant.time;
        if t.day() != day {
            day = t.day();
            regime = c
                .regime_on(day)
                .ok_or_else(|| Error::Config(format!("no regime covers day {day}")))?;
            ledger.open_day(day, regime)?;
            demand = weather.on(day);
        }
        if schedule.window.contains(t.clock()) {
            let mut sample = None;
            let command = match regime {
                Regime::Timer => timer_tick(&schedule, t),
                Regime::Auto if schedule.is_sample_instant(t) => {
                    match pipeline.measure_at(0, &plant, c.camera_distance_cm) {
                        Ok(m) => {
                            let tick = controller.tick(&ctrl, m.width_cm, t)?;
                            ctrl = tick.state;
                            sample = Some((m, tick));
                            tick.command
                        }
                        Err(Error::NoPlantDetected { .. }) => {
                            skipped += 1;
                            PumpCommand::Off
                        }
                        Err(e) => return Err(e),
                    }
                }
                Regime::Auto => PumpCommand::Off,
            };
            ledger.accrue(command, t, &pump)?;
            if command == PumpCommand::On {
                events.push(t);
                plant = model.apply_irrigation(&plant, model.draw_lag(&mut rng));
            }
            if let Some((m, tick)) = sample {
                trace.push(TraceRow {
                    time: t,
                    plant_id: 0,
                    height_cm: m.height_cm,
                    width_cm: m.width_cm,
                    wilt_degree: tick.wilt_degree,
                    gradient_sign: tick.gradient_sign,
                    command: tick.command,
                    liters_to_date: ledger.total_liters(),
                });
            }
        }
        plant = model.advance(&plant, 1, &demand)?;
    }
    ledger.finish(end);
    Ok(ClosedLoop {
        ledger,
        events,
        trace,
        skipped,
        representative: plant,
    })
}

/// Mean measured height per capture instant, plus the number of skipped
/// frames.
fn population_heights(
    cfg: &Config,
    exec: Execution,
    weather: &Weather,
    events: &[SimTime],
    captures: &[SimTime],
) -> Result<(Vec<(f64, usize)>, usize)> {
    let c = &cfg.compare;
    let Some(&last) = captures.last() else {
        return Ok((Vec::new(), 0));
    };
    let specs: Vec<PlantSpec> = (0..c.population)
        .map(|id| PlantSpec { id, band: c.band })
        .collect();
    let states = exec.try_map(&specs, |spec| {
        simulate_plant(&cfg.plant, *spec, cfg.seed, weather, events, captures, last)
    })?;
    let jobs: Vec<(usize, PlantState)> = (0..captures.len())
        .flat_map(|k| states.iter().enumerate().map(move |(id, s)| (id, s[k])))
        .collect();
    let shots = Pipeline::new(cfg).capture_batch(exec, &jobs)?;
    let mut skipped = 0;
    let means = shots
        .chunks(c.population)
        .map(|chunk| {
            let hs: Vec<f64> = chunk
                .iter()
                .filter_map(|s| match s {
                    Capture::Measured(m) => Some(m.height_cm),
                    Capture::Skipped => None,
                })
                .collect();
            skipped += chunk.len() - hs.len();
            let mean = if hs.is_empty() {
                f64::NAN
            } else {
                hs.iter().sum::<f64>() / hs.len() as f64
            };
            (mean, hs.len())
        })
        .collect();
    Ok((means, skipped))
}

/// Timer fertigation versus wilt-triggered fertigation on one population,
/// with an all-timer control run of the same plants as the growth oracle.
pub fn run_fertigation_comparison(cfg: &Config, exec: Execution) -> Result<ComparisonReport> {
    cfg.validate()?;
    let c = &cfg.compare;
    let days = c.total_days();
    let weather = Weather::new(
        cfg.seed,
        cfg.demand.greenhouse()?.scaled(c.demand_scale),
        cfg.demand.daily_variation,
        days,
    );
    let schedule = cfg.schedule.schedule(c.sample_interval_min)?;

    let lp = closed_loop(cfg, &weather)?;
    let captures = capture_instants(c.capture_every_days, days - 1, c.capture_clock);
    let (auto_means, skipped_a) = population_heights(cfg, exec, &weather, &lp.events, &captures)?;
    let control_events = timer_events(&schedule, 0..days);
    let (ctrl_means, _) = population_heights(cfg, exec, &weather, &control_events, &captures)?;

    let heights: Vec<HeightRow> = captures
        .iter()
        .zip(auto_means.iter().zip(&ctrl_means))
        .map(|(t, ((m, n), (cm, _)))| HeightRow {
            day: t.day(),
            regime: c.regime_on(t.day()).unwrap_or(Regime::Timer),
            plants_measured: *n,
            mean_height_cm: *m,
            control_mean_height_cm: *cm,
        })
        .collect();

    let timer_mean = lp.ledger.mean_per_day(Regime::Timer);
    let auto_mean = lp.ledger.mean_per_day(Regime::Auto);
    let saved = match (timer_mean, auto_mean) {
        (Some(t), Some(a)) => Some(savings(t, a)?),
        _ => None,
    };

    // Gain from the last capture at or before the first automatic day's
    // window opens to the first capture after the automatic span ends.
    let auto_period_growth = c
        .timeline
        .iter()
        .find(|s| s.regime == Regime::Auto)
        .and_then(|span| {
            let from = SimTime::at(span.first_day, schedule.window.start_min);
            let to = SimTime::at(span.last_day + 1, 0);
            let i0 = captures.iter().rposition(|&t| t <= from)?;
            let i1 = captures.iter().position(|&t| t >= to)?;
            Some((
                captures[i0].day(),
                captures[i1].day(),
                auto_means[i1].0 - auto_means[i0].0,
                ctrl_means[i1].0 - ctrl_means[i0].0,
            ))
        });

    let mut report = ComparisonReport {
        water: lp.ledger.rows().to_vec(),
        events: lp.ledger.events().to_vec(),
        heights,
        trace: lp.trace,
        timer_mean_l_per_day: timer_mean,
        auto_mean_l_per_day: auto_mean,
        savings: saved,
        auto_period_growth,
        skipped: lp.skipped + skipped_a,
        checks: Vec::new(),
        representative_final: lp.representative,
    };

    let mut checks = vec![Check::new(
        format!("water savings >= {:.0}%", 100.0 * c.min_savings),
        saved.is_some_and(|s| s >= c.min_savings),
        match saved {
            Some(s) => format!(
                "timer {:.2} L/day, auto {:.2} L/day, savings {:.1}%",
                timer_mean.unwrap_or(f64::NAN),
                auto_mean.unwrap_or(f64::NAN),
                100.0 * s
            ),
            None => "needs complete timer and auto days".to_string(),
        },
    )];
    if let Some((d0, d1, a, ctl)) = report.auto_period_growth {
        let gap = report.growth_gap().unwrap_or(f64::INFINITY);
        checks.push(Check::new(
            format!(
                "auto-period growth within {:.0}% of timer control",
                100.0 * c.growth_tolerance
            ),
            gap <= c.growth_tolerance,
            format!(
                "day {d0}-{d1}: auto +{a:.2} cm, control +{ctl:.2} cm, gap {:.1}%",
                100.0 * gap
            ),
        ));
    }
    report.checks = checks;
    Ok(report)
}
