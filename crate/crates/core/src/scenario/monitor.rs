use std::path::Path;

use super::output::{
    checks_text, ensure_dir, write_csv, write_text, Check, TraceRow, TRACE_HEADER,
};
use super::{plant_rng, Pipeline};
use crate::config::Config;
use crate::control::{ControllerState, PumpCommand};
use crate::growth::{DemandProfile, PlantState};
use crate::ledger::{Regime, WaterLedger};
use crate::ppm::write_ppm;
use crate::render::Frame;
use crate::time::{format_clock, SimTime};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonitorReport {
    pub start: SimTime,
    pub rows: Vec<TraceRow>,
    /// `(sample index, minutes since the first sample)` of each pump event.
    pub events: Vec<(usize, i64)>,
    pub skipped: usize,
    pub liters: f64,
    pub checks: Vec<Check>,
    /// Plant state at each sample instant, before that sample's irrigation.
    pub states: Vec<PlantState>,
}

impl MonitorReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn event_minutes(&self) -> Vec<i64> {
        self.events.iter().map(|e| e.1).collect()
    }

    /// Re-renders the camera frame of every sample.
    pub fn frames(&self, cfg: &Config) -> Result<Vec<Frame>> {
        let pipeline = Pipeline::new(cfg);
        self.states
            .iter()
            .map(|s| pipeline.frame_at(0, s, cfg.monitor.camera_distance_cm))
            .collect()
    }

    /// Writes `frame_NN.ppm` for every sample into `dir`.
    pub fn write_frames(&self, cfg: &Config, dir: &Path) -> Result<()> {
        ensure_dir(dir)?;
        for (k, f) in self.frames(cfg)?.iter().enumerate() {
            write_ppm(f, dir.join(format!("frame_{k:02}.ppm")))?;
        }
        Ok(())
    }

    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        ensure_dir(dir)?;
        write_csv(
            &dir.join("trace.csv"),
            &TRACE_HEADER,
            self.rows.iter().map(TraceRow::record),
        )?;
        write_csv(
            &dir.join("events.csv"),
            &["sample", "minute", "clock"],
            self.events.iter().map(|&(i, m)| {
                vec![
                    i.to_string(),
                    m.to_string(),
                    format_clock(self.start.plus(m).clock()),
                ]
            }),
        )?;
        let mut s = format!(
            "monitoring trace\nsamples: {}\nstart: {}\npump events: {}\n",
            self.rows.len() + self.skipped,
            self.start,
            self.events.len()
        );
        for &(i, m) in &self.events {
            s += &format!(
                "  sample {i} at minute {m} ({})\n",
                format_clock(self.start.plus(m).clock())
            );
        }
        s += &format!(
            "water: {:.3} L\nskipped samples: {}\n",
            self.liters, self.skipped
        );
        s += &checks_text(&self.checks);
        write_text(&dir.join("summary.txt"), &s)
    }
}

/// Real-time monitoring of one plant over a single day: image every
/// `sample_interval_min`, apply the wilt rule, water on demand.
pub fn run_monitoring_trace(cfg: &Config) -> Result<MonitorReport> {
    let m = &cfg.monitor;
    let model = &cfg.plant;
    let controller = cfg.schedule.controller(m.sample_interval_min)?;
    let pump = cfg.pump_model()?;
    let demand = cfg.demand.monitor_day()?.scaled(m.demand_scale);
    let pipeline = Pipeline::new(cfg);

    let start = SimTime::at(m.start_day, m.start_clock);
    if start.minutes() < 0 {
        return Err(Error::Config("monitor.start_day must be >= 0".into()));
    }
    let last = start.plus(m.sample_interval_min * (m.samples as i64 - 1));
    for t in [start, last] {
        if !controller.schedule.window.contains(t.clock()) || t.day() != start.day() {
            return Err(Error::Config(format!(
                "monitoring samples must stay inside the {}-{} control window (sample at {t})",
                format_clock(controller.schedule.window.start_min),
                format_clock(controller.schedule.window.end_min)
            )));
        }
    }

    // The monitored plant arrives fully turgid at the start of the day.
    let mut rng = plant_rng(cfg.seed, 0);
    let seedling = model.seedling(m.band, model.draw_vigor(&mut rng));
    let mut plant = if start.minutes() > 0 {
        model.advance(&seedling, start.minutes(), &DemandProfile::none())?
    } else {
        seedling
    };

    let mut ctrl = ControllerState::default();
    let mut ledger = WaterLedger::new();
    ledger.open_day(start.day(), Regime::Auto)?;
    let mut rows = Vec::new();
    let mut events = Vec::new();
    let mut skipped = 0;
    let mut states = Vec::with_capacity(m.samples);
    for k in 0..m.samples {
        let t = start.plus(m.sample_interval_min * k as i64);
        if plant.time < t {
            plant = model.advance(&plant, t.minutes() - plant.time.minutes(), &demand)?;
        }
        states.push(plant);
        let morph = match pipeline.measure_at(0, &plant, m.camera_distance_cm) {
            Ok(x) => x,
            Err(Error::NoPlantDetected { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let tick = controller.tick(&ctrl, morph.width_cm, t)?;
        ctrl = tick.state;
        ledger.accrue(tick.command, t, &pump)?;
        if tick.command == PumpCommand::On {
            events.push((k, t.minutes() - start.minutes()));
            plant = model.apply_irrigation(&plant, model.draw_lag(&mut rng));
        }
        rows.push(TraceRow {
            time: t,
            plant_id: 0,
            height_cm: morph.height_cm,
            width_cm: morph.width_cm,
            wilt_degree: tick.wilt_degree,
            gradient_sign: tick.gradient_sign,
            command: tick.command,
            liters_to_date: ledger.total_liters(),
        });
    }

    let expected = m.expected_event_minute;
    let minutes: Vec<i64> = events.iter().map(|e| e.1).collect();
    let checks = vec![Check::new(
        format!("single pump event at minute {expected}"),
        minutes == [expected],
        format!("events at minutes {minutes:?}"),
    )];
    Ok(MonitorReport {
        start,
        liters: ledger.total_liters(),
        rows,
        events,
        skipped,
        checks,
        states,
    })
}
