//! The three experiments: growth curves under three nutrient bands, a
//! single-day monitoring trace, and the timer-versus-automatic comparison.
//!
//! Plants never interact, so once the irrigation event times are known
//! each plant's trajectory is independent. Scenarios first fix the event
//! list (deterministic timer, or the closed loop around the one monitored
//! plant), then advance the population and run the render/measure stages
//! as data-parallel batches through [`Execution`].

mod compare;
mod growth;
mod monitor;
mod output;

pub use compare::{run_fertigation_comparison, ComparisonReport, HeightRow};
pub use growth::{first_overlap_day, run_growth_experiment, GroupMean, GrowthReport, PlantCapture};
pub use monitor::{run_monitoring_trace, MonitorReport};
pub use output::{Check, TraceRow};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::control::{timer_tick, PumpCommand, Schedule};
use crate::exec::Execution;
use crate::growth::{DemandProfile, EcBand, PlantModel, PlantState};
use crate::render::{capture_distance, render, CameraConfig, Frame};
use crate::time::SimTime;
use crate::vision::{analyze, Morphometry, VisionConfig};
use crate::{Error, Result};

/// Random stream for one plant: its vigor draw, then one lag per
/// irrigation, in time order. Stream 0 is reserved for the weather.
pub fn plant_rng(seed: u64, plant_id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(plant_id as u64 + 1);
    rng
}

fn frame_noise_seed(seed: u64, plant_id: usize, t: SimTime) -> u64 {
    // SplitMix64 finalizer over the three inputs.
    let mut z = seed
        ^ (plant_id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (t.minutes() as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Day-by-day greenhouse weather: each day's peak demand is the preset
/// times a seeded factor in `1 ± daily_variation`.
#[derive(Debug, Clone)]
pub struct Weather {
    base: DemandProfile,
    day_factors: Vec<f64>,
}

impl Weather {
    pub fn new(seed: u64, base: DemandProfile, variation: f64, days: i64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(0);
        let day_factors = (0..days.max(0))
            .map(|_| {
                if variation == 0.0 {
                    1.0
                } else {
                    1.0 + rng.random_range(-variation..=variation)
                }
            })
            .collect();
        Weather { base, day_factors }
    }

    pub fn constant(base: DemandProfile) -> Self {
        Weather {
            base,
            day_factors: Vec::new(),
        }
    }

    pub fn on(&self, day: i64) -> DemandProfile {
        let f = usize::try_from(day)
            .ok()
            .and_then(|d| self.day_factors.get(d))
            .copied()
            .unwrap_or(1.0);
        self.base.scaled(f)
    }
}

/// Per-plant identity within a population.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlantSpec {
    pub id: usize,
    pub band: EcBand,
}

/// Advances one plant from transplanting to `end`, irrigating at each
/// `events` instant and snapshotting the state at each `record_at` instant
/// (before that minute's irrigation and growth).
pub fn simulate_plant(
    model: &PlantModel,
    spec: PlantSpec,
    seed: u64,
    weather: &Weather,
    events: &[SimTime],
    record_at: &[SimTime],
    end: SimTime,
) -> Result<Vec<PlantState>> {
    let mut rng = plant_rng(seed, spec.id);
    let mut s = model.seedling(spec.band, model.draw_vigor(&mut rng));
    let mut ev = events.iter().peekable();
    let mut rec = record_at.iter().peekable();
    let mut out = Vec::with_capacity(record_at.len());
    let mut demand = weather.on(0);
    let mut demand_day = 0;
    while s.time <= end {
        while rec.next_if(|&&t| t == s.time).is_some() {
            out.push(s);
        }
        if ev.next_if(|&&t| t == s.time).is_some() {
            s = model.apply_irrigation(&s, model.draw_lag(&mut rng));
            while ev.next_if(|&&t| t == s.time).is_some() {}
        }
        if s.time == end {
            break;
        }
        if s.time.day() != demand_day {
            demand_day = s.time.day();
            demand = weather.on(demand_day);
        }
        s = model.advance(&s, 1, &demand)?;
    }
    if out.len() != record_at.len() {
        return Err(Error::invalid(
            "record instants must be sorted and within the run",
        ));
    }
    Ok(out)
}

/// Pump-on instants of the timer over `days`.
pub fn timer_events(schedule: &Schedule, days: impl IntoIterator<Item = i64>) -> Vec<SimTime> {
    days.into_iter()
        .flat_map(|d| {
            (schedule.window.start_min..schedule.window.end_min)
                .map(move |c| SimTime::at(d, c))
                .filter(|&t| timer_tick(schedule, t) == PumpCommand::On)
        })
        .collect()
}

/// Outcome of a still capture of one plant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Capture {
    Measured(Morphometry),
    /// Bad frame; the sample is dropped from the averages.
    Skipped,
}

pub(crate) struct Pipeline<'a> {
    pub model: &'a PlantModel,
    pub camera: &'a CameraConfig,
    pub vision: &'a VisionConfig,
    pub seed: u64,
}

impl<'a> Pipeline<'a> {
    pub fn new(cfg: &'a Config) -> Self {
        Pipeline {
            model: &cfg.plant,
            camera: &cfg.camera,
            vision: &cfg.vision,
            seed: cfg.seed,
        }
    }

    pub fn frame_at(&self, plant_id: usize, plant: &PlantState, distance_cm: f64) -> Result<Frame> {
        let noise = frame_noise_seed(self.seed, plant_id, plant.time);
        Ok(render(self.model, plant, self.camera, distance_cm, noise)?.0)
    }

    /// Render and measure at an explicit distance.
    pub fn measure_at(
        &self,
        plant_id: usize,
        plant: &PlantState,
        distance_cm: f64,
    ) -> Result<Morphometry> {
        analyze(
            &self.frame_at(plant_id, plant, distance_cm)?,
            self.camera,
            self.vision,
        )
    }

    /// Still capture at the age-scheduled distance. Frames with no
    /// detectable plant become [`Capture::Skipped`]; other errors propagate.
    pub fn capture(&self, plant_id: usize, plant: &PlantState) -> Result<Capture> {
        let distance = capture_distance(plant.age_days())?;
        match self.measure_at(plant_id, plant, distance) {
            Ok(m) => Ok(Capture::Measured(m)),
            Err(Error::NoPlantDetected { .. }) => Ok(Capture::Skipped),
            Err(e) => Err(e),
        }
    }

    pub fn capture_batch(
        &self,
        exec: Execution,
        items: &[(usize, PlantState)],
    ) -> Result<Vec<Capture>> {
        exec.try_map(items, |(id, p)| self.capture(*id, p))
    }
}

pub(crate) fn capture_instants(every_days: i64, last_day: i64, clock: i64) -> Vec<SimTime> {
    (0..=last_day)
        .step_by(every_days.max(1) as usize)
        .map(|d| SimTime::at(d, clock))
        .collect()
}
