//! Plant growth and canopy turgor.
//!
//! Height and turgid canopy width grow exponentially at a rate set by the
//! nutrient (EC) band, scaled by a per-plant vigor factor and slowed by water
//! stress. Turgor decays first-order under the diurnal demand profile; after
//! an irrigation and a 10-15 minute lag it recovers toward 1 with a fixed
//! time constant. The visible canopy width shrinks with lost turgor.
//!
//! All integration is done in 1-minute sub-steps so that any split of an
//! interval into shorter `advance` calls gives bit-identical results.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::time::{DayWindow, SimTime, MINUTES_PER_DAY};
use crate::{Error, Result};

/// Nutrient solution concentration class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EcBand {
    Under,
    Normal,
    Over,
}

impl EcBand {
    pub const ALL: [EcBand; 3] = [EcBand::Under, EcBand::Normal, EcBand::Over];

    /// Electrical conductivity range of the solution, in mS/cm.
    pub fn ec_range(self) -> (f64, f64) {
        match self {
            EcBand::Under => (1.0, 1.5),
            EcBand::Normal => (2.5, 5.0),
            EcBand::Over => (10.0, 12.5),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EcBand::Under => "under",
            EcBand::Normal => "normal",
            EcBand::Over => "over",
        }
    }
}

impl fmt::Display for EcBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for EcBand {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "under" => Ok(EcBand::Under),
            "normal" => Ok(EcBand::Normal),
            "over" => Ok(EcBand::Over),
            other => Err(format!(
                "unknown EC band `{other}` (expected under, normal or over)"
            )),
        }
    }
}

/// Diurnal transpiration demand, expressed as turgor loss per minute.
///
/// Inside the window the rate is `peak · sin(π·x)^shape` where `x` is the
/// fractional position of the minute's midpoint in the window; outside it
/// is zero. `shape = 0` gives a flat rate across the whole window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandProfile {
    pub window: DayWindow,
    pub peak_loss_per_min: f64,
    pub shape: f64,
}

impl DemandProfile {
    pub fn new(window: DayWindow, peak_loss_per_min: f64, shape: f64) -> Result<Self> {
        if !(peak_loss_per_min >= 0.0 && peak_loss_per_min.is_finite()) {
            return Err(Error::invalid(format!(
                "peak loss rate must be finite and >= 0, got {peak_loss_per_min}"
            )));
        }
        if !(shape >= 0.0 && shape.is_finite()) {
            return Err(Error::invalid(format!(
                "demand shape must be >= 0, got {shape}"
            )));
        }
        Ok(DemandProfile {
            window,
            peak_loss_per_min,
            shape,
        })
    }

    pub fn none() -> Self {
        DemandProfile {
            window: DayWindow::DAYTIME,
            peak_loss_per_min: 0.0,
            shape: 1.0,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        DemandProfile {
            peak_loss_per_min: self.peak_loss_per_min * factor,
            ..*self
        }
    }

    /// Turgor loss rate (1/min) during the minute starting at `clock_min`.
    pub fn loss_rate(&self, clock_min: i64) -> f64 {
        if self.peak_loss_per_min == 0.0 || !self.window.contains(clock_min) {
            return 0.0;
        }
        let x =
            (clock_min as f64 + 0.5 - self.window.start_min as f64) / self.window.len_min() as f64;
        let s = (std::f64::consts::PI * x).sin();
        if self.shape == 0.0 {
            self.peak_loss_per_min
        } else {
            self.peak_loss_per_min * s.powf(self.shape)
        }
    }
}

/// Pending or active turgor recovery after an irrigation.
///
/// Turgor loss is suppressed and turgor relaxes toward 1 while
/// `start <= t < end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recovery {
    pub start: SimTime,
    pub end: SimTime,
}

impl Recovery {
    pub fn is_active(&self, t: SimTime) -> bool {
        self.start <= t && t < self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantState {
    /// Current simulation time; also the plant's age since transplanting.
    pub time: SimTime,
    pub height_cm: f64,
    /// Canopy width at full turgor.
    pub turgid_width_cm: f64,
    /// Turgor fraction in `[0, 1]`.
    pub turgor: f64,
    pub band: EcBand,
    /// Per-plant multiplier on the band growth rate.
    pub vigor: f64,
    pub recovery: Option<Recovery>,
}

impl PlantState {
    pub fn age_days(&self) -> f64 {
        self.time.age_days()
    }
}

/// Calibration constants of the plant model.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantModel {
    pub seedling_height_cm: f64,
    pub seedling_width_cm: f64,
    pub rate_under_per_day: f64,
    pub rate_normal_per_day: f64,
    pub rate_over_per_day: f64,
    /// Half-width of the uniform per-plant vigor spread (0.05 = ±5%).
    pub vigor_jitter: f64,
    /// Fractional growth slowdown at zero turgor; growth is multiplied by
    /// `1 - stress_coupling · (1 - turgor)`.
    pub stress_coupling: f64,
    /// Maximum fractional canopy shrink at zero turgor.
    pub max_shrink: f64,
    pub recovery_tau_min: f64,
    pub recovery_duration_min: i64,
    pub lag_min: u32,
    pub lag_max: u32,
}

impl Default for PlantModel {
    fn default() -> Self {
        PlantModel {
            seedling_height_cm: 15.0,
            seedling_width_cm: 4.5,
            rate_under_per_day: 0.025,
            rate_normal_per_day: 0.039,
            rate_over_per_day: 0.047,
            vigor_jitter: 0.05,
            stress_coupling: 0.3,
            max_shrink: 0.10,
            recovery_tau_min: 20.0,
            recovery_duration_min: 90,
            lag_min: 10,
            lag_max: 15,
        }
    }
}

impl PlantModel {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("seedling_height_cm", self.seedling_height_cm),
            ("seedling_width_cm", self.seedling_width_cm),
            ("rate_under_per_day", self.rate_under_per_day),
            ("rate_normal_per_day", self.rate_normal_per_day),
            ("rate_over_per_day", self.rate_over_per_day),
            ("recovery_tau_min", self.recovery_tau_min),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        let fractions = [
            ("vigor_jitter", self.vigor_jitter),
            ("stress_coupling", self.stress_coupling),
            ("max_shrink", self.max_shrink),
        ];
        for (name, v) in fractions {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::invalid(format!("{name} must be in [0, 1), got {v}")));
            }
        }
        if self.recovery_duration_min <= 0 {
            return Err(Error::invalid("recovery_duration_min must be > 0"));
        }
        if self.lag_min > self.lag_max {
            return Err(Error::invalid("lag_min must not exceed lag_max"));
        }
        Ok(())
    }

    pub fn rate_per_day(&self, band: EcBand) -> f64 {
        match band {
            EcBand::Under => self.rate_under_per_day,
            EcBand::Normal => self.rate_normal_per_day,
            EcBand::Over => self.rate_over_per_day,
        }
    }

    /// A fully turgid seedling at transplant time (t = 0).
    pub fn seedling(&self, band: EcBand, vigor: f64) -> PlantState {
        PlantState {
            time: SimTime(0),
            height_cm: self.seedling_height_cm,
            turgid_width_cm: self.seedling_width_cm,
            turgor: 1.0,
            band,
            vigor,
            recovery: None,
        }
    }

    pub fn draw_vigor<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.vigor_jitter == 0.0 {
            1.0
        } else {
            1.0 + rng.random_range(-self.vigor_jitter..=self.vigor_jitter)
        }
    }

    pub fn draw_lag<R: Rng>(&self, rng: &mut R) -> u32 {
        rng.random_range(self.lag_min..=self.lag_max)
    }

    /// Advances `state` by `dt_min` minutes under `demand`.
    pub fn advance(
        &self,
        state: &PlantState,
        dt_min: i64,
        demand: &DemandProfile,
    ) -> Result<PlantState> {
        if dt_min <= 0 {
            return Err(Error::invalid(format!(
                "time step must be > 0 minutes, got {dt_min}"
            )));
        }
        let mut s = *state;
        let base_rate = self.rate_per_day(s.band) * s.vigor / MINUTES_PER_DAY as f64;
        let recover = (-1.0 / self.recovery_tau_min).exp();
        for _ in 0..dt_min {
            let stress = 1.0 - self.stress_coupling * (1.0 - s.turgor);
            let g = (base_rate * stress).exp();
            s.height_cm *= g;
            s.turgid_width_cm *= g;

            match s.recovery {
                Some(r) if r.is_active(s.time) => {
                    s.turgor = 1.0 - (1.0 - s.turgor) * recover;
                }
                _ => {
                    let loss = demand.loss_rate(s.time.clock());
                    if loss > 0.0 {
                        s.turgor *= (-loss).exp();
                    }
                }
            }
            s.time = s.time.plus(1);
            if matches!(s.recovery, Some(r) if s.time >= r.end) {
                s.recovery = None;
            }
        }
        Ok(s)
    }

    /// Records an irrigation at the plant's current time. Recovery starts
    /// `lag_min` minutes later and lasts `recovery_duration_min`.
    ///
    /// While a recovery is already running it keeps running and its end is
    /// pushed out; a recovery that is still pending is replaced.
    pub fn apply_irrigation(&self, state: &PlantState, lag_min: u32) -> PlantState {
        let now = state.time;
        let start = now.plus(lag_min as i64);
        let end = start.plus(self.recovery_duration_min);
        let recovery = match state.recovery {
            Some(r) if r.is_active(now) => Recovery {
                start: r.start,
                end: r.end.max(end),
            },
            _ => Recovery { start, end },
        };
        PlantState {
            recovery: Some(recovery),
            ..*state
        }
    }

    /// Visible canopy width after turgor-driven shrink.
    pub fn effective_width(&self, state: &PlantState) -> f64 {
        effective_width(state.turgid_width_cm, state.turgor, self.max_shrink)
    }
}

pub fn effective_width(turgid_width_cm: f64, turgor: f64, max_shrink: f64) -> f64 {
    turgid_width_cm * (1.0 - max_shrink * (1.0 - turgor))
}
