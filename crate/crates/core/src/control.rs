//! Pump controllers: the wilt-triggered rule and the fixed timer baseline.
//!
//! The wilt rule fires when the canopy has shrunk by more than the
//! threshold relative to the morning reference width *and* is still
//! shrinking since the previous sample:
//!
//! ```text
//! if wilt_degree > 0.02 && previous_width > width { pump on for 3 min }
//! ```
//!
//! The strict gradient conjunct is what stops the rule from firing again on
//! the next sample, once watering has halted the shrink.

use std::fmt;

use crate::time::{format_clock, DayWindow, SimTime};
use crate::{Error, Result};

/// Every pump activation lasts exactly this long.
pub const PUMP_ON_MIN: i64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PumpCommand {
    /// Run the pump for [`PUMP_ON_MIN`] minutes.
    On,
    Off,
    /// Rule not evaluated (reference sample or pump already running).
    Hold,
}

impl PumpCommand {
    pub fn duration_min(self) -> i64 {
        match self {
            PumpCommand::On => PUMP_ON_MIN,
            _ => 0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PumpCommand::On => "ON",
            PumpCommand::Off => "OFF",
            PumpCommand::Hold => "HOLD",
        }
    }
}

impl fmt::Display for PumpCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub sample_interval_min: i64,
    pub window: DayWindow,
    pub timer_period_min: i64,
    pub timer_on_min: i64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            sample_interval_min: 30,
            window: DayWindow::DAYTIME,
            timer_period_min: 30,
            timer_on_min: PUMP_ON_MIN,
        }
    }
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        if self.sample_interval_min <= 0 {
            return Err(Error::invalid("sample interval must be > 0 minutes"));
        }
        if self.timer_period_min <= 0 {
            return Err(Error::invalid("timer period must be > 0 minutes"));
        }
        if self.timer_on_min != PUMP_ON_MIN {
            return Err(Error::invalid(format!(
                "timer on-time must be {PUMP_ON_MIN} minutes, got {}",
                self.timer_on_min
            )));
        }
        Ok(())
    }

    /// True at the in-window instants `start + k · sample_interval`.
    pub fn is_sample_instant(&self, now: SimTime) -> bool {
        let c = now.clock();
        self.window.contains(c) && (c - self.window.start_min) % self.sample_interval_min == 0
    }

    /// Number of timer activations in one full day.
    pub fn timer_activations_per_day(&self) -> u32 {
        let n = (self.window.len_min() + self.timer_period_min - 1) / self.timer_period_min;
        n as u32
    }
}

/// Baseline timer: on for 3 minutes at the start of every period inside the
/// daytime window.
pub fn timer_tick(schedule: &Schedule, now: SimTime) -> PumpCommand {
    let c = now.clock();
    if schedule.window.contains(c)
        && (c - schedule.window.start_min) % schedule.timer_period_min == 0
    {
        PumpCommand::On
    } else {
        PumpCommand::Off
    }
}

/// Memory of the wilt controller for one monitored plant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControllerState {
    pub reference_width_cm: Option<f64>,
    pub previous_width_cm: Option<f64>,
    pub pump_off_deadline: Option<SimTime>,
    pub last_sample_day: Option<i64>,
}

/// Clears the reference and previous widths when `now` falls on a new day,
/// so the next sample re-anchors them.
pub fn reset_daily(state: &ControllerState, now: SimTime) -> ControllerState {
    if state.last_sample_day == Some(now.day()) {
        return *state;
    }
    ControllerState {
        reference_width_cm: None,
        previous_width_cm: None,
        pump_off_deadline: state.pump_off_deadline,
        last_sample_day: Some(now.day()),
    }
}

/// Outcome of one controller sample, including the quantities logged in the
/// monitoring trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaTick {
    pub state: ControllerState,
    pub command: PumpCommand,
    pub wilt_degree: f64,
    /// +1 when the canopy shrank since the previous sample (wilt
    /// increasing), -1 when it widened, 0 when unchanged or first sample.
    pub gradient_sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaController {
    pub wilt_threshold: f64,
    pub schedule: Schedule,
}

impl Default for SpaController {
    fn default() -> Self {
        SpaController {
            wilt_threshold: 0.02,
            schedule: Schedule::default(),
        }
    }
}

impl SpaController {
    pub fn tick(&self, state: &ControllerState, width_cm: f64, now: SimTime) -> Result<SpaTick> {
        let w = self.schedule.window;
        if !w.contains(now.clock()) {
            return Err(Error::OutOfWindow {
                at: now,
                start: format_clock(w.start_min),
                end: format_clock(w.end_min),
            });
        }
        if !(width_cm > 0.0 && width_cm.is_finite()) {
            return Err(Error::invalid(format!(
                "canopy width must be > 0, got {width_cm}"
            )));
        }

        let mut s = reset_daily(state, now);
        let (Some(reference), Some(previous)) = (s.reference_width_cm, s.previous_width_cm) else {
            s.reference_width_cm = Some(width_cm);
            s.previous_width_cm = Some(width_cm);
            return Ok(SpaTick {
                state: s,
                command: PumpCommand::Hold,
                wilt_degree: 0.0,
                gradient_sign: 0,
            });
        };

        let wilt_degree = (reference - width_cm) / reference;
        let gradient_sign = match previous.partial_cmp(&width_cm) {
            Some(std::cmp::Ordering::Greater) => 1,
            Some(std::cmp::Ordering::Less) => -1,
            _ => 0,
        };
        s.previous_width_cm = Some(width_cm);

        let command = if matches!(s.pump_off_deadline, Some(d) if now < d) {
            PumpCommand::Hold
        } else if wilt_degree > self.wilt_threshold && previous > width_cm {
            s.pump_off_deadline = Some(now.plus(PUMP_ON_MIN));
            PumpCommand::On
        } else {
            PumpCommand::Off
        };
        Ok(SpaTick {
            state: s,
            command,
            wilt_degree,
            gradient_sign,
        })
    }
}
