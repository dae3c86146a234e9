//! Irrigation water accounting.
//!
//! The pump feeds the whole population through one manifold, so volumes are
//! population totals. Per-plant figures are totals divided by the
//! population size.

use std::fmt;
use std::str::FromStr;

use crate::control::{PumpCommand, PUMP_ON_MIN};
use crate::time::SimTime;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpModel {
    pub flow_l_per_min: f64,
}

impl PumpModel {
    pub fn new(flow_l_per_min: f64) -> Result<Self> {
        if !(flow_l_per_min > 0.0 && flow_l_per_min.is_finite()) {
            return Err(Error::invalid(format!(
                "pump flow must be > 0 L/min, got {flow_l_per_min}"
            )));
        }
        Ok(PumpModel { flow_l_per_min })
    }

    pub fn liters_per_activation(&self) -> f64 {
        self.flow_l_per_min * PUMP_ON_MIN as f64
    }
}

/// Flow rate that delivers `target_l_per_day` with `activations_per_day`
/// three-minute activations.
pub fn calibrate_flow(target_l_per_day: f64, activations_per_day: u32) -> Result<PumpModel> {
    if activations_per_day == 0 {
        return Err(Error::invalid(
            "cannot calibrate flow from zero activations per day",
        ));
    }
    if !(target_l_per_day > 0.0) {
        return Err(Error::invalid(format!(
            "target volume must be > 0, got {target_l_per_day}"
        )));
    }
    PumpModel::new(target_l_per_day / (activations_per_day as f64 * PUMP_ON_MIN as f64))
}

/// Fraction of water saved by the automatic regime relative to the timer.
pub fn savings(timer_mean_l_per_day: f64, auto_mean_l_per_day: f64) -> Result<f64> {
    if !(timer_mean_l_per_day > 0.0) {
        return Err(Error::invalid(format!(
            "timer mean must be > 0 L/day, got {timer_mean_l_per_day}"
        )));
    }
    Ok((timer_mean_l_per_day - auto_mean_l_per_day) / timer_mean_l_per_day)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Timer,
    Auto,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Timer => "timer",
            Regime::Auto => "auto",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "timer" => Ok(Regime::Timer),
            "auto" => Ok(Regime::Auto),
            other => Err(format!("unknown regime `{other}` (expected timer or auto)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DailyUsage {
    pub day: i64,
    pub regime: Regime,
    pub liters: f64,
    pub activations: u32,
    /// Whether the simulation covered the whole day.
    pub complete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpEvent {
    pub time: SimTime,
    pub regime: Regime,
    pub liters: f64,
}

#[derive(Debug, Clone, Default)]
pub struct WaterLedger {
    rows: Vec<DailyUsage>,
    events: Vec<PumpEvent>,
    last: Option<SimTime>,
}

impl WaterLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts the row for `day`. Days must be opened in increasing order;
    /// re-opening the current day is a no-op.
    pub fn open_day(&mut self, day: i64, regime: Regime) -> Result<()> {
        match self.rows.last() {
            Some(r) if r.day == day => return Ok(()),
            Some(r) if r.day > day => {
                return Err(Error::TimeRegression {
                    at: SimTime::at(day, 0),
                    last: SimTime::at(r.day, 0),
                })
            }
            _ => {}
        }
        self.rows.push(DailyUsage {
            day,
            regime,
            liters: 0.0,
            activations: 0,
            complete: false,
        });
        Ok(())
    }

    /// Books one controller command. Commands must arrive in time order.
    pub fn accrue(&mut self, command: PumpCommand, now: SimTime, pump: &PumpModel) -> Result<()> {
        if let Some(last) = self.last {
            if now < last {
                return Err(Error::TimeRegression { at: now, last });
            }
        }
        self.last = Some(now);
        if command != PumpCommand::On {
            return Ok(());
        }
        let day = now.day();
        if self.rows.last().map(|r| r.day) != Some(day) {
            let regime = self.rows.last().map_or(Regime::Timer, |r| r.regime);
            self.open_day(day, regime)?;
        }
        let liters = pump.liters_per_activation();
        let row = self.rows.last_mut().expect("row opened above");
        row.liters += liters;
        row.activations += 1;
        self.events.push(PumpEvent {
            time: now,
            regime: row.regime,
            liters,
        });
        Ok(())
    }

    /// Marks every day that ends at or before `end` as complete.
    pub fn finish(&mut self, end: SimTime) {
        for r in &mut self.rows {
            r.complete = SimTime::at(r.day + 1, 0) <= end;
        }
    }

    pub fn rows(&self) -> &[DailyUsage] {
        &self.rows
    }

    pub fn events(&self) -> &[PumpEvent] {
        &self.events
    }

    pub fn total_liters(&self) -> f64 {
        self.rows.iter().map(|r| r.liters).sum()
    }

    pub fn total_activations(&self) -> u32 {
        self.rows.iter().map(|r| r.activations).sum()
    }

    /// Mean litres per complete day under `regime`.
    pub fn mean_per_day(&self, regime: Regime) -> Option<f64> {
        let days: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.regime == regime && r.complete)
            .map(|r| r.liters)
            .collect();
        (!days.is_empty()).then(|| days.iter().sum::<f64>() / days.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{timer_tick, Schedule};
    use proptest::prelude::*;

    #[test]
    fn flow_calibration() {
        // Oracle for the activation count: enumerate the timer over a day.
        let schedule = Schedule::default();
        let n = (0..1440)
            .filter(|&m| timer_tick(&schedule, SimTime(m)) == PumpCommand::On)
            .count() as u32;
        assert_eq!(n, 18);
        let p = calibrate_flow(101.6, n).unwrap();
        assert!((p.flow_l_per_min - 101.6 / 54.0).abs() < 1e-12);
        assert!((p.flow_l_per_min - 1.881).abs() < 5e-4);
        assert_eq!(calibrate_flow(54.0, 18).unwrap().flow_l_per_min, 1.0);
        let p = calibrate_flow(101.7, 18).unwrap();
        assert!((p.flow_l_per_min - 1.883).abs() < 5e-4);
        assert!(calibrate_flow(101.6, 0).is_err());
        assert!(calibrate_flow(0.0, 18).is_err());
    }

    #[test]
    fn single_activation_volume() {
        let p = PumpModel::new(1.881).unwrap();
        let mut l = WaterLedger::new();
        l.open_day(0, Regime::Auto).unwrap();
        l.accrue(PumpCommand::On, SimTime(600), &p).unwrap();
        assert!((l.total_liters() - 5.643).abs() < 1e-9);
    }

    #[test]
    fn full_timer_day() {
        let schedule = Schedule::default();
        let p = calibrate_flow(101.6, 18).unwrap();
        let mut l = WaterLedger::new();
        l.open_day(0, Regime::Timer).unwrap();
        for m in 0..1440 {
            let t = SimTime(m);
            l.accrue(timer_tick(&schedule, t), t, &p).unwrap();
        }
        l.finish(SimTime::at(1, 0));
        assert_eq!(l.rows()[0].activations, 18);
        assert!((l.rows()[0].liters - 101.6).abs() < 0.1);
        assert!((l.mean_per_day(Regime::Timer).unwrap() - 101.6).abs() < 1e-9);
    }

    #[test]
    fn idle_day_is_zero() {
        let p = PumpModel::new(2.0).unwrap();
        let mut l = WaterLedger::new();
        l.open_day(0, Regime::Auto).unwrap();
        for m in (480..1020).step_by(30) {
            l.accrue(PumpCommand::Off, SimTime(m), &p).unwrap();
        }
        l.finish(SimTime::at(1, 0));
        assert_eq!(l.rows()[0].liters, 0.0);
        assert_eq!(l.mean_per_day(Regime::Auto), Some(0.0));
    }

    #[test]
    fn time_regression_is_rejected() {
        let p = PumpModel::new(2.0).unwrap();
        let mut l = WaterLedger::new();
        l.accrue(PumpCommand::Off, SimTime(100), &p).unwrap();
        assert!(matches!(
            l.accrue(PumpCommand::On, SimTime(99), &p),
            Err(Error::TimeRegression { .. })
        ));
    }

    #[test]
    fn partial_days_are_excluded_from_means() {
        let p = PumpModel::new(1.0).unwrap();
        let mut l = WaterLedger::new();
        l.open_day(0, Regime::Auto).unwrap();
        l.accrue(PumpCommand::On, SimTime::at(0, 600), &p).unwrap();
        l.open_day(1, Regime::Auto).unwrap();
        for k in 0..5 {
            l.accrue(PumpCommand::On, SimTime::at(1, 600 + 10 * k), &p)
                .unwrap();
        }
        l.finish(SimTime::at(1, 720));
        assert_eq!(l.mean_per_day(Regime::Auto), Some(3.0));
        assert_eq!(l.mean_per_day(Regime::Timer), None);
    }

    #[test]
    fn savings_examples() {
        assert!((savings(101.6, 17.3).unwrap() - 0.8297).abs() < 5e-5);
        assert_eq!(savings(100.0, 100.0).unwrap(), 0.0);
        assert_eq!(savings(100.0, 0.0).unwrap(), 1.0);
        assert!(savings(0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn savings_is_scale_invariant(t in 1.0f64..500.0, a in 0.0f64..500.0, k in 0.01f64..100.0) {
            let s1 = savings(t, a).unwrap();
            let s2 = savings(t * k, a * k).unwrap();
            prop_assert!((s1 - s2).abs() < 1e-9);
        }

        #[test]
        fn ledger_is_additive(ons in proptest::collection::vec(0i64..(5 * 1440), 0..200), flow in 0.1f64..5.0) {
            let mut times = ons.clone();
            times.sort_unstable();
            let p = PumpModel::new(flow).unwrap();
            let mut l = WaterLedger::new();
            for t in &times {
                l.accrue(PumpCommand::On, SimTime(*t), &p).unwrap();
            }
            let by_rows: f64 = l.rows().iter().map(|r| r.liters).sum();
            let expected = 3.0 * flow * times.len() as f64;
            prop_assert!((by_rows - expected).abs() < 1e-9 * expected.max(1.0));
            prop_assert_eq!(l.total_activations() as usize, times.len());
        }
    }
}
