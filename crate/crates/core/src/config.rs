//! Flat `section.key = value` configuration.
//!
//! Every key has a default; an empty document yields [`Config::default`].
//! `#` starts a comment. Keys may appear in any order but only once.
//! [`Config::dump`] writes the full key set and re-parses to an equal
//! value.

use std::fmt::Write as _;

use crate::control::{Schedule, SpaController, PUMP_ON_MIN};
use crate::growth::{DemandProfile, EcBand, PlantModel};
use crate::ledger::{calibrate_flow, PumpModel, Regime};
use crate::render::CameraConfig;
use crate::time::{format_clock, parse_clock, DayWindow};
use crate::vision::VisionConfig;
use crate::{Error, Result};

/// Inclusive day range under one irrigation regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeSpan {
    pub first_day: i64,
    pub last_day: i64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemandConfig {
    pub window_start: i64,
    pub window_end: i64,
    pub shape: f64,
    /// Half-width of the uniform day-to-day weather factor on peak demand.
    pub daily_variation: f64,
    /// Peak loss rate (1/min) for the greenhouse weather used by the growth
    /// and comparison experiments.
    pub greenhouse_peak_loss_per_min: f64,
    /// Peak loss rate (1/min) of the single hot day replayed by `monitor`.
    pub monitor_peak_loss_per_min: f64,
}

impl Default for DemandConfig {
    fn default() -> Self {
        DemandConfig {
            window_start: 8 * 60,
            window_end: 17 * 60,
            shape: 4.0,
            daily_variation: 0.15,
            greenhouse_peak_loss_per_min: 0.033,
            monitor_peak_loss_per_min: 0.0033,
        }
    }
}

impl DemandConfig {
    pub fn window(&self) -> Result<DayWindow> {
        DayWindow::new(self.window_start, self.window_end)
    }

    pub fn greenhouse(&self) -> Result<DemandProfile> {
        DemandProfile::new(
            self.window()?,
            self.greenhouse_peak_loss_per_min,
            self.shape,
        )
    }

    pub fn monitor_day(&self) -> Result<DemandProfile> {
        DemandProfile::new(self.window()?, self.monitor_peak_loss_per_min, self.shape)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleConfig {
    pub window_start: i64,
    pub window_end: i64,
    pub timer_period_min: i64,
    pub wilt_threshold: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            window_start: 8 * 60,
            window_end: 17 * 60,
            timer_period_min: 30,
            wilt_threshold: 0.02,
        }
    }
}

impl ScheduleConfig {
    pub fn schedule(&self, sample_interval_min: i64) -> Result<Schedule> {
        let s = Schedule {
            sample_interval_min,
            window: DayWindow::new(self.window_start, self.window_end)?,
            timer_period_min: self.timer_period_min,
            timer_on_min: PUMP_ON_MIN,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn controller(&self, sample_interval_min: i64) -> Result<SpaController> {
        Ok(SpaController {
            wilt_threshold: self.wilt_threshold,
            schedule: self.schedule(sample_interval_min)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PumpConfig {
    /// Explicit flow; `None` calibrates it from the timer schedule.
    pub flow_l_per_min: Option<f64>,
    pub calibration_l_per_day: f64,
}

impl Default for PumpConfig {
    fn default() -> Self {
        PumpConfig {
            flow_l_per_min: None,
            calibration_l_per_day: 101.6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthExperimentConfig {
    pub group_size: usize,
    pub bands: Vec<EcBand>,
    pub capture_every_days: i64,
    pub last_capture_day: i64,
    pub capture_clock: i64,
    pub spacing_cm: f64,
}

impl Default for GrowthExperimentConfig {
    fn default() -> Self {
        GrowthExperimentConfig {
            group_size: 20,
            bands: EcBand::ALL.to_vec(),
            capture_every_days: 3,
            last_capture_day: 42,
            capture_clock: 15 * 60,
            spacing_cm: 40.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorConfig {
    pub band: EcBand,
    pub start_day: i64,
    pub start_clock: i64,
    pub samples: usize,
    pub sample_interval_min: i64,
    pub camera_distance_cm: f64,
    pub demand_scale: f64,
    pub expected_event_minute: i64,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        MonitorConfig {
            band: EcBand::Normal,
            start_day: 35,
            start_clock: 8 * 60,
            samples: 26,
            sample_interval_min: 15,
            camera_distance_cm: 90.0,
            demand_scale: 1.0,
            expected_event_minute: 255,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    pub population: usize,
    pub band: EcBand,
    pub timeline: Vec<RegimeSpan>,
    pub sample_interval_min: i64,
    pub camera_distance_cm: f64,
    pub capture_every_days: i64,
    pub capture_clock: i64,
    pub demand_scale: f64,
    pub min_savings: f64,
    pub growth_tolerance: f64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            population: 60,
            band: EcBand::Normal,
            timeline: vec![
                RegimeSpan {
                    first_day: 0,
                    last_day: 29,
                    regime: Regime::Timer,
                },
                RegimeSpan {
                    first_day: 30,
                    last_day: 43,
                    regime: Regime::Auto,
                },
                RegimeSpan {
                    first_day: 44,
                    last_day: 48,
                    regime: Regime::Timer,
                },
            ],
            sample_interval_min: 30,
            camera_distance_cm: 90.0,
            capture_every_days: 2,
            capture_clock: 8 * 60,
            demand_scale: 1.0,
            min_savings: 0.80,
            growth_tolerance: 0.10,
        }
    }
}

impl CompareConfig {
    pub fn regime_on(&self, day: i64) -> Option<Regime> {
        self.timeline
            .iter()
            .find(|s| (s.first_day..=s.last_day).contains(&day))
            .map(|s| s.regime)
    }

    pub fn total_days(&self) -> i64 {
        self.timeline.last().map_or(0, |s| s.last_day + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    pub seed: u64,
    pub plant: PlantModel,
    pub demand: DemandConfig,
    pub camera: CameraConfig,
    pub vision: VisionConfig,
    pub schedule: ScheduleConfig,
    pub pump: PumpConfig,
    pub growth_exp: GrowthExperimentConfig,
    pub monitor: MonitorConfig,
    pub compare: CompareConfig,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    msg: format!("expected `section.key = value`, got `{line}`"),
                });
            };
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            if !key.contains('.') || key.contains(char::is_whitespace) {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    msg: format!("malformed key `{key}`"),
                });
            }
            let Some(spec) = KEYS.iter().find(|k| k.name == key) else {
                return Err(Error::UnknownKey {
                    key: key.to_string(),
                    line: line_no,
                });
            };
            if seen.contains(&spec.name) {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            seen.push(spec.name);
            (spec.set)(&mut cfg, value).map_err(|msg| Error::ConfigValue {
                key: key.to_string(),
                msg,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Config> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Config::parse(&text)
    }

    /// The full key set in `section.key = value` form.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut section = "";
        for k in KEYS {
            let s = k.name.split('.').next().unwrap_or("");
            if s != section {
                if !section.is_empty() {
                    out.push('\n');
                }
                let _ = writeln!(out, "# {s}");
                section = s;
            }
            let _ = writeln!(out, "{} = {}", k.name, (k.get)(self));
        }
        out
    }

    /// Cross-field checks that single-key parsing cannot do.
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: String| Error::ConfigValue {
            key: key.to_string(),
            msg,
        };
        self.plant
            .validate()
            .map_err(|e| bad("growth", e.to_string()))?;
        if self.plant.lag_min > self.plant.lag_max {
            return Err(bad("wilt.lag_min", "must not exceed wilt.lag_max".into()));
        }
        self.demand
            .window()
            .map_err(|e| bad("demand.window_start", e.to_string()))?;
        self.schedule
            .schedule(self.compare.sample_interval_min)
            .map_err(|e| bad("schedule.window_start", e.to_string()))?;

        let tl = &self.compare.timeline;
        if tl.is_empty() {
            return Err(bad("compare.timeline", "timeline is empty".into()));
        }
        if tl[0].first_day != 0 {
            return Err(bad(
                "compare.timeline",
                "timeline must start at day 0".into(),
            ));
        }
        for w in tl.windows(2) {
            if w[1].first_day != w[0].last_day + 1 {
                return Err(bad(
                    "compare.timeline",
                    format!(
                        "day ranges must be contiguous: {}-{} then {}-{}",
                        w[0].first_day, w[0].last_day, w[1].first_day, w[1].last_day
                    ),
                ));
            }
        }
        if let Some(s) = tl.iter().find(|s| s.last_day < s.first_day) {
            return Err(bad(
                "compare.timeline",
                format!("empty day range {}-{}", s.first_day, s.last_day),
            ));
        }
        if self.monitor.start_clock >= 24 * 60 {
            return Err(bad("monitor.start_clock", "must be before 24:00".into()));
        }
        if self.growth_exp.capture_clock >= 24 * 60 {
            return Err(bad(
                "growth_exp.capture_clock",
                "must be before 24:00".into(),
            ));
        }
        if self.compare.capture_clock >= 24 * 60 {
            return Err(bad("compare.capture_clock", "must be before 24:00".into()));
        }
        Ok(())
    }

    pub fn pump_model(&self) -> Result<PumpModel> {
        match self.pump.flow_l_per_min {
            Some(f) => PumpModel::new(f),
            None => {
                let sched = self.schedule.schedule(self.compare.sample_interval_min)?;
                calibrate_flow(
                    self.pump.calibration_l_per_day,
                    sched.timer_activations_per_day(),
                )
            }
        }
    }
}

struct Key {
    name: &'static str,
    get: fn(&Config) -> String,
    set: fn(&mut Config, &str) -> std::result::Result<(), String>,
}

type ParseResult<T> = std::result::Result<T, String>;

fn parse_f64(v: &str) -> ParseResult<f64> {
    let x: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    if !x.is_finite() {
        return Err(format!("`{v}` is not finite"));
    }
    Ok(x)
}

fn positive(v: &str) -> ParseResult<f64> {
    let x = parse_f64(v)?;
    if x <= 0.0 {
        return Err(format!("must be > 0, got {x}"));
    }
    Ok(x)
}

fn non_negative(v: &str) -> ParseResult<f64> {
    let x = parse_f64(v)?;
    if x < 0.0 {
        return Err(format!("must be >= 0, got {x}"));
    }
    Ok(x)
}

fn fraction(v: &str) -> ParseResult<f64> {
    let x = parse_f64(v)?;
    if !(0.0..1.0).contains(&x) {
        return Err(format!("must be in [0, 1), got {x}"));
    }
    Ok(x)
}

fn int<T: std::str::FromStr>(v: &str) -> ParseResult<T> {
    v.parse()
        .map_err(|_| format!("`{v}` is not a valid integer"))
}

fn positive_int<T: std::str::FromStr + PartialOrd + Default>(v: &str) -> ParseResult<T> {
    let x: T = int(v)?;
    if x <= T::default() {
        return Err(format!("must be > 0, got {v}"));
    }
    Ok(x)
}

fn clock(v: &str) -> ParseResult<i64> {
    parse_clock(v).ok_or_else(|| format!("`{v}` is not a HH:MM time"))
}

fn rgb(v: &str) -> ParseResult<[u8; 3]> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("`{v}` is not an R,G,B triple"));
    }
    let mut out = [0u8; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .parse()
            .map_err(|_| format!("`{p}` is not a 0-255 channel value"))?;
    }
    Ok(out)
}

fn fmt_rgb(c: [u8; 3]) -> String {
    format!("{},{},{}", c[0], c[1], c[2])
}

fn bands(v: &str) -> ParseResult<Vec<EcBand>> {
    let out: Vec<EcBand> = v
        .split(',')
        .map(|b| b.parse())
        .collect::<std::result::Result<_, _>>()?;
    if out.is_empty() {
        return Err("at least one group is required".into());
    }
    Ok(out)
}

fn fmt_bands(b: &[EcBand]) -> String {
    b.iter().map(|b| b.label()).collect::<Vec<_>>().join(",")
}

fn timeline(v: &str) -> ParseResult<Vec<RegimeSpan>> {
    v.split(',')
        .map(|part| {
            let (range, regime) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| format!("`{part}` is not `first-last:regime`"))?;
            let (a, b) = range
                .split_once('-')
                .ok_or_else(|| format!("`{range}` is not a `first-last` day range"))?;
            Ok(RegimeSpan {
                first_day: int(a.trim())?,
                last_day: int(b.trim())?,
                regime: regime.parse()?,
            })
        })
        .collect()
}

fn fmt_timeline(t: &[RegimeSpan]) -> String {
    t.iter()
        .map(|s| format!("{}-{}:{}", s.first_day, s.last_day, s.regime))
        .collect::<Vec<_>>()
        .join(",")
}

fn flow(v: &str) -> ParseResult<Option<f64>> {
    if v.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        positive(v).map(Some)
    }
}

fn fmt_flow(f: Option<f64>) -> String {
    f.map_or_else(|| "auto".to_string(), |x| x.to_string())
}

fn show<T: ToString>(x: T) -> String {
    x.to_string()
}

macro_rules! key {
    ($name:literal, $($field:ident).+, $parse:expr) => {
        key!($name, $($field).+, $parse, show)
    };
    ($name:literal, $($field:ident).+, $parse:expr, $fmt:expr) => {
        Key {
            name: $name,
            get: |c| ($fmt)(c.$($field).+.clone()),
            set: |c, v| {
                c.$($field).+ = ($parse)(v)?;
                Ok(())
            },
        }
    };
}

static KEYS: &[Key] = &[
    key!("run.seed", seed, int::<u64>),
    key!(
        "growth.seedling_height_cm",
        plant.seedling_height_cm,
        positive
    ),
    key!(
        "growth.seedling_width_cm",
        plant.seedling_width_cm,
        positive
    ),
    key!(
        "growth.rate_under_per_day",
        plant.rate_under_per_day,
        positive
    ),
    key!(
        "growth.rate_normal_per_day",
        plant.rate_normal_per_day,
        positive
    ),
    key!(
        "growth.rate_over_per_day",
        plant.rate_over_per_day,
        positive
    ),
    key!("growth.vigor_jitter", plant.vigor_jitter, fraction),
    key!("growth.stress_coupling", plant.stress_coupling, fraction),
    key!("wilt.max_shrink", plant.max_shrink, fraction),
    key!("wilt.recovery_tau_min", plant.recovery_tau_min, positive),
    key!(
        "wilt.recovery_duration_min",
        plant.recovery_duration_min,
        positive_int::<i64>
    ),
    key!("wilt.lag_min", plant.lag_min, int::<u32>),
    key!("wilt.lag_max", plant.lag_max, int::<u32>),
    key!(
        "demand.window_start",
        demand.window_start,
        clock,
        format_clock
    ),
    key!("demand.window_end", demand.window_end, clock, format_clock),
    key!("demand.shape", demand.shape, non_negative),
    key!("demand.daily_variation", demand.daily_variation, fraction),
    key!(
        "demand.greenhouse_peak_loss_per_min",
        demand.greenhouse_peak_loss_per_min,
        non_negative
    ),
    key!(
        "demand.monitor_peak_loss_per_min",
        demand.monitor_peak_loss_per_min,
        non_negative
    ),
    key!("camera.focal_px", camera.focal_px, positive),
    key!("camera.background", camera.background, rgb, fmt_rgb),
    key!("camera.plant_color", camera.plant_color, rgb, fmt_rgb),
    key!("camera.noise_amplitude", camera.noise_amplitude, int::<u8>),
    key!("vision.red_margin", vision.red_margin, int::<u8>),
    key!(
        "vision.min_plant_pixels",
        vision.min_plant_pixels,
        int::<usize>
    ),
    key!(
        "schedule.window_start",
        schedule.window_start,
        clock,
        format_clock
    ),
    key!(
        "schedule.window_end",
        schedule.window_end,
        clock,
        format_clock
    ),
    key!(
        "schedule.timer_period_min",
        schedule.timer_period_min,
        positive_int::<i64>
    ),
    key!("control.wilt_threshold", schedule.wilt_threshold, fraction),
    key!("pump.flow_l_per_min", pump.flow_l_per_min, flow, fmt_flow),
    key!(
        "pump.calibration_l_per_day",
        pump.calibration_l_per_day,
        positive
    ),
    key!(
        "growth_exp.group_size",
        growth_exp.group_size,
        positive_int::<usize>
    ),
    key!("growth_exp.bands", growth_exp.bands, bands, |b: Vec<
        EcBand,
    >| {
        fmt_bands(&b)
    }),
    key!(
        "growth_exp.capture_every_days",
        growth_exp.capture_every_days,
        positive_int::<i64>
    ),
    key!(
        "growth_exp.last_capture_day",
        growth_exp.last_capture_day,
        int::<i64>
    ),
    key!(
        "growth_exp.capture_clock",
        growth_exp.capture_clock,
        clock,
        format_clock
    ),
    key!("growth_exp.spacing_cm", growth_exp.spacing_cm, positive),
    key!("monitor.band", monitor.band, |v: &str| v.parse::<EcBand>()),
    key!("monitor.start_day", monitor.start_day, int::<i64>),
    key!(
        "monitor.start_clock",
        monitor.start_clock,
        clock,
        format_clock
    ),
    key!("monitor.samples", monitor.samples, positive_int::<usize>),
    key!(
        "monitor.sample_interval_min",
        monitor.sample_interval_min,
        positive_int::<i64>
    ),
    key!(
        "monitor.camera_distance_cm",
        monitor.camera_distance_cm,
        positive
    ),
    key!("monitor.demand_scale", monitor.demand_scale, non_negative),
    key!(
        "monitor.expected_event_minute",
        monitor.expected_event_minute,
        int::<i64>
    ),
    key!(
        "compare.population",
        compare.population,
        positive_int::<usize>
    ),
    key!("compare.band", compare.band, |v: &str| v.parse::<EcBand>()),
    key!("compare.timeline", compare.timeline, timeline, |t: Vec<
        RegimeSpan,
    >| {
        fmt_timeline(&t)
    }),
    key!(
        "compare.sample_interval_min",
        compare.sample_interval_min,
        positive_int::<i64>
    ),
    key!(
        "compare.camera_distance_cm",
        compare.camera_distance_cm,
        positive
    ),
    key!(
        "compare.capture_every_days",
        compare.capture_every_days,
        positive_int::<i64>
    ),
    key!(
        "compare.capture_clock",
        compare.capture_clock,
        clock,
        format_clock
    ),
    key!("compare.demand_scale", compare.demand_scale, non_negative),
    key!("compare.min_savings", compare.min_savings, fraction),
    key!(
        "compare.growth_tolerance",
        compare.growth_tolerance,
        fraction
    ),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_all_defaults() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
        assert_eq!(
            Config::parse("# only a comment\n\n").unwrap(),
            Config::default()
        );
    }

    #[test]
    fn wilt_threshold_key() {
        let c = Config::parse("control.wilt_threshold = 0.02").unwrap();
        assert_eq!(c.schedule.wilt_threshold, 0.02);
        let c = Config::parse("control.wilt_threshold = 0.035 # stricter").unwrap();
        assert_eq!(c.schedule.wilt_threshold, 0.035);
    }

    #[test]
    fn negative_flow_names_the_key() {
        let err = Config::parse("pump.flow_l_per_min = -1").unwrap_err();
        assert!(matches!(&err, Error::ConfigValue { key, .. } if key == "pump.flow_l_per_min"));
        assert!(err.to_string().contains("pump.flow_l_per_min"));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = Config::parse("run.seed = 1\n\nthis is not a pair\n").unwrap_err();
        assert!(matches!(err, Error::ConfigSyntax { line: 3, .. }), "{err}");
        let err = Config::parse("run.seed = 1\nrun.seed = 2\n").unwrap_err();
        assert!(matches!(err, Error::ConfigSyntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = Config::parse("camera.zoom = 2").unwrap_err();
        assert!(matches!(err, Error::UnknownKey { line: 1, .. }));
    }

    #[test]
    fn order_does_not_matter() {
        let a = Config::parse("run.seed = 9\ncamera.focal_px = 500\n").unwrap();
        let b = Config::parse("camera.focal_px = 500\nrun.seed = 9\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, 9);
    }

    #[test]
    fn dump_round_trips() {
        let d = Config::default();
        assert_eq!(Config::parse(&d.dump()).unwrap(), d);

        let mut c = Config {
            seed: 77,
            ..Config::default()
        };
        c.pump.flow_l_per_min = Some(1.25);
        c.growth_exp.bands = vec![EcBand::Normal, EcBand::Normal];
        c.demand.monitor_peak_loss_per_min = 0.0017312345;
        assert_eq!(Config::parse(&c.dump()).unwrap(), c);
    }

    #[test]
    fn defaults_match_documented_constants() {
        let c = Config::default();
        assert_eq!(c.plant.max_shrink, 0.10);
        assert_eq!(c.plant.recovery_tau_min, 20.0);
        assert_eq!((c.plant.lag_min, c.plant.lag_max), (10, 15));
        assert_eq!(c.plant.vigor_jitter, 0.05);
        assert_eq!(c.camera.focal_px, 480.0);
        assert_eq!(c.camera.background, [255, 0, 0]);
        assert_eq!(c.camera.plant_color, [0, 160, 0]);
        assert_eq!(c.vision.red_margin, 60);
        assert_eq!(c.vision.min_plant_pixels, 25);
        assert_eq!(c.schedule.wilt_threshold, 0.02);
        assert_eq!(c.schedule.timer_period_min, 30);
        assert_eq!(c.monitor.sample_interval_min, 15);
        assert_eq!(c.compare.sample_interval_min, 30);
        assert_eq!(c.compare.population, 60);
        assert_eq!(c.growth_exp.group_size, 20);
        let flow = c.pump_model().unwrap().flow_l_per_min;
        assert!((flow - 101.6 / 54.0).abs() < 1e-12);
    }

    #[test]
    fn timeline_gaps_are_config_errors() {
        let err = Config::parse("compare.timeline = 0-29:timer,31-43:auto").unwrap_err();
        assert!(
            matches!(&err, Error::ConfigValue { key, .. } if key == "compare.timeline"),
            "{err}"
        );
        let err = Config::parse("compare.timeline = 1-29:timer").unwrap_err();
        assert!(matches!(err, Error::ConfigValue { .. }));
        let c = Config::parse("compare.timeline = 0-9:auto, 10-19:timer").unwrap();
        assert_eq!(c.compare.regime_on(12), Some(Regime::Timer));
        assert_eq!(c.compare.total_days(), 20);
    }

    #[test]
    fn value_errors() {
        assert!(Config::parse("camera.background = 255,0").is_err());
        assert!(Config::parse("demand.window_start = 25:00").is_err());
        assert!(Config::parse("growth_exp.bands = under,huge").is_err());
        assert!(Config::parse("wilt.lag_min = 20").is_err());
        assert!(Config::parse("demand.window_start = 18:00").is_err());
        assert!(Config::parse("growth.vigor_jitter = 1.5").is_err());
    }
}
