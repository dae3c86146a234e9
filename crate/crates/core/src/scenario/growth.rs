use std::path::Path;

use super::output::{checks_text, ensure_dir, write_csv, write_text, Check};
use super::{capture_instants, timer_events, Capture, Pipeline, PlantSpec, Weather};
use crate::config::Config;
use crate::exec::Execution;
use crate::growth::{EcBand, PlantState};
use crate::render::{capture_distance, overlap_flag};
use crate::time::SimTime;
use crate::vision::Morphometry;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupMean {
    pub day: i64,
    pub distance_cm: f64,
    pub group: usize,
    pub band: EcBand,
    pub plants_measured: usize,
    pub mean_height_cm: f64,
    pub true_mean_height_cm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantCapture {
    pub day: i64,
    pub plant: usize,
    pub group: usize,
    pub band: EcBand,
    pub true_height_cm: f64,
    pub measured: Option<Morphometry>,
}

#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub bands: Vec<EcBand>,
    pub capture_days: Vec<i64>,
    /// First scheduled capture day skipped because canopies overlapped.
    pub overlap_day: Option<i64>,
    pub means: Vec<GroupMean>,
    pub plants: Vec<PlantCapture>,
    /// True (model) group mean height at the capture clock of every day.
    pub daily_true_means: Vec<Vec<f64>>,
    pub skipped: usize,
    pub checks: Vec<Check>,
}

impl GrowthReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Measured mean height of `group` on each capture day.
    pub fn series(&self, group: usize) -> Vec<f64> {
        self.means
            .iter()
            .filter(|m| m.group == group)
            .map(|m| m.mean_height_cm)
            .collect()
    }

    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        ensure_dir(dir)?;
        write_csv(
            &dir.join("growth.csv"),
            &[
                "day",
                "distance_cm",
                "group",
                "band",
                "plants_measured",
                "mean_height_cm",
            ],
            self.means.iter().map(|m| {
                vec![
                    m.day.to_string(),
                    format!("{:.1}", m.distance_cm),
                    m.group.to_string(),
                    m.band.to_string(),
                    m.plants_measured.to_string(),
                    format!("{:.4}", m.mean_height_cm),
                ]
            }),
        )?;
        write_csv(
            &dir.join("growth_plants.csv"),
            &[
                "day",
                "plant",
                "group",
                "band",
                "true_height_cm",
                "height_px",
                "width_px",
                "height_cm",
                "width_cm",
            ],
            self.plants.iter().map(|p| {
                let (hp, wp, hc, wc) = match &p.measured {
                    Some(m) => (
                        m.height_px.to_string(),
                        m.width_px.to_string(),
                        format!("{:.4}", m.height_cm),
                        format!("{:.4}", m.width_cm),
                    ),
                    None => Default::default(),
                };
                vec![
                    p.day.to_string(),
                    p.plant.to_string(),
                    p.group.to_string(),
                    p.band.to_string(),
                    format!("{:.4}", p.true_height_cm),
                    hp,
                    wp,
                    hc,
                    wc,
                ]
            }),
        )?;
        let mut summary = String::from("growth experiment\n");
        summary += &format!(
            "groups: {}\ncapture days: {}\n",
            self.bands
                .iter()
                .map(|b| b.label())
                .collect::<Vec<_>>()
                .join(", "),
            self.capture_days.len()
        );
        match self.overlap_day {
            Some(d) => {
                summary += &format!("individual capture stopped at day {d} (canopy overlap)\n")
            }
            None => summary += "no canopy overlap within the capture schedule\n",
        }
        summary += &format!("skipped samples: {}\n", self.skipped);
        summary += &checks_text(&self.checks);
        write_text(&dir.join("summary.txt"), &summary)
    }
}

fn population(cfg: &Config) -> Vec<(PlantSpec, usize)> {
    let n = cfg.growth_exp.group_size;
    cfg.growth_exp
        .bands
        .iter()
        .enumerate()
        .flat_map(|(g, &band)| {
            (0..n).map(move |i| {
                (
                    PlantSpec {
                        id: g * n + i,
                        band,
                    },
                    g,
                )
            })
        })
        .collect()
}

/// Daily snapshots at the capture clock, days `0..=last_day`, for every
/// plant of the growth experiment (timer-irrigated throughout).
fn daily_states(cfg: &Config, exec: Execution, last_day: i64) -> Result<Vec<Vec<PlantState>>> {
    let g = &cfg.growth_exp;
    let schedule = cfg.schedule.schedule(cfg.compare.sample_interval_min)?;
    let weather = Weather::new(
        cfg.seed,
        cfg.demand.greenhouse()?.scaled(cfg.compare.demand_scale),
        cfg.demand.daily_variation,
        last_day + 1,
    );
    let events = timer_events(&schedule, 0..=last_day);
    let record = capture_instants(1, last_day, g.capture_clock);
    let end = *record.last().unwrap_or(&SimTime(0));
    let plants = population(cfg);
    exec.try_map(&plants, |(spec, _)| {
        super::simulate_plant(&cfg.plant, *spec, cfg.seed, &weather, &events, &record, end)
    })
}

/// First day (at the capture clock) on which any canopy is wider than the
/// pot spacing, searching up to `max_day`.
pub fn first_overlap_day(cfg: &Config, exec: Execution, max_day: i64) -> Result<Option<i64>> {
    let states = daily_states(cfg, exec, max_day)?;
    for day in 0..=max_day {
        let group: Vec<PlantState> = states.iter().map(|p| p[day as usize]).collect();
        if overlap_flag(&cfg.plant, &group, cfg.growth_exp.spacing_cm)? {
            return Ok(Some(day));
        }
    }
    Ok(None)
}

/// Height development of equal groups under different nutrient bands,
/// measured every few days through the render, segment and measure path.
pub fn run_growth_experiment(cfg: &Config, exec: Execution) -> Result<GrowthReport> {
    let g = &cfg.growth_exp;
    let last_day = g.last_capture_day.max(0);
    let states = daily_states(cfg, exec, last_day)?;
    let plants = population(cfg);
    let groups = g.bands.len();

    let daily_true_means: Vec<Vec<f64>> = (0..=last_day as usize)
        .map(|d| {
            (0..groups)
                .map(|grp| {
                    let hs: Vec<f64> = plants
                        .iter()
                        .zip(&states)
                        .filter(|((_, pg), _)| *pg == grp)
                        .map(|(_, s)| s[d].height_cm)
                        .collect();
                    hs.iter().sum::<f64>() / hs.len() as f64
                })
                .collect()
        })
        .collect();

    let mut capture_days = Vec::new();
    let mut overlap_day = None;
    for day in (0..=last_day).step_by(g.capture_every_days as usize) {
        let group: Vec<PlantState> = states.iter().map(|p| p[day as usize]).collect();
        if overlap_flag(&cfg.plant, &group, g.spacing_cm)? {
            overlap_day = Some(day);
            break;
        }
        capture_days.push(day);
    }

    let pipeline = Pipeline::new(cfg);
    let jobs: Vec<(usize, PlantState)> = capture_days
        .iter()
        .flat_map(|&d| {
            plants
                .iter()
                .zip(&states)
                .map(move |((spec, _), s)| (spec.id, s[d as usize]))
        })
        .collect();
    let captures = pipeline.capture_batch(exec, &jobs)?;

    let mut plant_rows = Vec::with_capacity(jobs.len());
    for (((id, state), cap), k) in jobs.iter().zip(&captures).zip(0..) {
        let (spec, grp) = plants[k % plants.len()];
        debug_assert_eq!(spec.id, *id);
        plant_rows.push(PlantCapture {
            day: state.time.day(),
            plant: *id,
            group: grp,
            band: spec.band,
            true_height_cm: state.height_cm,
            measured: match cap {
                Capture::Measured(m) => Some(*m),
                Capture::Skipped => None,
            },
        });
    }
    let skipped = plant_rows.iter().filter(|p| p.measured.is_none()).count();

    let mut means = Vec::new();
    for &day in &capture_days {
        for (grp, &band) in g.bands.iter().enumerate() {
            let rows: Vec<&PlantCapture> = plant_rows
                .iter()
                .filter(|p| p.day == day && p.group == grp)
                .collect();
            let measured: Vec<f64> = rows
                .iter()
                .filter_map(|p| p.measured.map(|m| m.height_cm))
                .collect();
            let mean = if measured.is_empty() {
                f64::NAN
            } else {
                measured.iter().sum::<f64>() / measured.len() as f64
            };
            means.push(GroupMean {
                day,
                distance_cm: capture_distance(day as f64)?,
                group: grp,
                band,
                plants_measured: measured.len(),
                mean_height_cm: mean,
                true_mean_height_cm: daily_true_means[day as usize][grp],
            });
        }
    }

    let mut report = GrowthReport {
        bands: g.bands.clone(),
        capture_days,
        overlap_day,
        means,
        plants: plant_rows,
        daily_true_means,
        skipped,
        checks: Vec::new(),
    };
    report.checks = growth_checks(&report);
    Ok(report)
}

fn growth_checks(r: &GrowthReport) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut pairs = Vec::new();
    for i in 0..r.bands.len() {
        for j in 0..r.bands.len() {
            if r.bands[i] < r.bands[j] {
                pairs.push((i, j));
            }
        }
    }
    if !pairs.is_empty() {
        let mut violations = Vec::new();
        for &day in &r.capture_days {
            let at = |g: usize| {
                r.means
                    .iter()
                    .find(|m| m.day == day && m.group == g)
                    .map_or(f64::NAN, |m| m.mean_height_cm)
            };
            for &(i, j) in &pairs {
                // NaN compares false, so an empty group counts as a violation.
                if !(at(i) < at(j)) {
                    violations.push(format!("day {day}: {} vs {}", r.bands[i], r.bands[j]));
                }
            }
        }
        checks.push(Check::new(
            "band ordering over > normal > under",
            violations.is_empty(),
            if violations.is_empty() {
                format!("holds on all {} capture days", r.capture_days.len())
            } else {
                violations.join("; ")
            },
        ));
    }

    let mut worst: Option<(usize, usize, f64)> = None;
    for g in 0..r.bands.len() {
        let incs: Vec<f64> = r
            .daily_true_means
            .windows(2)
            .map(|w| w[1][g] - w[0][g])
            .collect();
        for (d, w) in incs.windows(2).enumerate() {
            let drop = w[0] - w[1];
            if drop > 0.0 && worst.is_none_or(|(_, _, x)| drop > x) {
                worst = Some((g, d + 1, drop));
            }
        }
    }
    checks.push(Check::new(
        "daily height increments non-decreasing",
        worst.is_none(),
        match worst {
            None => "every group accelerates day over day".to_string(),
            Some((g, d, x)) => format!("group {g} increment fell by {x:.2e} cm after day {d}"),
        },
    ));
    checks
}
