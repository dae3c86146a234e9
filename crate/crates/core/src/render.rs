//! Synthetic camera frames of a single plant in front of a red panel.
//!
//! The plant is a two-ellipse canopy on a stem rectangle, projected with a
//! pinhole model (`focal_px / distance_cm` pixels per cm), centred
//! horizontally with its base on the bottom edge of the frame. A pixel is
//! plant iff its centre lies inside the silhouette (boundary inclusive).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::growth::{PlantModel, PlantState};
use crate::time::SimTime;
use crate::vision::SegmentationMask;
use crate::{Error, Result};

pub const FRAME_W: usize = 640;
pub const FRAME_H: usize = 480;
pub const FRAME_BYTES: usize = FRAME_W * FRAME_H * 3;

pub const FIRST_DISTANCE_CM: f64 = 30.0;
pub const DISTANCE_STEP_CM: f64 = 10.0;
pub const LAST_DISTANCE_CM: f64 = 170.0;
pub const DISTANCE_STEP_DAYS: f64 = 3.0;

/// Camera-to-plant distance used for a still capture at `age_days`.
pub fn capture_distance(age_days: f64) -> Result<f64> {
    if !(age_days >= 0.0) {
        return Err(Error::invalid(format!(
            "plant age must be >= 0 days, got {age_days}"
        )));
    }
    let d = FIRST_DISTANCE_CM + DISTANCE_STEP_CM * (age_days / DISTANCE_STEP_DAYS).floor();
    Ok(d.min(LAST_DISTANCE_CM))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraConfig {
    /// Pixels per (cm of object / cm of distance).
    pub focal_px: f64,
    pub background: [u8; 3],
    pub plant_color: [u8; 3],
    /// Per-channel uniform jitter half-width; 0 renders an exact two-colour
    /// image.
    pub noise_amplitude: u8,
}

impl Default for CameraConfig {
    fn default() -> Self {
        CameraConfig {
            focal_px: 480.0,
            background: [255, 0, 0],
            plant_color: [0, 160, 0],
            noise_amplitude: 0,
        }
    }
}

impl CameraConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.focal_px > 0.0 && self.focal_px.is_finite()) {
            return Err(Error::invalid(format!(
                "focal_px must be > 0, got {}",
                self.focal_px
            )));
        }
        Ok(())
    }

    pub fn px_per_cm(&self, distance_cm: f64) -> f64 {
        self.focal_px / distance_cm
    }
}

/// A 640×480 RGB frame, row-major, 3 bytes per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pixels: Vec<u8>,
    pub distance_cm: f64,
    pub timestamp: SimTime,
}

impl Frame {
    pub fn new(pixels: Vec<u8>, distance_cm: f64, timestamp: SimTime) -> Result<Self> {
        if pixels.len() != FRAME_BYTES {
            return Err(Error::invalid(format!(
                "frame buffer must be {FRAME_BYTES} bytes, got {}",
                pixels.len()
            )));
        }
        Ok(Frame {
            pixels,
            distance_cm,
            timestamp,
        })
    }

    pub fn filled(rgb: [u8; 3]) -> Self {
        let pixels = rgb.iter().copied().cycle().take(FRAME_BYTES).collect();
        Frame {
            pixels,
            distance_cm: 0.0,
            timestamp: SimTime(0),
        }
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn rgb(&self, row: usize, col: usize) -> [u8; 3] {
        let i = (row * FRAME_W + col) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }
}

/// Exact rasterized extents of the drawn silhouette.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundTruth {
    pub height_px: usize,
    pub width_px: usize,
    pub plant_pixel_count: usize,
}

/// Rasterized silhouette: for each row, an inclusive column span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Silhouette {
    spans: Vec<Option<(usize, usize)>>,
}

impl Silhouette {
    pub fn ground_truth(&self) -> GroundTruth {
        let mut rows = self
            .spans
            .iter()
            .enumerate()
            .filter_map(|(r, s)| s.map(|_| r));
        let first = rows.next();
        let last = rows.next_back().or(first);
        let height_px = match (first, last) {
            (Some(a), Some(b)) => b - a + 1,
            _ => 0,
        };
        let lo = self.spans.iter().flatten().map(|s| s.0).min();
        let hi = self.spans.iter().flatten().map(|s| s.1).max();
        let width_px = match (lo, hi) {
            (Some(a), Some(b)) => b - a + 1,
            _ => 0,
        };
        let plant_pixel_count = self.spans.iter().flatten().map(|(a, b)| b - a + 1).sum();
        GroundTruth {
            height_px,
            width_px,
            plant_pixel_count,
        }
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        matches!(self.spans.get(row), Some(Some((a, b))) if (*a..=*b).contains(&col))
    }

    pub fn to_mask(&self) -> SegmentationMask {
        let mut mask = SegmentationMask::empty();
        for (row, span) in self.spans.iter().enumerate() {
            if let Some((a, b)) = *span {
                for col in a..=b {
                    mask.set(row, col, true);
                }
            }
        }
        mask
    }
}

struct Ellipse {
    cy: f64,
    ax: f64,
    ay: f64,
}

impl Ellipse {
    fn half_width_at(&self, y: f64) -> Option<f64> {
        if self.ay <= 0.0 {
            return None;
        }
        let dy = (y - self.cy) / self.ay;
        (dy.abs() <= 1.0).then(|| self.ax * (1.0 - dy * dy).sqrt())
    }
}

/// Rasterizes a plant of the given physical extents seen from
/// `distance_cm`.
pub fn rasterize(
    height_cm: f64,
    width_cm: f64,
    cam: &CameraConfig,
    distance_cm: f64,
) -> Result<Silhouette> {
    cam.validate()?;
    if !(distance_cm > 0.0 && distance_cm.is_finite()) {
        return Err(Error::invalid(format!(
            "camera distance must be > 0, got {distance_cm}"
        )));
    }
    if !(height_cm > 0.0 && width_cm > 0.0) {
        return Err(Error::invalid(format!(
            "plant extents must be > 0, got {height_cm} x {width_cm} cm"
        )));
    }
    let scale = cam.px_per_cm(distance_cm);
    let h = height_cm * scale;
    let w = width_cm * scale;
    if h > FRAME_H as f64 || w > FRAME_W as f64 {
        return Err(Error::PlantExceedsFrame {
            height_px: h,
            width_px: w,
            frame_h: FRAME_H,
            frame_w: FRAME_W,
        });
    }

    let ground = FRAME_H as f64;
    let xc = FRAME_W as f64 / 2.0;
    let stem_half = (0.04 * w).max(0.5);
    let stem_top = ground - 0.55 * h;
    // The widest canopy row sits on a pixel-row centre, so the rasterized
    // width never loses more than the unavoidable rounding.
    let lower = Ellipse {
        cy: (ground - 0.55 * h).floor() + 0.5,
        ax: 0.5 * w,
        ay: 0.25 * h,
    };
    let upper = Ellipse {
        cy: ground - 0.8 * h,
        ax: 0.3 * w,
        ay: 0.2 * h,
    };

    let mut spans = vec![None; FRAME_H];
    for (row, span) in spans.iter_mut().enumerate() {
        let y = row as f64 + 0.5;
        let mut half: Option<f64> = None;
        if y >= stem_top && y <= ground {
            half = Some(stem_half);
        }
        for e in [&lower, &upper] {
            if let Some(hw) = e.half_width_at(y) {
                half = Some(half.map_or(hw, |cur| cur.max(hw)));
            }
        }
        if let Some(hw) = half {
            // Columns whose centre j + 0.5 lies in [xc - hw, xc + hw].
            let lo = (xc - hw - 0.5).ceil().max(0.0) as usize;
            let hi = (xc + hw - 0.5).floor().min(FRAME_W as f64 - 1.0);
            if hi >= 0.0 && (hi as usize) >= lo {
                *span = Some((lo, hi as usize));
            }
        }
    }
    if spans.iter().all(Option::is_none) {
        // Smallest visible mark: one pixel at the plant base.
        spans[FRAME_H - 1] = Some((FRAME_W / 2 - 1, FRAME_W / 2 - 1));
    }
    Ok(Silhouette { spans })
}

/// Draws a silhouette into a frame, adding seeded per-channel noise when
/// the camera asks for it.
pub fn draw(
    silhouette: &Silhouette,
    cam: &CameraConfig,
    distance_cm: f64,
    timestamp: SimTime,
    noise_seed: u64,
) -> Frame {
    let mut frame = Frame::filled(cam.background);
    frame.distance_cm = distance_cm;
    frame.timestamp = timestamp;
    let px = frame.pixels_mut();
    for (row, span) in silhouette.spans.iter().enumerate() {
        if let Some((a, b)) = *span {
            for col in a..=b {
                let i = (row * FRAME_W + col) * 3;
                px[i..i + 3].copy_from_slice(&cam.plant_color);
            }
        }
    }
    if cam.noise_amplitude > 0 {
        let amp = cam.noise_amplitude as i16;
        let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
        for v in px.iter_mut() {
            let jitter: i16 = rng.random_range(-amp..=amp);
            *v = (*v as i16 + jitter).clamp(0, 255) as u8;
        }
    }
    frame
}

/// Renders the plant's current height and effective (turgor-shrunk) width.
pub fn render(
    model: &PlantModel,
    plant: &PlantState,
    cam: &CameraConfig,
    distance_cm: f64,
    noise_seed: u64,
) -> Result<(Frame, GroundTruth)> {
    let sil = rasterize(
        plant.height_cm,
        model.effective_width(plant),
        cam,
        distance_cm,
    )?;
    let frame = draw(&sil, cam, distance_cm, plant.time, noise_seed);
    Ok((frame, sil.ground_truth()))
}

/// True when any plant's visible canopy is wider than the pot spacing, so
/// neighbours overlap and individual captures are no longer possible.
pub fn overlap_flag(model: &PlantModel, group: &[PlantState], spacing_cm: f64) -> Result<bool> {
    if !(spacing_cm > 0.0) {
        return Err(Error::invalid(format!(
            "plant spacing must be > 0, got {spacing_cm}"
        )));
    }
    Ok(group.iter().any(|p| model.effective_width(p) > spacing_cm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::EcBand;

    #[test]
    fn distance_schedule() {
        assert_eq!(capture_distance(0.0).unwrap(), 30.0);
        assert_eq!(capture_distance(2.9).unwrap(), 30.0);
        assert_eq!(capture_distance(3.0).unwrap(), 40.0);
        assert_eq!(capture_distance(42.0).unwrap(), 170.0);
        assert_eq!(capture_distance(100.0).unwrap(), 170.0);
        assert!(capture_distance(-1.0).is_err());
    }

    #[test]
    fn pinhole_height() {
        let cam = CameraConfig::default();
        let gt = rasterize(50.0, 25.0, &cam, 100.0).unwrap().ground_truth();
        assert!(gt.height_px.abs_diff(240) <= 1, "{gt:?}");
        assert!(gt.width_px.abs_diff(120) <= 1, "{gt:?}");
    }

    #[test]
    fn projective_scaling() {
        let cam = CameraConfig::default();
        let near = rasterize(50.0, 25.0, &cam, 100.0).unwrap().ground_truth();
        let far = rasterize(50.0, 25.0, &cam, 160.0).unwrap().ground_truth();
        let ratio = near.height_px as f64 / far.height_px as f64;
        assert!((ratio / 1.6 - 1.0).abs() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn tiny_plant_leaves_a_mark() {
        let cam = CameraConfig::default();
        for d in [30.0, 100.0, 170.0] {
            let sil = rasterize(0.1, 0.05, &cam, d).unwrap();
            let gt = sil.ground_truth();
            // Oracle: count marked pixels directly.
            let counted = (0..FRAME_H)
                .flat_map(|r| (0..FRAME_W).map(move |c| (r, c)))
                .filter(|&(r, c)| sil.contains(r, c))
                .count();
            assert!(counted >= 1);
            assert_eq!(counted, gt.plant_pixel_count);
            assert!(gt.height_px >= 1 && gt.width_px >= 1);
        }
    }

    #[test]
    fn oversized_plant_is_rejected() {
        let cam = CameraConfig::default();
        assert!(matches!(
            rasterize(120.0, 30.0, &cam, 100.0),
            Err(Error::PlantExceedsFrame { .. })
        ));
        assert!(matches!(
            rasterize(50.0, 140.0, &cam, 100.0),
            Err(Error::PlantExceedsFrame { .. })
        ));
        assert!(rasterize(100.0, 30.0, &cam, 100.0).is_ok());
    }

    #[test]
    fn noiseless_frame_is_two_colour() {
        let cam = CameraConfig::default();
        let sil = rasterize(40.0, 20.0, &cam, 80.0).unwrap();
        let frame = draw(&sil, &cam, 80.0, SimTime(0), 0);
        for r in 0..FRAME_H {
            for c in 0..FRAME_W {
                let want = if sil.contains(r, c) {
                    cam.plant_color
                } else {
                    cam.background
                };
                assert_eq!(frame.rgb(r, c), want);
            }
        }
    }

    #[test]
    fn render_is_deterministic_with_noise() {
        let m = PlantModel::default();
        let cam = CameraConfig {
            noise_amplitude: 20,
            ..CameraConfig::default()
        };
        let p = m.seedling(EcBand::Normal, 1.0);
        let (a, ga) = render(&m, &p, &cam, 30.0, 7).unwrap();
        let (b, gb) = render(&m, &p, &cam, 30.0, 7).unwrap();
        let (c, _) = render(&m, &p, &cam, 30.0, 8).unwrap();
        assert_eq!(a, b);
        assert_eq!(ga, gb);
        assert_ne!(a, c);
    }

    #[test]
    fn overlap_examples() {
        let m = PlantModel::default();
        let mut p = m.seedling(EcBand::Normal, 1.0);
        p.turgid_width_cm = 30.0;
        let group = vec![p; 5];
        assert!(!overlap_flag(&m, &group, 40.0).unwrap());
        let mut wide = group.clone();
        wide[3].turgid_width_cm = 45.0;
        assert!(overlap_flag(&m, &wide, 40.0).unwrap());
        assert!(overlap_flag(&m, &group, 0.0).is_err());
    }
}
