//! Plant segmentation and morphometry.

use crate::render::{CameraConfig, Frame, FRAME_H, FRAME_W};
use crate::{Error, Result};

/// Plant/background classification of a frame (true = plant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentationMask {
    bits: Vec<bool>,
}

impl SegmentationMask {
    pub fn empty() -> Self {
        SegmentationMask {
            bits: vec![false; FRAME_W * FRAME_H],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * FRAME_W + col]
    }

    pub fn set(&mut self, row: usize, col: usize, plant: bool) {
        self.bits[row * FRAME_W + col] = plant;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Number of pixels classified differently in `self` and `other`.
    pub fn difference(&self, other: &SegmentationMask) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Inclusive bounding box `(min_row, max_row, min_col, max_col)` of
    /// the plant pixels.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        let mut bb: Option<(usize, usize, usize, usize)> = None;
        for row in 0..FRAME_H {
            let line = &self.bits[row * FRAME_W..(row + 1) * FRAME_W];
            let Some(first) = line.iter().position(|&b| b) else {
                continue;
            };
            let last = line.iter().rposition(|&b| b).unwrap_or(first);
            bb = Some(match bb {
                None => (row, row, first, last),
                Some((r0, _, c0, c1)) => (r0, row, c0.min(first), c1.max(last)),
            });
        }
        bb
    }

    /// 3×3 majority filter; pixels outside the frame count as background.
    pub fn majority_filtered(&self) -> SegmentationMask {
        let mut out = SegmentationMask::empty();
        for row in 0..FRAME_H {
            for col in 0..FRAME_W {
                let mut n = 0;
                for r in row.saturating_sub(1)..=(row + 1).min(FRAME_H - 1) {
                    for c in col.saturating_sub(1)..=(col + 1).min(FRAME_W - 1) {
                        n += self.get(r, c) as u32;
                    }
                }
                out.set(row, col, n >= 5);
            }
        }
        out
    }
}

/// Red-dominance segmentation: a pixel is background iff its red channel
/// exceeds both green and blue by at least `red_margin`.
pub fn segment(frame: &Frame, red_margin: u8) -> SegmentationMask {
    let m = red_margin as i16;
    let bits = frame
        .pixels()
        .chunks_exact(3)
        .map(|p| {
            let (r, g, b) = (p[0] as i16, p[1] as i16, p[2] as i16);
            !(r >= g + m && r >= b + m)
        })
        .collect();
    SegmentationMask { bits }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Morphometry {
    pub height_px: usize,
    pub width_px: usize,
    pub height_cm: f64,
    pub width_cm: f64,
    pub plant_pixel_count: usize,
    pub distance_cm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VisionConfig {
    pub red_margin: u8,
    pub min_plant_pixels: usize,
}

impl Default for VisionConfig {
    fn default() -> Self {
        VisionConfig {
            red_margin: 60,
            min_plant_pixels: 25,
        }
    }
}

/// Bounding-box height and width of the mask, converted to centimetres
/// with the inverse pinhole projection.
pub fn measure(
    mask: &SegmentationMask,
    distance_cm: f64,
    cam: &CameraConfig,
    min_plant_pixels: usize,
) -> Result<Morphometry> {
    if !(distance_cm > 0.0) {
        return Err(Error::invalid(format!(
            "camera distance must be > 0, got {distance_cm}"
        )));
    }
    cam.validate()?;
    let pixels = mask.count();
    let bb = mask.bounding_box();
    let (r0, r1, c0, c1) = match bb {
        Some(bb) if pixels >= min_plant_pixels.max(1) => bb,
        _ => {
            return Err(Error::NoPlantDetected {
                pixels,
                min: min_plant_pixels,
            })
        }
    };
    let height_px = r1 - r0 + 1;
    let width_px = c1 - c0 + 1;
    let cm_per_px = distance_cm / cam.focal_px;
    Ok(Morphometry {
        height_px,
        width_px,
        height_cm: height_px as f64 * cm_per_px,
        width_cm: width_px as f64 * cm_per_px,
        plant_pixel_count: pixels,
        distance_cm,
    })
}

/// Full pipeline for one frame. The majority filter is only applied when
/// the camera adds noise, so noiseless frames are measured exactly.
pub fn analyze(frame: &Frame, cam: &CameraConfig, vision: &VisionConfig) -> Result<Morphometry> {
    let mut mask = segment(frame, vision.red_margin);
    if cam.noise_amplitude > 0 {
        mask = mask.majority_filtered();
    }
    measure(&mask, frame.distance_cm, cam, vision.min_plant_pixels)
}

/// Wilt degree: fractional width loss of `current` relative to `reference`.
/// Negative when the plant is wider than the reference.
pub fn width_overlap_difference(current: &Morphometry, reference: &Morphometry) -> Result<f64> {
    wilt_degree(current.width_cm, reference.width_cm)
}

pub fn wilt_degree(current_width_cm: f64, reference_width_cm: f64) -> Result<f64> {
    if !(reference_width_cm > 0.0) {
        return Err(Error::invalid(format!(
            "reference width must be > 0, got {reference_width_cm}"
        )));
    }
    Ok((reference_width_cm - current_width_cm) / reference_width_cm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::{draw, rasterize};
    use crate::time::SimTime;

    fn morph(width_cm: f64) -> Morphometry {
        Morphometry {
            height_px: 100,
            width_px: 100,
            height_cm: 50.0,
            width_cm,
            plant_pixel_count: 5000,
            distance_cm: 100.0,
        }
    }

    fn rect_mask(rows: usize, cols: usize) -> SegmentationMask {
        let mut m = SegmentationMask::empty();
        for r in 0..rows {
            for c in 0..cols {
                m.set(200 + r, 100 + c, true);
            }
        }
        m
    }

    #[test]
    fn noiseless_segmentation_matches_silhouette() {
        let cam = CameraConfig::default();
        let sil = rasterize(60.0, 30.0, &cam, 120.0).unwrap();
        let frame = draw(&sil, &cam, 120.0, SimTime(0), 0);
        assert_eq!(segment(&frame, 60), sil.to_mask());
    }

    #[test]
    fn pure_red_frame_has_no_plant() {
        let frame = Frame::filled([255, 0, 0]);
        let mask = segment(&frame, 60);
        assert_eq!(mask.count(), 0);
        assert!(matches!(
            measure(&mask, 100.0, &CameraConfig::default(), 25),
            Err(Error::NoPlantDetected { pixels: 0, .. })
        ));
    }

    #[test]
    fn margin_boundary() {
        let mut frame = Frame::filled([255, 0, 0]);
        frame.pixels_mut()[..3].copy_from_slice(&[160, 100, 100]);
        frame.pixels_mut()[3..6].copy_from_slice(&[159, 100, 100]);
        let mask = segment(&frame, 60);
        assert!(!mask.get(0, 0));
        assert!(mask.get(0, 1));
    }

    #[test]
    fn pinhole_inverse() {
        let m = measure(&rect_mask(240, 120), 100.0, &CameraConfig::default(), 25).unwrap();
        assert_eq!((m.height_px, m.width_px), (240, 120));
        assert!((m.height_cm - 50.0).abs() < 1e-12);
        assert!((m.width_cm - 25.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_pixels() {
        let mask = rect_mask(2, 5);
        assert!(matches!(
            measure(&mask, 100.0, &CameraConfig::default(), 25),
            Err(Error::NoPlantDetected {
                pixels: 10,
                min: 25
            })
        ));
        assert!(measure(&rect_mask(5, 5), 100.0, &CameraConfig::default(), 25).is_ok());
    }

    #[test]
    fn wilt_degree_examples() {
        let r = morph(40.0);
        assert!((width_overlap_difference(&morph(39.2), &r).unwrap() - 0.02).abs() < 1e-12);
        assert_eq!(width_overlap_difference(&morph(40.0), &r).unwrap(), 0.0);
        assert!((width_overlap_difference(&morph(41.0), &r).unwrap() + 0.025).abs() < 1e-12);
        assert!(width_overlap_difference(&morph(40.0), &morph(0.0)).is_err());
    }

    #[test]
    fn majority_filter_removes_speckle_keeps_blocks() {
        let mut m = rect_mask(10, 10);
        m.set(50, 50, true);
        let f = m.majority_filtered();
        assert!(!f.get(50, 50));
        assert_eq!(f.bounding_box(), Some((200, 209, 100, 109)));
    }

    #[test]
    fn narrower_canopy_measures_narrower() {
        let cam = CameraConfig::default();
        let vc = VisionConfig::default();
        let mut prev = f64::INFINITY;
        for w in [40.0, 39.0, 38.0, 37.0] {
            let sil = rasterize(80.0, w, &cam, 100.0).unwrap();
            let frame = draw(&sil, &cam, 100.0, SimTime(0), 0);
            let m = analyze(&frame, &cam, &vc).unwrap();
            assert!(m.width_cm < prev);
            prev = m.width_cm;
        }
    }
}
