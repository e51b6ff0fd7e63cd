use rand::Rng;
use serde::{Deserialize, Serialize};

use super::FILL;
use crate::error::{Error, Result};
use crate::frame::Frame;

/// Placement of the erased box. Fixed for a whole clip; only the box area
/// follows the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EraseRegion {
    pub center_x: u32,
    pub center_y: u32,
    /// Box height over box width, in `[1/3, 3]`.
    pub aspect: f64,
    pub fill: [u8; 3],
}

impl EraseRegion {
    /// Uniform centre over the frame, log-uniform aspect in `[1/3, 3]`.
    pub fn sample<R: Rng + ?Sized>(width: u32, height: u32, rng: &mut R) -> Self {
        let center_x = rng.random_range(0..width.max(1));
        let center_y = rng.random_range(0..height.max(1));
        let log_max = 3f64.ln();
        let aspect = (rng.random::<f64>() * 2.0 * log_max - log_max).exp();
        Self {
            center_x,
            center_y,
            aspect,
            fill: FILL,
        }
    }

    /// Box width and height in pixels for an area fraction of `w * h`.
    pub fn box_size(&self, area_fraction: f64, width: u32, height: u32) -> (u32, u32) {
        let area = area_fraction * width as f64 * height as f64;
        let bw = (area / self.aspect).sqrt().round();
        let bh = (area * self.aspect).sqrt().round();
        (bw as u32, bh as u32)
    }

    /// Half-open pixel bounds `(x0, y0, x1, y1)` of the box, clipped to the frame.
    pub fn bounds(&self, area_fraction: f64, width: u32, height: u32) -> (u32, u32, u32, u32) {
        let (bw, bh) = self.box_size(area_fraction, width, height);
        let clip = |c: u32, len: u32, limit: u32| {
            let start = c as i64 - (len / 2) as i64;
            let end = start + len as i64;
            (start.clamp(0, limit as i64) as u32, end.clamp(0, limit as i64) as u32)
        };
        let (x0, x1) = clip(self.center_x, bw, width);
        let (y0, y1) = clip(self.center_y, bh, height);
        (x0, y0, x1, y1)
    }
}

pub(crate) fn erase(frame: &Frame, area_fraction: f64, region: &EraseRegion) -> Result<Frame> {
    if !(1.0 / 3.0 - 1e-12..=3.0 + 1e-12).contains(&region.aspect) {
        return Err(Error::argument(format!(
            "erase aspect {} outside [1/3, 3]",
            region.aspect
        )));
    }
    if region.center_x >= frame.width() || region.center_y >= frame.height() {
        return Err(Error::argument(format!(
            "erase centre ({}, {}) outside {}x{} frame",
            region.center_x,
            region.center_y,
            frame.width(),
            frame.height()
        )));
    }
    let (x0, y0, x1, y1) = region.bounds(area_fraction, frame.width(), frame.height());
    let mut data = frame.data().to_vec();
    let stride = frame.width() as usize * 3;
    for y in y0..y1 {
        let row = y as usize * stride;
        for x in x0..x1 {
            let i = row + x as usize * 3;
            data[i..i + 3].copy_from_slice(&region.fill);
        }
    }
    Ok(frame.same_shape(data))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(cx: u32, cy: u32, aspect: f64) -> EraseRegion {
        EraseRegion {
            center_x: cx,
            center_y: cy,
            aspect,
            fill: [1, 2, 3],
        }
    }

    #[test]
    fn interior_box_area_within_slack() {
        let (w, h) = (200, 150);
        for &aspect in &[1.0 / 3.0, 0.5, 1.0, 2.0, 3.0] {
            for &frac in &[0.1, 0.2, 0.3, 0.6] {
                let r = region(100, 75, aspect);
                let (bw, bh) = r.box_size(frac, w, h);
                let (x0, y0, x1, y1) = r.bounds(frac, w, h);
                if x0 == 0 || y0 == 0 || x1 == w || y1 == h {
                    continue;
                }
                let covered = (bw * bh) as f64;
                let target = frac * (w * h) as f64;
                assert!(
                    (covered - target).abs() <= (bw + bh) as f64,
                    "aspect {aspect} frac {frac}: {covered} vs {target}"
                );
            }
        }
    }

    #[test]
    fn zero_area_is_identity_and_box_is_clipped() {
        let f = Frame::filled(8, 8, [9, 9, 9]).unwrap();
        assert_eq!(erase(&f, 0.0, &region(0, 0, 1.0)).unwrap(), f);
        let out = erase(&f, 0.25, &region(0, 0, 1.0)).unwrap();
        // 4x4 box centred on the corner leaves a 2x2 visible patch
        let filled = out.data().chunks(3).filter(|p| *p == [1, 2, 3]).count();
        assert_eq!(filled, 4);
    }

    #[test]
    fn rejects_bad_regions() {
        let f = Frame::filled(8, 8, [9, 9, 9]).unwrap();
        assert!(erase(&f, 0.2, &region(8, 0, 1.0)).is_err());
        assert!(erase(&f, 0.2, &region(1, 1, 5.0)).is_err());
    }
}
