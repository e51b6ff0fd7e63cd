//! Geometric kernels: inverse-mapped bilinear resampling with constant fill.
//!
//! Pixel centres sit on integer coordinates and the frame centre is
//! `((w - 1) / 2, (h - 1) / 2)`. Each op supplies the source position for
//! an output pixel; neighbours outside the frame read as [`FILL`].

use super::{quantize, FILL};
use crate::frame::Frame;

#[inline]
fn fetch(src: &[u8], w: i64, h: i64, x: i64, y: i64, c: usize) -> f32 {
    if x < 0 || y < 0 || x >= w || y >= h {
        FILL[c] as f32
    } else {
        src[((y * w + x) * 3) as usize + c] as f32
    }
}

fn warp(frame: &Frame, source: impl Fn(f32, f32) -> (f32, f32)) -> Frame {
    let (w, h) = (frame.width() as i64, frame.height() as i64);
    let src = frame.data();
    let mut data = Vec::with_capacity(src.len());
    for y in 0..h {
        for x in 0..w {
            let (sx, sy) = source(x as f32, y as f32);
            if !(sx > -1.0 && sy > -1.0 && sx < w as f32 && sy < h as f32) {
                data.extend_from_slice(&FILL);
                continue;
            }
            let x0 = sx.floor();
            let y0 = sy.floor();
            let fx = sx - x0;
            let fy = sy - y0;
            let (x0, y0) = (x0 as i64, y0 as i64);
            for c in 0..3 {
                let p00 = fetch(src, w, h, x0, y0, c);
                let p10 = fetch(src, w, h, x0 + 1, y0, c);
                let p01 = fetch(src, w, h, x0, y0 + 1, c);
                let p11 = fetch(src, w, h, x0 + 1, y0 + 1, c);
                let top = p00 + fx * (p10 - p00);
                let bottom = p01 + fx * (p11 - p01);
                data.push(quantize(top + fy * (bottom - top)));
            }
        }
    }
    frame.same_shape(data)
}

fn centre(frame: &Frame) -> (f32, f32) {
    (
        (frame.width() - 1) as f32 / 2.0,
        (frame.height() - 1) as f32 / 2.0,
    )
}

pub(crate) fn shear_x(frame: &Frame, shear: f32) -> Frame {
    let (_, cy) = centre(frame);
    warp(frame, |x, y| (x + shear * (y - cy), y))
}

pub(crate) fn shear_y(frame: &Frame, shear: f32) -> Frame {
    let (cx, _) = centre(frame);
    warp(frame, |x, y| (x, y + shear * (x - cx)))
}

/// Moves content right by `fraction * width`.
pub(crate) fn translate_x(frame: &Frame, fraction: f32) -> Frame {
    let dx = fraction * frame.width() as f32;
    warp(frame, |x, y| (x - dx, y))
}

/// Moves content down by `fraction * height`.
pub(crate) fn translate_y(frame: &Frame, fraction: f32) -> Frame {
    let dy = fraction * frame.height() as f32;
    warp(frame, |x, y| (x, y - dy))
}

/// Counter-clockwise rotation about the centre by `degrees`.
pub(crate) fn rotate(frame: &Frame, degrees: f32) -> Frame {
    let (cx, cy) = centre(frame);
    let (sin, cos) = degrees.to_radians().sin_cos();
    warp(frame, |x, y| {
        let (dx, dy) = (x - cx, y - cy);
        (cx + cos * dx - sin * dy, cy + sin * dx + cos * dy)
    })
}

/// Zoom about the centre by `factor`: > 1 crops the centre, < 1 pads.
pub(crate) fn scale(frame: &Frame, factor: f32) -> Frame {
    let (cx, cy) = centre(frame);
    warp(frame, |x, y| (cx + (x - cx) / factor, cy + (y - cy) / factor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern() -> Frame {
        Frame::from_fn(9, 7, |x, y| [(x * 25) as u8, (y * 30) as u8, ((x + y) * 9) as u8]).unwrap()
    }

    #[test]
    fn whole_pixel_translation_shifts_content() {
        let f = pattern();
        // 9 * (1/9) = 1 pixel
        let out = translate_x(&f, 1.0 / 9.0);
        for y in 0..7 {
            assert_eq!(out.pixel(0, y), FILL);
            for x in 1..9 {
                assert_eq!(out.pixel(x, y), f.pixel(x - 1, y));
            }
        }
    }

    #[test]
    fn half_turn_mirrors_both_axes() {
        let f = pattern();
        let out = rotate(&f, 180.0);
        for y in 0..7 {
            for x in 0..9 {
                assert_eq!(out.pixel(x, y), f.pixel(8 - x, 6 - y));
            }
        }
    }

    #[test]
    fn downscale_pads_with_fill() {
        let f = Frame::filled(10, 10, [0, 0, 0]).unwrap();
        let out = scale(&f, 0.5);
        assert_eq!(out.pixel(0, 0), FILL);
        assert_eq!(out.pixel(5, 5), [0, 0, 0]);
    }
}
