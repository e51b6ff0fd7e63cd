//! Test-only oracles, written independently of the library's fast paths.
//!
//! `eq1` evaluates the Fourier-sampling formula literally (weighted sum of
//! min-max normalized sinusoids). `reference` is a naive per-pixel version
//! of every kernel, written against the documented arithmetic conventions
//! (f32 maths, round-half-away-from-zero, clamp) rather than the crate's
//! LUT/row code.

#![allow(dead_code)]

use dynaug::{Clip, Frame};
use sha2::{Digest, Sha256};

pub mod eq1 {
    use std::f64::consts::PI;

    /// `(weight, frequency, amplitude, offset)`.
    pub type Basis = (f64, f64, f64, usize);

    pub fn evaluate(frames: usize, magnitude: f64, bases: &[Basis]) -> Vec<f64> {
        let k: Vec<f64> = (1..=2 * frames).map(|v| v as f64).collect();
        let denom = if frames > 1 { (frames - 1) as f64 } else { 1.0 };
        let mut out = vec![0.0; frames];
        for &(w, f, a, o) in bases {
            let signal: Vec<f64> = k[o..o + frames]
                .iter()
                .map(|&kk| (2.0 * f * PI * kk / denom).sin())
                .collect();
            let lo = magnitude - magnitude * a;
            let hi = magnitude + magnitude * a;
            let smin = signal.iter().cloned().fold(f64::INFINITY, f64::min);
            let smax = signal.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for (acc, s) in out.iter_mut().zip(&signal) {
                let norm = if smax == smin {
                    magnitude
                } else {
                    lo + (s - smin) / (smax - smin) * (hi - lo)
                };
                *acc += w * norm;
            }
        }
        out
    }
}

pub mod reference {
    use dynaug::ops::{EraseRegion, OpKind, FILL};
    use dynaug::Frame;

    /// Round half away from zero, then saturate.
    fn q(v: f32) -> u8 {
        let r = v.round();
        if r <= 0.0 {
            0
        } else if r >= 255.0 {
            255
        } else {
            r as u8
        }
    }

    fn get(f: &Frame, x: i64, y: i64, c: usize) -> f32 {
        if x < 0 || y < 0 || x >= f.width() as i64 || y >= f.height() as i64 {
            FILL[c] as f32
        } else {
            f.pixel(x as u32, y as u32)[c] as f32
        }
    }

    fn build(f: &Frame, mut px: impl FnMut(u32, u32) -> [u8; 3]) -> Frame {
        Frame::from_fn(f.width(), f.height(), |x, y| px(x, y)).unwrap()
    }

    fn luma(p: [u8; 3]) -> u32 {
        (299 * p[0] as u32 + 587 * p[1] as u32 + 114 * p[2] as u32 + 500) / 1000
    }

    fn sample(f: &Frame, sx: f32, sy: f32) -> [u8; 3] {
        let (w, h) = (f.width() as f32, f.height() as f32);
        if sx <= -1.0 || sy <= -1.0 || sx >= w || sy >= h {
            return FILL;
        }
        let (x0, y0) = (sx.floor(), sy.floor());
        let (fx, fy) = (sx - x0, sy - y0);
        let (x0, y0) = (x0 as i64, y0 as i64);
        let mut out = [0u8; 3];
        for (c, o) in out.iter_mut().enumerate() {
            let a = get(f, x0, y0, c);
            let b = get(f, x0 + 1, y0, c);
            let cc = get(f, x0, y0 + 1, c);
            let d = get(f, x0 + 1, y0 + 1, c);
            let top = a + fx * (b - a);
            let bottom = cc + fx * (d - cc);
            *o = q(top + fy * (bottom - top));
        }
        out
    }

    fn blend_px(d: [f32; 3], p: [u8; 3], k: f32) -> [u8; 3] {
        [0, 1, 2].map(|c| q(d[c] + k * (p[c] as f32 - d[c])))
    }

    fn rgb2hsv(r: f32, g: f32, b: f32) -> (f32, f32, f32) {
        let mx = r.max(g).max(b);
        let mn = r.min(g).min(b);
        let d = mx - mn;
        if d == 0.0 {
            return (0.0, 0.0, mx);
        }
        let h = if mx == r {
            (g - b) / d
        } else if mx == g {
            2.0 + (b - r) / d
        } else {
            4.0 + (r - g) / d
        };
        ((h / 6.0).rem_euclid(1.0), d / mx, mx)
    }

    fn hsv2rgb(h: f32, s: f32, v: f32) -> (f32, f32, f32) {
        let i = (h * 6.0).floor();
        let f = h * 6.0 - i;
        let p = v * (1.0 - s);
        let qq = v * (1.0 - s * f);
        let t = v * (1.0 - s * (1.0 - f));
        match (i as i32).rem_euclid(6) {
            0 => (v, t, p),
            1 => (qq, v, p),
            2 => (p, v, t),
            3 => (p, qq, v),
            4 => (t, p, v),
            _ => (v, p, qq),
        }
    }

    pub fn apply(kind: OpKind, f: &Frame, param: f64, region: Option<&EraseRegion>) -> Frame {
        let k = param as f32;
        let (w, h) = (f.width(), f.height());
        let cx = (w - 1) as f32 / 2.0;
        let cy = (h - 1) as f32 / 2.0;
        match kind {
            OpKind::ShearX => build(f, |x, y| {
                let (x, y) = (x as f32, y as f32);
                sample(f, x + k * (y - cy), y)
            }),
            OpKind::ShearY => build(f, |x, y| {
                let (x, y) = (x as f32, y as f32);
                sample(f, x, y + k * (x - cx))
            }),
            OpKind::TranslateX => build(f, |x, y| sample(f, x as f32 - k * w as f32, y as f32)),
            OpKind::TranslateY => build(f, |x, y| sample(f, x as f32, y as f32 - k * h as f32)),
            OpKind::Rotate => {
                let rad = k.to_radians();
                let (s, c) = (rad.sin(), rad.cos());
                build(f, |x, y| {
                    let dx = x as f32 - cx;
                    let dy = y as f32 - cy;
                    sample(f, cx + c * dx - s * dy, cy + s * dx + c * dy)
                })
            }
            OpKind::DynamicScale => build(f, |x, y| {
                sample(f, cx + (x as f32 - cx) / k, cy + (y as f32 - cy) / k)
            }),
            OpKind::Invert => build(f, |x, y| f.pixel(x, y).map(|v| 255 - v)),
            OpKind::Solarize => {
                let t = param.round() as u32;
                build(f, |x, y| f.pixel(x, y).map(|v| if v as u32 >= t { 255 - v } else { v }))
            }
            OpKind::Posterize => {
                let bits = param.round() as u32;
                let drop = 8 - bits;
                build(f, |x, y| f.pixel(x, y).map(|v| ((v as u32 >> drop) << drop) as u8))
            }
            OpKind::Brightness => build(f, |x, y| blend_px([0.0; 3], f.pixel(x, y), k)),
            OpKind::Contrast => {
                let mut sum = 0u64;
                for y in 0..h {
                    for x in 0..w {
                        sum += luma(f.pixel(x, y)) as u64;
                    }
                }
                let mean = (sum as f64 / (w * h) as f64) as f32;
                build(f, |x, y| blend_px([mean; 3], f.pixel(x, y), k))
            }
            OpKind::Color => build(f, |x, y| {
                let p = f.pixel(x, y);
                blend_px([luma(p) as f32; 3], p, k)
            }),
            OpKind::Sharpness => build(f, |x, y| {
                let p = f.pixel(x, y);
                if x == 0 || y == 0 || x == w - 1 || y == h - 1 {
                    return p;
                }
                let mut d = [0f32; 3];
                for (c, dc) in d.iter_mut().enumerate() {
                    let mut s = 0u32;
                    for yy in y - 1..=y + 1 {
                        for xx in x - 1..=x + 1 {
                            s += f.pixel(xx, yy)[c] as u32;
                        }
                    }
                    *dc = s as f32 / 9.0;
                }
                blend_px(d, p, k)
            }),
            OpKind::AutoContrast => {
                let mut lo = [255u8; 3];
                let mut hi = [0u8; 3];
                for y in 0..h {
                    for x in 0..w {
                        let p = f.pixel(x, y);
                        for c in 0..3 {
                            lo[c] = lo[c].min(p[c]);
                            hi[c] = hi[c].max(p[c]);
                        }
                    }
                }
                build(f, |x, y| {
                    let p = f.pixel(x, y);
                    [0, 1, 2].map(|c| {
                        if hi[c] > lo[c] {
                            q((p[c] as f32 - lo[c] as f32) * (255.0 / (hi[c] - lo[c]) as f32))
                        } else {
                            p[c]
                        }
                    })
                })
            }
            OpKind::Equalize => {
                let mut maps = [[0u8; 256]; 3];
                for c in 0..3 {
                    let mut hist = vec![0u64; 256];
                    for y in 0..h {
                        for x in 0..w {
                            hist[f.pixel(x, y)[c] as usize] += 1;
                        }
                    }
                    let last = (0..256).rev().find(|&i| hist[i] > 0).unwrap();
                    let step = (hist.iter().sum::<u64>() - hist[last]) / 255;
                    for i in 0..256 {
                        maps[c][i] = if step == 0 {
                            i as u8
                        } else {
                            let before: u64 = hist[..i].iter().sum();
                            ((before + step / 2) / step).min(255) as u8
                        };
                    }
                }
                build(f, |x, y| {
                    let p = f.pixel(x, y);
                    [maps[0][p[0] as usize], maps[1][p[1] as usize], maps[2][p[2] as usize]]
                })
            }
            OpKind::DynamicColor => build(f, |x, y| {
                let p = f.pixel(x, y);
                let (hh, s, v) =
                    rgb2hsv(p[0] as f32 / 255.0, p[1] as f32 / 255.0, p[2] as f32 / 255.0);
                let (r, g, b) = hsv2rgb((hh + k).rem_euclid(1.0), s, v);
                [q(r * 255.0), q(g * 255.0), q(b * 255.0)]
            }),
            OpKind::DynamicRandomErase => {
                let r = region.expect("erase region");
                let area = param * w as f64 * h as f64;
                let bw = (area / r.aspect).sqrt().round() as i64;
                let bh = (area * r.aspect).sqrt().round() as i64;
                let x0 = r.center_x as i64 - bw / 2;
                let y0 = r.center_y as i64 - bh / 2;
                build(f, |x, y| {
                    let (xi, yi) = (x as i64, y as i64);
                    if xi >= x0 && xi < x0 + bw && yi >= y0 && yi < y0 + bh {
                        r.fill
                    } else {
                        f.pixel(x, y)
                    }
                })
            }
        }
    }
}

/// The fixed 17x13 pattern used for kernel goldens. Covers 0 and 255 in
/// every channel, smooth gradients and a hard edge.
pub fn test_pattern() -> Frame {
    Frame::from_fn(17, 13, |x, y| {
        let r = (x * 255 / 16) as u8;
        let g = (y * 255 / 12) as u8;
        let b = if (x + y) % 4 < 2 { 255 - (x * y) as u8 } else { (x * 13 + y * 7) as u8 };
        [r, g, b]
    })
    .unwrap()
}

/// Deterministic pseudo-random frame (SplitMix64), independent of `rand`.
pub fn noise_frame(width: u32, height: u32, seed: u64) -> Frame {
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    let data = (0..width * height * 3).map(|_| next() as u8).collect();
    Frame::new(width, height, data).unwrap()
}

/// `frames` frames of a slowly moving gradient.
pub fn synthetic_clip(id: &str, frames: usize, width: u32, height: u32) -> Clip {
    let fs = (0..frames)
        .map(|t| {
            Frame::from_fn(width, height, |x, y| {
                [
                    ((x * 4 + t as u32 * 5) % 256) as u8,
                    ((y * 5 + t as u32 * 3) % 256) as u8,
                    ((x + y) * 2 % 256) as u8,
                ]
            })
            .unwrap()
        })
        .collect();
    Clip::new(id, fs).unwrap()
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn clip_digest(clip: &Clip) -> String {
    let mut all = Vec::new();
    for f in clip.frames() {
        all.extend_from_slice(f.data());
    }
    digest(&all)
}

/// Upper-tail p-value of Pearson's chi-square test of `counts` against
/// equal expected frequencies.
pub fn chi_square_uniform_p(counts: &[u64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let n: u64 = counts.iter().sum();
    let expected = n as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

/// Same test against explicit cell probabilities.
pub fn chi_square_p(counts: &[u64], probs: &[f64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let n: u64 = counts.iter().sum();
    let stat: f64 = counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = n as f64 * p;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}
