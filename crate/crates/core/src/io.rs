//! Clip storage: PNG image-sequence directories and raw clip files.
//!
//! An image sequence is a directory of `frame_00000.png`, `frame_00001.png`,
//! ... numbered contiguously from zero. JPEG frames (`.jpg`/`.jpeg`) are
//! accepted on read; writes are always PNG.
//!
//! A raw clip file is
//!
//! ```text
//! offset  size      field
//! 0       16        magic "DVCLIP01" padded with NUL bytes
//! 16      4         frame count T   (u32, little-endian)
//! 20      4         height H        (u32, little-endian)
//! 24      4         width W         (u32, little-endian)
//! 28      T*H*W*3   RGB bytes, frame-major then row-major
//! ```

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use image::{ImageFormat, RgbImage};

use crate::error::{Error, Result};
use crate::frame::{Clip, Frame};

pub const RAW_MAGIC: &[u8; 16] = b"DVCLIP01\0\0\0\0\0\0\0\0";
const RAW_HEADER_LEN: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClipFormat {
    ImageSequence,
    RawClip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClipLocator {
    pub path: PathBuf,
    pub format: ClipFormat,
}

impl ClipLocator {
    pub fn new(path: impl Into<PathBuf>, format: ClipFormat) -> Self {
        Self {
            path: path.into(),
            format,
        }
    }

    /// Directories are image sequences, anything else a raw clip.
    pub fn detect(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let format = if path.is_dir() {
            ClipFormat::ImageSequence
        } else {
            ClipFormat::RawClip
        };
        Self { path, format }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

fn source_id(path: &Path) -> String {
    path.file_stem()
        .or_else(|| path.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn frame_file_name(index: usize) -> String {
    format!("frame_{index:05}.png")
}

/// Parses `frame_NNNNN.{png,jpg,jpeg}` into its index.
fn parse_frame_name(name: &str) -> Option<usize> {
    let (stem, ext) = name.rsplit_once('.')?;
    if !matches!(ext.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg") {
        return None;
    }
    let digits = stem.strip_prefix("frame_")?;
    if digits.len() < 5 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn read_clip(loc: &ClipLocator) -> Result<Clip> {
    match loc.format {
        ClipFormat::ImageSequence => read_sequence(&loc.path),
        ClipFormat::RawClip => read_raw(&loc.path),
    }
}

pub fn write_clip(clip: &Clip, loc: &ClipLocator) -> Result<()> {
    match loc.format {
        ClipFormat::ImageSequence => write_sequence(clip, &loc.path),
        ClipFormat::RawClip => write_raw(clip, &loc.path),
    }
}

fn read_sequence(dir: &Path) -> Result<Clip> {
    let mut indexed = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let entry = entry.map_err(io_err(dir))?;
        let name = entry.file_name();
        if let Some(i) = name.to_str().and_then(parse_frame_name) {
            indexed.push((i, entry.path()));
        }
    }
    if indexed.is_empty() {
        return Err(format_err(dir, "no frame_NNNNN image files found"));
    }
    indexed.sort();
    for (expected, (i, path)) in indexed.iter().enumerate() {
        if *i > expected {
            return Err(format_err(dir, format!("missing frame index {expected}")));
        }
        if *i < expected {
            return Err(format_err(
                dir,
                format!("duplicate frame index {i} ({})", path.display()),
            ));
        }
    }

    let mut frames = Vec::with_capacity(indexed.len());
    for (i, path) in &indexed {
        let img = image::open(path)
            .map_err(|source| match source {
                image::ImageError::IoError(e) => Error::Io {
                    path: path.clone(),
                    source: e,
                },
                other => Error::Image {
                    path: path.clone(),
                    source: other,
                },
            })?
            .into_rgb8();
        let (w, h) = img.dimensions();
        if let Some(first) = frames.first() {
            let first: &Frame = first;
            if (w, h) != (first.width(), first.height()) {
                return Err(format_err(
                    dir,
                    format!(
                        "frame {i} is {w}x{h}, expected {}x{}",
                        first.width(),
                        first.height()
                    ),
                ));
            }
        }
        frames.push(Frame::new(w, h, img.into_raw())?);
    }
    Clip::new(source_id(dir), frames)
}

fn write_sequence(clip: &Clip, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (i, frame) in clip.frames().iter().enumerate() {
        let path = dir.join(frame_file_name(i));
        let img = RgbImage::from_raw(frame.width(), frame.height(), frame.data().to_vec())
            .expect("frame buffer matches its dimensions");
        img.save_with_format(&path, ImageFormat::Png)
            .map_err(|source| match source {
                image::ImageError::IoError(e) => Error::Io {
                    path: path.clone(),
                    source: e,
                },
                other => Error::Image {
                    path: path.clone(),
                    source: other,
                },
            })?;
    }
    Ok(())
}

/// Serializes a clip into the raw container layout.
pub fn encode_raw(clip: &Clip) -> Result<Vec<u8>> {
    let t = u32::try_from(clip.len())
        .map_err(|_| Error::argument("clip too long for the raw format"))?;
    let frame_len = clip.frames()[0].data().len();
    let mut out = Vec::with_capacity(RAW_HEADER_LEN + frame_len * clip.len());
    out.extend_from_slice(RAW_MAGIC);
    out.extend_from_slice(&t.to_le_bytes());
    out.extend_from_slice(&clip.height().to_le_bytes());
    out.extend_from_slice(&clip.width().to_le_bytes());
    for f in clip.frames() {
        out.extend_from_slice(f.data());
    }
    Ok(out)
}

/// Parses the raw container; `path` only labels errors.
pub fn decode_raw(bytes: &[u8], path: &Path) -> Result<Clip> {
    if bytes.len() < RAW_HEADER_LEN {
        return Err(format_err(path, format!("truncated header ({} bytes)", bytes.len())));
    }
    if &bytes[..16] != RAW_MAGIC {
        return Err(format_err(path, "bad magic, expected DVCLIP01"));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
    let (t, h, w) = (word(16), word(20), word(24));
    if t == 0 || h == 0 || w == 0 {
        return Err(format_err(path, format!("zero dimension T={t} H={h} W={w}")));
    }
    let frame_len = (w as usize)
        .checked_mul(h as usize)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| format_err(path, "frame size overflows"))?;
    let expected = frame_len
        .checked_mul(t as usize)
        .and_then(|n| n.checked_add(RAW_HEADER_LEN))
        .ok_or_else(|| format_err(path, "clip size overflows"))?;
    if bytes.len() != expected {
        return Err(format_err(
            path,
            format!("expected {expected} bytes for T={t} H={h} W={w}, found {}", bytes.len()),
        ));
    }
    let frames = bytes[RAW_HEADER_LEN..]
        .chunks_exact(frame_len)
        .map(|chunk| Frame::new(w, h, chunk.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Clip::new(source_id(path), frames)
}

fn read_raw(path: &Path) -> Result<Clip> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    decode_raw(&bytes, path)
}

fn write_raw(clip: &Clip, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    let bytes = encode_raw(clip)?;
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    w.write_all(&bytes).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}
