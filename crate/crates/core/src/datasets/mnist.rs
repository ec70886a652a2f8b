//! MNIST in its original IDX container.
//!
//! Images: big-endian `u32` magic `0x00000803`, then count, rows and cols,
//! then `count·rows·cols` unsigned bytes. Labels: magic `0x00000801`, count,
//! then `count` bytes.

use std::fs;
use std::io::{Cursor, Read};
use std::path::Path;

use byteorder::{BigEndian, ReadBytesExt};

use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::nncore::Matrix;

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

/// Conventional file names of the four MNIST files.
pub const TRAIN_IMAGES: &str = "train-images-idx3-ubyte";
pub const TRAIN_LABELS: &str = "train-labels-idx1-ubyte";
pub const TEST_IMAGES: &str = "t10k-images-idx3-ubyte";
pub const TEST_LABELS: &str = "t10k-labels-idx1-ubyte";

/// Pixels scaled to `[0, 1]` by `/ 255`, one flattened image per row.
pub fn load_mnist_idx(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<Dataset> {
    let (rows, cols, pixels, n_images) = read_images(&read_file(images_path.as_ref())?)?;
    let labels = read_labels(&read_file(labels_path.as_ref())?)?;
    if labels.len() != n_images {
        return Err(Error::Consistency(format!(
            "{n_images} images but {} labels",
            labels.len()
        )));
    }
    let features: Vec<f64> = pixels.iter().map(|&p| p as f64 / 255.0).collect();
    let x = Matrix::from_vec(n_images, rows * cols, features)?;
    Dataset::new("mnist", x, labels, 10)
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

fn read_images(bytes: &[u8]) -> Result<(usize, usize, Vec<u8>, usize)> {
    let mut cur = Cursor::new(bytes);
    let magic = cur.read_u32::<BigEndian>()?;
    if magic != IMAGES_MAGIC {
        return Err(Error::Format(format!(
            "image file magic is {magic:#010x}, expected {IMAGES_MAGIC:#010x}"
        )));
    }
    let count = cur.read_u32::<BigEndian>()? as usize;
    let rows = cur.read_u32::<BigEndian>()? as usize;
    let cols = cur.read_u32::<BigEndian>()? as usize;
    let mut pixels = vec![0u8; count * rows * cols];
    cur.read_exact(&mut pixels)?;
    Ok((rows, cols, pixels, count))
}

fn read_labels(bytes: &[u8]) -> Result<Vec<usize>> {
    let mut cur = Cursor::new(bytes);
    let magic = cur.read_u32::<BigEndian>()?;
    if magic != LABELS_MAGIC {
        return Err(Error::Format(format!(
            "label file magic is {magic:#010x}, expected {LABELS_MAGIC:#010x}"
        )));
    }
    let count = cur.read_u32::<BigEndian>()? as usize;
    let mut raw = vec![0u8; count];
    cur.read_exact(&mut raw)?;
    if let Some(&bad) = raw.iter().find(|&&l| l > 9) {
        return Err(Error::Format(format!("label {bad} is not a digit")));
    }
    Ok(raw.into_iter().map(usize::from).collect())
}
