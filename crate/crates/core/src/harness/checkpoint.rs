//! Binary model dump.
//!
//! Layout, all little-endian: the 8 bytes `ACETMLP1`, a `u32` layer count,
//! then per layer `u32 fan_in`, `u32 fan_out`, a `u8` activation tag
//! (0 relu, 1 softmax, 2 identity), `fan_in·fan_out` row-major `f64`
//! weights and `fan_out` `f64` biases.

use std::fs;
use std::io::{Cursor, Read};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};
use crate::nncore::{Activation, DenseLayer, Matrix, Mlp};

const MAGIC: &[u8; 8] = b"ACETMLP1";

pub fn encode_model(model: &Mlp) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 8 * model.param_count());
    out.extend_from_slice(MAGIC);
    out.write_u32::<LittleEndian>(model.layers().len() as u32).unwrap();
    for layer in model.layers() {
        out.write_u32::<LittleEndian>(layer.fan_in() as u32).unwrap();
        out.write_u32::<LittleEndian>(layer.fan_out() as u32).unwrap();
        out.write_u8(layer.activation.tag()).unwrap();
        for &w in layer.weights.as_slice().iter().chain(&layer.biases) {
            out.write_f64::<LittleEndian>(w).unwrap();
        }
    }
    out
}

pub fn decode_model(bytes: &[u8]) -> Result<Mlp> {
    let mut cur = Cursor::new(bytes);
    let mut magic = [0u8; 8];
    cur.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not a model file (bad magic)".into()));
    }
    let n_layers = cur.read_u32::<LittleEndian>()? as usize;
    let mut layers = Vec::with_capacity(n_layers);
    for _ in 0..n_layers {
        let fan_in = cur.read_u32::<LittleEndian>()? as usize;
        let fan_out = cur.read_u32::<LittleEndian>()? as usize;
        let tag = cur.read_u8()?;
        let activation = Activation::from_tag(tag)
            .ok_or_else(|| Error::Format(format!("unknown activation tag {tag}")))?;
        let mut weights = vec![0.0; fan_in * fan_out];
        cur.read_f64_into::<LittleEndian>(&mut weights)?;
        let mut biases = vec![0.0; fan_out];
        cur.read_f64_into::<LittleEndian>(&mut biases)?;
        layers.push(DenseLayer {
            weights: Matrix::from_vec(fan_in, fan_out, weights)?,
            biases,
            activation,
        });
    }
    if (cur.position() as usize) != bytes.len() {
        return Err(Error::Format("trailing bytes after the last layer".into()));
    }
    Mlp::from_layers(layers)
}

pub fn save_model(model: &Mlp, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, encode_model(model))?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Mlp> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    decode_model(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nncore::RngState;

    #[test]
    fn round_trip_is_exact() {
        let m = Mlp::init(&[3, 7, 5, 2], &mut RngState::new(8)).unwrap();
        let back = decode_model(&encode_model(&m)).unwrap();
        assert_eq!(back, m);
        assert_eq!(encode_model(&back), encode_model(&m));
    }

    #[test]
    fn corrupt_files_rejected() {
        let m = Mlp::init(&[2, 3], &mut RngState::new(0)).unwrap();
        let mut bytes = encode_model(&m);
        assert!(decode_model(&bytes[..bytes.len() - 1]).is_err());
        bytes.push(0);
        assert!(matches!(decode_model(&bytes), Err(Error::Format(_))));
        assert!(matches!(decode_model(b"NOTAMODEL...."), Err(Error::Format(_))));
    }
}
