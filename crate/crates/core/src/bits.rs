//! Bit-vector helpers. Bits are stored one per `u8` with values 0 or 1.

use crate::error::{Error, Result};

/// Packs bits MSB-first into bytes and renders them as lowercase hex.
/// The final byte is zero-padded on the right.
pub fn to_hex(bits: &[u8]) -> String {
    let bytes: Vec<u8> = bits
        .chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i)))
        })
        .collect();
    hex::encode(bytes)
}

/// Inverse of [`to_hex`]: reads `n_bits` bits MSB-first from a hex string.
pub fn from_hex(text: &str, n_bits: usize) -> Result<Vec<u8>> {
    let bytes = hex::decode(text.trim())
        .map_err(|e| Error::InvalidParameter(format!("bad hex input: {e}")))?;
    if bytes.len() * 8 < n_bits {
        return Err(Error::DimensionMismatch {
            what: "hex input bits",
            expected: n_bits,
            got: bytes.len() * 8,
        });
    }
    Ok((0..n_bits)
        .map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1)
        .collect())
}

pub(crate) fn xor_into(dst: &mut [u8], src: &[u8]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Hard decision on an LLR: negative means bit 1, zero decodes to 0.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}
