//! Cyclic redundancy checks for both coding chains.
//!
//! Plain polynomial division over GF(2): no initial register value, no final
//! XOR, message bit 0 enters the register first.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrcId {
    Crc24A,
    Crc24B,
    Crc16,
    Crc11,
    Crc6,
}

/// A CRC generator polynomial of degree `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrcPolynomial {
    pub id: CrcId,
    degree: u32,
    /// Coefficients of β^0..β^(L-1); the leading β^L term is implicit.
    low: u32,
}

const fn from_exponents(id: CrcId, degree: u32, exps: &[u32]) -> CrcPolynomial {
    let mut low = 0u32;
    let mut i = 0;
    while i < exps.len() {
        if exps[i] < degree {
            low |= 1 << exps[i];
        }
        i += 1;
    }
    CrcPolynomial { id, degree, low }
}

pub const CRC24A: CrcPolynomial = from_exponents(
    CrcId::Crc24A,
    24,
    &[24, 23, 18, 17, 14, 11, 10, 7, 6, 5, 4, 3, 1, 0],
);
pub const CRC24B: CrcPolynomial = from_exponents(CrcId::Crc24B, 24, &[24, 23, 6, 1, 0]);
pub const CRC16: CrcPolynomial = from_exponents(CrcId::Crc16, 16, &[16, 12, 5, 0]);
pub const CRC11: CrcPolynomial = from_exponents(CrcId::Crc11, 11, &[11, 10, 9, 5, 0]);
pub const CRC6: CrcPolynomial = from_exponents(CrcId::Crc6, 6, &[6, 5, 0]);

pub const ALL: [CrcPolynomial; 5] = [CRC24A, CRC24B, CRC16, CRC11, CRC6];

impl CrcPolynomial {
    pub fn of(id: CrcId) -> Self {
        match id {
            CrcId::Crc24A => CRC24A,
            CrcId::Crc24B => CRC24B,
            CrcId::Crc16 => CRC16,
            CrcId::Crc11 => CRC11,
            CrcId::Crc6 => CRC6,
        }
    }

    /// Number of parity bits `L`.
    pub fn len(&self) -> usize {
        self.degree as usize
    }

    pub fn is_empty(&self) -> bool {
        self.degree == 0
    }

    /// Coefficients of β^L down to β^0, most significant first (length L+1).
    pub fn coefficients(&self) -> Vec<u8> {
        let mut out = vec![1u8];
        out.extend((0..self.degree).rev().map(|e| ((self.low >> e) & 1) as u8));
        out
    }

    fn register(&self, message: &[u8]) -> u32 {
        let top = 1u32 << (self.degree - 1);
        let mask = if self.degree == 32 {
            u32::MAX
        } else {
            (1u32 << self.degree) - 1
        };
        let mut reg = 0u32;
        for &bit in message {
            let feedback = ((reg & top) != 0) ^ (bit & 1 != 0);
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= self.low;
            }
        }
        reg
    }
}

/// Remainder of `message · β^L` divided by the generator, MSB first.
pub fn crc_remainder(message: &[u8], poly: CrcPolynomial) -> Result<Vec<u8>> {
    if message.is_empty() {
        return Err(Error::EmptyInput);
    }
    let reg = poly.register(message);
    Ok((0..poly.degree)
        .rev()
        .map(|e| ((reg >> e) & 1) as u8)
        .collect())
}

/// Returns `message ‖ crc_remainder(message)`.
pub fn crc_attach(message: &[u8], poly: CrcPolynomial) -> Result<Vec<u8>> {
    let parity = crc_remainder(message, poly)?;
    let mut out = Vec::with_capacity(message.len() + parity.len());
    out.extend_from_slice(message);
    out.extend_from_slice(&parity);
    Ok(out)
}

pub fn crc_check(word: &[u8], poly: CrcPolynomial) -> Result<bool> {
    let l = poly.len();
    if word.len() <= l {
        return Err(Error::WordShorterThanCrc {
            len: word.len(),
            crc_len: l,
        });
    }
    let (msg, parity) = word.split_at(word.len() - l);
    let reg = poly.register(msg);
    Ok(parity
        .iter()
        .zip((0..poly.degree).rev())
        .all(|(&b, e)| u32::from(b & 1) == (reg >> e) & 1))
}

/// Transport-block CRC for the LDPC chain.
pub fn select_tb_crc(payload_len: usize) -> CrcPolynomial {
    if payload_len > 3824 {
        CRC24A
    } else {
        CRC16
    }
}
