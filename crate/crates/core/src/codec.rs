//! Bit packing of F_q elements: ⌈log2 q⌉ bits each, little-endian within
//! bytes (element 0 occupies the low bits of byte 0).

use crate::error::{Error, Result};
use crate::gf::BaseField;

/// Bytes needed to hold `count` packed elements.
pub fn packed_len(field: &BaseField, count: usize) -> usize {
    (count * field.bits_per_elem() as usize).div_ceil(8)
}

pub fn pack(field: &BaseField, elems: &[u16]) -> Vec<u8> {
    let bits = field.bits_per_elem() as usize;
    let mut out = vec![0u8; packed_len(field, elems.len())];
    let mut pos = 0usize;
    for &e in elems {
        let mut v = e as u32;
        let mut left = bits;
        while left > 0 {
            let byte = pos / 8;
            let off = pos % 8;
            let take = left.min(8 - off);
            out[byte] |= ((v & ((1 << take) - 1)) << off) as u8;
            v >>= take;
            pos += take;
            left -= take;
        }
    }
    out
}

/// Inverse of [`pack`]. Rejects out-of-range values and nonzero padding.
pub fn unpack(field: &BaseField, bytes: &[u8], count: usize) -> Result<Vec<u16>> {
    let need = packed_len(field, count);
    if bytes.len() < need {
        return Err(Error::Truncated {
            expected: need,
            got: bytes.len(),
        });
    }
    let bits = field.bits_per_elem() as usize;
    let mut out = Vec::with_capacity(count);
    let mut pos = 0usize;
    for _ in 0..count {
        let mut v = 0u32;
        let mut got = 0;
        while got < bits {
            let byte = pos / 8;
            let off = pos % 8;
            let take = (bits - got).min(8 - off);
            let chunk = (bytes[byte] as u32 >> off) & ((1 << take) - 1);
            v |= chunk << got;
            got += take;
            pos += take;
        }
        if v >= field.q() {
            return Err(Error::Malformed(format!("field element {v} out of range")));
        }
        out.push(v as u16);
    }
    if !pos.is_multiple_of(8) && bytes[pos / 8] >> (pos % 8) != 0 {
        return Err(Error::Malformed("nonzero padding bits".into()));
    }
    Ok(out)
}

/// Little-endian cursor over a byte slice.
pub(crate) struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, pos: 0 }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(Error::Truncated {
                expected: self.pos + n,
                got: self.bytes.len(),
            });
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub(crate) fn rest(&mut self) -> &'a [u8] {
        let s = &self.bytes[self.pos..];
        self.pos = self.bytes.len();
        s
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::Malformed(format!(
                "{} trailing bytes",
                self.bytes.len() - self.pos
            )));
        }
        Ok(())
    }
}
