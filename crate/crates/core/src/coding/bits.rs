use crate::error::{Error, Result};

/// Packed bit sequence, most significant bit first within each byte.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bitstream {
    bytes: Vec<u8>,
    len: u64,
}

impl Bitstream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        let offset = (self.len % 8) as u32;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("pushed above") |= 0x80 >> offset;
        }
        self.len += 1;
    }

    pub fn extend_bits(&mut self, bits: &[bool]) {
        for &b in bits {
            self.push(b);
        }
    }

    pub fn get(&self, i: u64) -> Option<bool> {
        (i < self.len).then(|| self.bytes[(i / 8) as usize] & (0x80 >> (i % 8)) != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i).expect("in range"))
    }

    /// Wire form: big-endian `u64` count of valid bits, then the packed bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.bytes.len());
        out.extend_from_slice(&self.len.to_be_bytes());
        out.extend_from_slice(&self.bytes);
        out
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        let (head, body) = data
            .split_first_chunk::<8>()
            .ok_or_else(|| Error::MalformedStream("missing length prefix".into()))?;
        let len = u64::from_be_bytes(*head);
        if len.div_ceil(8) != body.len() as u64 {
            return Err(Error::MalformedStream(format!(
                "{len} bits need {} bytes, found {}",
                len.div_ceil(8),
                body.len()
            )));
        }
        let mut bytes = body.to_vec();
        if len % 8 != 0 {
            // Padding bits are not part of the stream.
            *bytes.last_mut().expect("non-empty") &= !(0xffu8 >> (len % 8));
        }
        Ok(Bitstream { bytes, len })
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut b = Bitstream::new();
        for c in s.chars() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                _ => return Err(Error::MalformedStream(format!("bad bit character {c:?}"))),
            }
        }
        Ok(b)
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_is_msb_first() {
        let b = Bitstream::from_bit_str("1010000011").unwrap();
        assert_eq!(
            b.to_bytes(),
            vec![0, 0, 0, 0, 0, 0, 0, 10, 0b1010_0000, 0b1100_0000]
        );
        assert_eq!(Bitstream::from_bytes(&b.to_bytes()).unwrap(), b);
    }

    #[test]
    fn wire_errors() {
        assert!(Bitstream::from_bytes(&[0, 0, 0]).is_err());
        assert!(Bitstream::from_bytes(&[0, 0, 0, 0, 0, 0, 0, 9, 0xff]).is_err());
        assert!(Bitstream::from_bit_str("012").is_err());
    }
}
