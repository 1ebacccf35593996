//! Fixed-length bit vectors indexed by valuation number.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

// Bit pattern of variable k (k < 6) inside one 64-bit word.
const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl Bits {
    fn nwords(len: usize) -> usize {
        len.div_ceil(64).max(1)
    }

    fn tail_mask(&self) -> u64 {
        let r = self.len % 64;
        if r == 0 {
            u64::MAX
        } else {
            (1u64 << r) - 1
        }
    }

    fn normalize(mut self) -> Bits {
        let m = self.tail_mask();
        if let Some(last) = self.words.last_mut() {
            *last &= m;
        }
        if self.len == 0 {
            self.words.iter_mut().for_each(|w| *w = 0);
        }
        self
    }

    pub fn zeros(len: usize) -> Bits {
        Bits {
            words: vec![0; Self::nwords(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Bits {
        Bits {
            words: vec![u64::MAX; Self::nwords(len)],
            len,
        }
        .normalize()
    }

    /// Table of variable `k` over `n` variables: bit i is set iff bit k of i is.
    pub fn var(k: usize, n: usize) -> Bits {
        let len = 1usize << n;
        let mut words = vec![0u64; Self::nwords(len)];
        if k < 6 {
            words.iter_mut().for_each(|w| *w = VAR_MASKS[k]);
        } else {
            for (i, w) in words.iter_mut().enumerate() {
                if (i >> (k - 6)) & 1 == 1 {
                    *w = u64::MAX;
                }
            }
        }
        Bits { words, len }.normalize()
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> bool) -> Bits {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            if f(i) {
                b.set(i, true);
            }
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn all(&self) -> bool {
        *self == Bits::ones(self.len)
    }

    pub fn none(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn first_zero(&self) -> Option<usize> {
        (0..self.len).find(|&i| !self.get(i))
    }

    pub fn first_one(&self) -> Option<usize> {
        (0..self.len).find(|&i| self.get(i))
    }

    fn zip(&self, other: &Bits, op: impl Fn(u64, u64) -> u64) -> Bits {
        assert_eq!(self.len, other.len, "bit vectors of different length");
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| op(*a, *b))
                .collect(),
            len: self.len,
        }
        .normalize()
    }

    pub fn and(&self, other: &Bits) -> Bits {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Bits) -> Bits {
        self.zip(other, |a, b| a | b)
    }

    pub fn implies(&self, other: &Bits) -> Bits {
        self.zip(other, |a, b| !a | b)
    }

    pub fn iff(&self, other: &Bits) -> Bits {
        self.zip(other, |a, b| !(a ^ b))
    }

    pub fn not(&self) -> Bits {
        Bits {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        }
        .normalize()
    }

    /// Combine the two cofactors on variable `k` with `op` and write the
    /// result to both halves, so the result no longer depends on `k`.
    pub fn quantify(&self, k: usize, existential: bool) -> Bits {
        let op = |a: u64, b: u64| if existential { a | b } else { a & b };
        let mut words = self.words.clone();
        if k < 6 {
            let shift = 1u32 << k;
            let m = VAR_MASKS[k];
            for w in words.iter_mut() {
                let lo = *w & !m;
                let hi = (*w & m) >> shift;
                let c = op(lo, hi) & !m;
                *w = c | (c << shift);
            }
        } else {
            let stride = 1usize << (k - 6);
            for i in 0..words.len() {
                if (i / stride).is_multiple_of(2) && i + stride < words.len() {
                    let c = op(words[i], words[i + stride]);
                    words[i] = c;
                    words[i + stride] = c;
                }
            }
        }
        Bits {
            words,
            len: self.len,
        }
        .normalize()
    }

    /// Keep the first `len` bits.
    pub fn truncate(&self, len: usize) -> Bits {
        assert!(len <= self.len);
        Bits {
            words: self.words[..Self::nwords(len)].to_vec(),
            len,
        }
        .normalize()
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({})", self.to_bit_string())
    }
}
