//! Bit-packed spin configurations.
//!
//! A configuration of `n` spins (`n <= 512`) is stored one bit per spin:
//! bit 0 means `s = +1` (up), bit 1 means `s = -1` (down). Bits beyond
//! position `n-1` are always zero. Diagonal matrix elements and flip
//! enumeration reduce to shifts, xors and popcounts on the packed words.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_SPINS: usize = 512;
const WORD_BITS: usize = 64;
const WORDS: usize = MAX_SPINS / WORD_BITS;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    n: u16,
    words: [u64; WORDS],
}

impl SpinConfig {
    /// All spins up (all bits zero).
    pub fn all_up(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_SPINS {
            return Err(Error::constraint(format!(
                "spin count {n} outside 1..={MAX_SPINS}"
            )));
        }
        Ok(SpinConfig {
            n: n as u16,
            words: [0; WORDS],
        })
    }

    /// Configuration from a basis-state index (bit i of `index` = spin i); `n <= 64`.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        let mut c = Self::all_up(n)?;
        if n > WORD_BITS {
            return Err(Error::constraint(
                "from_index only supports n <= 64".to_string(),
            ));
        }
        c.words[0] = index & Self::mask_last(n, 0);
        debug_assert!(n == WORD_BITS || index < (1u64 << n));
        Ok(c)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut c = Self::all_up(n)?;
        for w in 0..Self::words_for(n) {
            c.words[w] = rng.random::<u64>() & Self::mask_last(n, w);
        }
        Ok(c)
    }

    #[inline]
    fn words_for(n: usize) -> usize {
        n.div_ceil(WORD_BITS)
    }

    /// Mask keeping only valid bits of word `w` for an `n`-spin system.
    #[inline]
    fn mask_last(n: usize, w: usize) -> u64 {
        let full_words = n / WORD_BITS;
        if w < full_words {
            u64::MAX
        } else {
            let rem = n % WORD_BITS;
            if w == full_words && rem > 0 {
                (1u64 << rem) - 1
            } else {
                0
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.n());
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Spin value `s_i = +1` for bit 0, `-1` for bit 1.
    #[inline]
    pub fn spin<T: Scalar>(&self, i: usize) -> T {
        if self.bit(i) {
            -T::one()
        } else {
            T::one()
        }
    }

    #[inline]
    pub fn spin_i32(&self, i: usize) -> i32 {
        1 - 2 * (self.bit(i) as i32)
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.n());
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    #[inline]
    pub fn flipped(&self, i: usize) -> Self {
        let mut c = *self;
        c.flip(i);
        c
    }

    /// Basis-state index for table lookups; requires `n <= 64`.
    #[inline]
    pub fn index(&self) -> usize {
        debug_assert!(self.n() <= WORD_BITS);
        self.words[0] as usize
    }

    pub fn popcount(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Number of antiparallel nearest-neighbor bonds on the periodic ring:
    /// `POPCOUNT(XOR(S, ROT(S, 1)))` with the rotation confined to the low
    /// `n` bits. A plain shift would drop the wrap-around bond.
    pub fn antiparallel_nn_periodic(&self) -> u32 {
        let n = self.n();
        let nw = Self::words_for(n);
        // rotated-by-one view: bit i of rot = bit (i+1) mod n of self
        let mut rot = [0u64; WORDS];
        for w in 0..nw {
            let hi = if w + 1 < nw { self.words[w + 1] } else { 0 };
            rot[w] = (self.words[w] >> 1) | (hi << (WORD_BITS - 1));
        }
        let top = n - 1;
        rot[top / WORD_BITS] |= (self.words[0] & 1) << (top % WORD_BITS);
        (0..nw).map(|w| (rot[w] ^ self.words[w]).count_ones()).sum()
    }

    /// Positions where `self` and `other` differ (ascending).
    pub fn diff_sites(&self, other: &SpinConfig) -> Vec<usize> {
        debug_assert_eq!(self.n, other.n);
        let mut out = Vec::new();
        for w in 0..Self::words_for(self.n()) {
            let mut x = self.words[w] ^ other.words[w];
            while x != 0 {
                let b = x.trailing_zeros() as usize;
                out.push(w * WORD_BITS + b);
                x &= x - 1;
            }
        }
        out
    }
}

impl fmt::Debug for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinConfig({self})")
    }
}

impl fmt::Display for SpinConfig {
    /// Bit string with site 1 leftmost, e.g. `01100` for up,down,down,up,up.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            write!(f, "{}", self.bit(i) as u8)?;
        }
        Ok(())
    }
}
