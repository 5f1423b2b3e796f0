use rand::distributions::{Bernoulli, Distribution};
use rand::Rng;

use crate::error::{Error, Result};
use crate::report::BitVector;
use crate::schema::PrivacyBudget;

/// Optimized unary encoding: a set bit stays set with `p = 1/2`, a clear
/// bit is set with `q = 1 / (e^ε + 1)`.
#[derive(Debug, Clone)]
pub struct UeParams {
    epsilon: f64,
    p: f64,
    q: f64,
    keep_one: Bernoulli,
    flip_zero: Bernoulli,
}

impl UeParams {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Perturbs the one-hot encoding of `hot` (or the zero vector for
    /// `None`) into `out`, which is resized to `k` bits.
    #[inline]
    pub fn perturb_one_hot_into<R: Rng + ?Sized>(
        &self,
        hot: Option<u32>,
        k: usize,
        rng: &mut R,
        out: &mut BitVector,
    ) {
        out.reset(k);
        let bits = out.bits_mut();
        for bit in bits.iter_mut() {
            *bit = self.flip_zero.sample(rng);
        }
        if let Some(v) = hot {
            bits[v as usize] = self.keep_one.sample(rng);
        }
    }
}

pub fn ue_params(epsilon: f64) -> Result<UeParams> {
    let e = PrivacyBudget::new(epsilon)?.exp();
    let p = 0.5;
    let q = 1.0 / (e + 1.0);
    Ok(UeParams {
        epsilon,
        p,
        q,
        keep_one: Bernoulli::new(p).expect("p in [0, 1]"),
        flip_zero: Bernoulli::new(q).expect("q in [0, 1]"),
    })
}

/// One-hot encoding of `value` over `k` bits.
pub fn oue_encode(value: u32, k: usize) -> Result<BitVector> {
    if value as usize >= k {
        return Err(Error::ValueOutOfRange {
            attribute: 0,
            value,
            k,
        });
    }
    let mut bits = BitVector::zeros(k);
    bits.set(value as usize, true);
    Ok(bits)
}

/// Each output bit is independently 1 with probability `p` if the input
/// bit is set and `q` otherwise.
pub fn oue_perturb<R: Rng + ?Sized>(bits: &BitVector, params: &UeParams, rng: &mut R) -> BitVector {
    let out = bits
        .bits()
        .iter()
        .map(|&b| {
            if b {
                params.keep_one.sample(rng)
            } else {
                params.flip_zero.sample(rng)
            }
        })
        .collect();
    BitVector::from_bits(out)
}
