//! Reduction of multi-level minimization to a submodular set-function on
//! the ring family of monotone 0/1 level indicators, with penalty weights
//! enforcing the monotone closure.

use crate::domain::{Point, ProductDomain, SetFunction, ValueOracle};
use crate::error::{Error, Result};

/// Maps 0/1 vectors over all levels back to grid points: per block, the
/// highest set level (zero when none is set).
#[derive(Debug, Clone)]
pub struct RingDecode {
    k: Vec<usize>,
}

impl RingDecode {
    pub fn ground_size(&self) -> usize {
        self.k.iter().map(|&ki| ki - 1).sum()
    }

    pub fn decode(&self, bits: &[bool]) -> Point {
        debug_assert_eq!(bits.len(), self.ground_size());
        let mut coords = Vec::with_capacity(self.k.len());
        let mut offset = 0;
        for &ki in &self.k {
            let m = ki - 1;
            let top = (0..m).rev().find(|&j| bits[offset + j]).map_or(0, |j| j + 1);
            coords.push(top);
            offset += m;
        }
        Point::new(coords)
    }
}

/// Build the penalized set-function `z -> H(decode(closure(z))) +
/// sum_i B_i <1, closure(z)_i - z_i>` on `{0,1}^r`. Minimizers of the
/// reduced function lie in the ring family and decode to minimizers of `H`
/// whenever every `B_i` dominates the block Lipschitz bound.
pub fn ring_family_reduce(
    oracle: &ValueOracle,
    domain: &ProductDomain,
    bvec: &[f64],
) -> Result<(SetFunction, RingDecode)> {
    if bvec.len() != domain.num_blocks() {
        return Err(Error::ShapeMismatch("penalty weight count".into()));
    }
    for (i, (&b, &lip)) in bvec.iter().zip(oracle.lipschitz()).enumerate() {
        if b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "penalty weight {i} must be strictly positive"
            )));
        }
        if b < lip {
            return Err(Error::InvalidParameter(format!(
                "penalty weight {i} ({b}) below the Lipschitz bound ({lip})"
            )));
        }
    }
    let decode = RingDecode {
        k: domain.block_sizes().to_vec(),
    };
    let k = decode.k.clone();
    let weights = bvec.to_vec();
    let inner = oracle.clone();
    let r = decode.ground_size();
    let set_fn = SetFunction::new(r, move |bits: &[bool]| {
        let mut coords = Vec::with_capacity(k.len());
        let mut penalty = 0.0;
        let mut offset = 0;
        for (i, &ki) in k.iter().enumerate() {
            let m = ki - 1;
            let block = &bits[offset..offset + m];
            let top = (0..m).rev().find(|&j| block[j]).map_or(0, |j| j + 1);
            let ones = block.iter().filter(|&&b| b).count();
            // The monotone closure fills every level below the top one.
            penalty += weights[i] * (top - ones) as f64;
            coords.push(top);
            offset += m;
        }
        inner.eval(&Point::new(coords)) + penalty
    });
    Ok((set_fn, decode))
}
