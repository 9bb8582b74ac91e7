//! Published coefficient tables, embedded verbatim as data files.

use num_bigint::BigInt;
use serde::Deserialize;
use std::sync::Arc;

use ltaction::{Result, WittElem, WittParams};

#[derive(Debug, Deserialize)]
pub struct P2Golden {
    pub p: u64,
    pub f: u32,
    pub m_exp: u32,
    pub modulus_u1_exp: usize,
    pub alpha0: String,
    pub alpha1: String,
    pub coefficients: Vec<P2Coeff>,
}

#[derive(Debug, Deserialize)]
pub struct P2Coeff {
    pub n: usize,
    pub value: String,
}

pub fn p2() -> P2Golden {
    serde_json::from_str(include_str!("../data/p2_series.json"))
        .expect("embedded p=2 golden data parses")
}

#[derive(Debug, Deserialize)]
pub struct P3Golden {
    pub p: u64,
    pub f: u32,
    pub m_exp: u32,
    pub modulus_u1_exp: usize,
    pub alpha: String,
    pub coefficients: Vec<P3Coeff>,
}

/// One golden coefficient `2^pow2·(re + im·√−1)/5^pow5`.
#[derive(Debug, Deserialize)]
pub struct P3Coeff {
    pub n: usize,
    pub pow2: u32,
    pub pow5: u32,
    pub re: String,
    pub im: String,
}

pub fn p3() -> P3Golden {
    serde_json::from_str(include_str!("../data/p3_series.json"))
        .expect("embedded p=3 golden data parses")
}

impl P3Coeff {
    /// Convert the exact rational in `Z[√−1, 1/5]` to a Witt element, with
    /// `√−1` realized as the square of the order-8 Teichmüller generator.
    pub fn to_witt(&self, params: &Arc<WittParams>) -> Result<WittElem> {
        let sqrt_m1 = ltaction::witt::parse_elem("z^2", params)?;
        let re: BigInt = self.re.parse().map_err(|_| {
            ltaction::Error::Syntax(format!("bad integer in golden data: {}", self.re))
        })?;
        let im: BigInt = self.im.parse().map_err(|_| {
            ltaction::Error::Syntax(format!("bad integer in golden data: {}", self.im))
        })?;
        let base = WittElem::from_bigint(params, &re)
            .add(&WittElem::from_bigint(params, &im).mul(&sqrt_m1));
        let five_inv = WittElem::from_u64(params, 5).inv()?;
        Ok(base
            .mul(&WittElem::from_u64(params, 2).pow(self.pow2 as u64))
            .mul(&five_inv.pow(self.pow5 as u64)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_files_parse() {
        let a = p2();
        assert_eq!(a.coefficients.len(), 24);
        assert_eq!(a.coefficients[0].n, 1);
        let b = p3();
        assert_eq!(b.coefficients.len(), 8);
        assert_eq!(b.coefficients[7].n, 29);
    }
}
