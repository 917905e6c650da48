use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anisotropy exponents `p = (p_1, ..., p_N)`, each strictly above 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExponentVector(Vec<f64>);

impl ExponentVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidExponent("exponent vector is empty".into()));
        }
        for (i, &pi) in p.iter().enumerate() {
            if !(pi > 1.0 && pi.is_finite()) {
                return Err(Error::InvalidExponent(format!(
                    "p_i must exceed 1 (p_{} = {pi})",
                    i + 1
                )));
            }
        }
        Ok(ExponentVector(p))
    }

    pub fn uniform(p: f64, n: usize) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// Conjugate exponents `q_i = p_i / (p_i - 1)`.
    pub fn conjugates(&self) -> Vec<f64> {
        self.0.iter().map(|&p| p / (p - 1.0)).collect()
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::InvalidExponent(format!(
                "expected {n} exponents (first-stratum dimension), got {}",
                self.0.len()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for ExponentVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ExponentVector> for Vec<f64> {
    fn from(p: ExponentVector) -> Self {
        p.0
    }
}
