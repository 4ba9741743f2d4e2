use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lu::rcond;
use crate::matrix::Matrix;
use crate::random::{GaussianStream, Sampling};
use crate::scalar::Real;

/// Default reciprocal-condition threshold an instance must clear.
pub const DEFAULT_ADMISSION: f64 = 1e-3;
/// Consecutive rejected samples tolerated by [`ProblemInstance::sample`].
pub const MAX_RESAMPLES: usize = 100;

/// Reciprocal 1-norm condition numbers of the matrices the construction inverts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRconds {
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
    pub x1_minus_x2: f64,
}

impl InstanceRconds {
    fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("x1", self.x1),
            ("x2", self.x2),
            ("y1", self.y1),
            ("y2", self.y2),
            ("x1 - x2", self.x1_minus_x2),
        ]
    }

    pub fn min(&self) -> f64 {
        self.named()
            .iter()
            .map(|&(_, r)| r)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Two data matrices and their labels.
#[derive(Clone, Debug)]
pub struct ProblemInstance<T> {
    pub x1: Matrix<T>,
    pub x2: Matrix<T>,
    pub y1: Matrix<T>,
    pub y2: Matrix<T>,
    pub rconds: InstanceRconds,
}

impl<T: Real> ProblemInstance<T> {
    pub fn new(x1: Matrix<T>, x2: Matrix<T>, y1: Matrix<T>, y2: Matrix<T>) -> Result<Self> {
        let d = x1.dim();
        for m in [&x2, &y1, &y2] {
            if m.dim() != d {
                return Err(Error::Dimension {
                    expected: d,
                    found: m.dim(),
                });
            }
        }
        let rconds = InstanceRconds {
            x1: rcond(&x1).as_f64(),
            x2: rcond(&x2).as_f64(),
            y1: rcond(&y1).as_f64(),
            y2: rcond(&y2).as_f64(),
            x1_minus_x2: rcond(&(&x1 - &x2)).as_f64(),
        };
        Ok(Self {
            x1,
            x2,
            y1,
            y2,
            rconds,
        })
    }

    pub fn dim(&self) -> usize {
        self.x1.dim()
    }

    pub fn is_admitted(&self, threshold: f64) -> bool {
        self.admit(threshold).is_ok()
    }

    /// Fails with the first matrix whose rcond does not exceed `threshold`.
    pub fn admit(&self, threshold: f64) -> Result<()> {
        match self
            .rconds
            .named()
            .into_iter()
            .find(|&(_, r)| !(r > threshold))
        {
            Some((name, rcond)) => Err(Error::InstanceRejected {
                name,
                rcond,
                threshold,
            }),
            None => Ok(()),
        }
    }

    /// Draws `x1, x2, y1, y2` in that order from the stream seeded with
    /// `seed`, redrawing all four until the instance is admitted.
    /// Returns the instance and the number of draws it took.
    pub fn sample(dim: usize, seed: u64, kind: Sampling, threshold: f64) -> Result<(Self, usize)> {
        let mut stream = GaussianStream::new(seed);
        for attempt in 1..=MAX_RESAMPLES {
            let x1 = stream.matrix(dim, kind);
            let x2 = stream.matrix(dim, kind);
            let y1 = stream.matrix(dim, kind);
            let y2 = stream.matrix(dim, kind);
            let inst = Self::new(x1, x2, y1, y2)?;
            if inst.is_admitted(threshold) {
                return Ok((inst, attempt));
            }
        }
        Err(Error::MaxResample {
            attempts: MAX_RESAMPLES,
        })
    }
}
