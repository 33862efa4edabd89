//! Exact vectors and axis-aligned boxes.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    pub fn norm2(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, a| acc + a * a)
    }

    /// Squared Euclidean distance.
    pub fn dist2(&self, other: &Self) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| {
                let d = a - b;
                acc + &d * &d
            })
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

/// Closed axis-aligned box `[lower, upper]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AxisBox {
    lower: RationalVector,
    upper: RationalVector,
}

impl AxisBox {
    pub fn new(lower: RationalVector, upper: RationalVector) -> Result<Self> {
        lower.check_dim(upper.dim())?;
        if lower.dim() == 0 {
            return Err(Error::Invalid("box of dimension 0".into()));
        }
        if lower.0.iter().zip(&upper.0).any(|(l, u)| l > u) {
            return Err(Error::Invalid(format!(
                "box lower {lower} exceeds upper {upper}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub(crate) fn new_unchecked(lower: RationalVector, upper: RationalVector) -> Self {
        debug_assert!(lower.0.iter().zip(&upper.0).all(|(l, u)| l <= u));
        Self { lower, upper }
    }

    pub fn point(p: &RationalVector) -> Self {
        Self::new_unchecked(p.clone(), p.clone())
    }

    pub fn lower(&self) -> &RationalVector {
        &self.lower
    }

    pub fn upper(&self) -> &RationalVector {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn center(&self) -> RationalVector {
        let half = Rational::new(1.into(), 2.into());
        self.lower.add(&self.upper).scale(&half)
    }

    pub fn contains_point(&self, p: &RationalVector) -> bool {
        (0..self.dim()).all(|j| self.lower.0[j] <= p.0[j] && p.0[j] <= self.upper.0[j])
    }

    pub fn contains_box(&self, other: &AxisBox) -> bool {
        (0..self.dim())
            .all(|j| self.lower.0[j] <= other.lower.0[j] && other.upper.0[j] <= self.upper.0[j])
    }

    /// Squared distance between the two boxes (zero when they meet).
    pub fn dist2(&self, other: &AxisBox) -> Rational {
        let mut acc = Rational::zero();
        for j in 0..self.dim() {
            let gap = if other.lower.0[j] > self.upper.0[j] {
                &other.lower.0[j] - &self.upper.0[j]
            } else if self.lower.0[j] > other.upper.0[j] {
                &self.lower.0[j] - &other.upper.0[j]
            } else {
                continue;
            };
            acc += &gap * &gap;
        }
        acc
    }

    /// Squared distance from a point to the box.
    pub fn dist2_point(&self, p: &RationalVector) -> Rational {
        self.dist2(&AxisBox::point(p))
    }

    /// Squared length of the diagonal.
    pub fn diag2(&self) -> Rational {
        self.lower.dist2(&self.upper)
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &AxisBox) -> AxisBox {
        let lower = self
            .lower
            .0
            .iter()
            .zip(&other.lower.0)
            .map(|(a, b)| a.min(b).clone())
            .collect();
        let upper = self
            .upper
            .0
            .iter()
            .zip(&other.upper.0)
            .map(|(a, b)| a.max(b).clone())
            .collect();
        AxisBox::new_unchecked(RationalVector(lower), RationalVector(upper))
    }

    pub fn vertices(&self) -> Vec<RationalVector> {
        let d = self.dim();
        (0..(1usize << d))
            .map(|mask| {
                RationalVector(
                    (0..d)
                        .map(|j| {
                            if mask >> j & 1 == 1 {
                                self.upper.0[j].clone()
                            } else {
                                self.lower.0[j].clone()
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }

    /// Half-widths per axis.
    pub fn half_widths(&self) -> RationalVector {
        let half = Rational::new(1.into(), 2.into());
        self.upper.sub(&self.lower).scale(&half)
    }
}

impl fmt::Debug for AxisBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AxisBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.dim() {
            if j > 0 {
                write!(f, "x")?;
            }
            write!(
                f,
                "[{}, {}]",
                format_rational(&self.lower.0[j]),
                format_rational(&self.upper.0[j])
            )?;
        }
        Ok(())
    }
}
