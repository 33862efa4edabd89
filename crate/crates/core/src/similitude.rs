//! Exact similitudes `x -> r O x + a` and their algebra.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, RationalVector};
use crate::orth::SignedPermutation;
use crate::rational::{format_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Similitude {
    ratio: Rational,
    orth: SignedPermutation,
    trans: RationalVector,
}

impl Similitude {
    pub fn new(ratio: Rational, orth: SignedPermutation, trans: RationalVector) -> Result<Self> {
        if !ratio.is_positive() {
            return Err(Error::Invalid(format!(
                "similitude ratio must be positive, got {}",
                format_rational(&ratio)
            )));
        }
        trans.check_dim(orth.dim())?;
        Ok(Self { ratio, orth, trans })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            ratio: Rational::one(),
            orth: SignedPermutation::identity(dim),
            trans: RationalVector::zeros(dim),
        }
    }

    /// `x -> r x + a` with identity orthogonal part.
    pub fn scaling(ratio: Rational, trans: RationalVector) -> Result<Self> {
        let d = trans.dim();
        Self::new(ratio, SignedPermutation::identity(d), trans)
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn orth(&self) -> &SignedPermutation {
        &self.orth
    }

    pub fn trans(&self) -> &RationalVector {
        &self.trans
    }

    pub fn dim(&self) -> usize {
        self.trans.dim()
    }

    pub fn is_contracting(&self) -> bool {
        self.ratio < Rational::one()
    }

    pub fn is_identity(&self) -> bool {
        self.ratio.is_one() && self.orth.is_identity() && self.trans.0.iter().all(Zero::is_zero)
    }

    fn check_same_dim(&self, other: &Similitude) -> Result<()> {
        other.trans.check_dim(self.dim())
    }

    /// `x -> self(other(x))`.
    pub fn compose(&self, other: &Similitude) -> Result<Similitude> {
        self.check_same_dim(other)?;
        Ok(self.then_inner(other))
    }

    /// Composition without the dimension check, for callers that already
    /// guarantee a shared dimension.
    pub(crate) fn then_inner(&self, inner: &Similitude) -> Similitude {
        debug_assert_eq!(self.dim(), inner.dim());
        Similitude {
            ratio: &self.ratio * &inner.ratio,
            orth: self.orth.compose(&inner.orth),
            trans: self.linear(&inner.trans).add(&self.trans),
        }
    }

    /// `r O v` (no translation).
    pub fn linear(&self, v: &RationalVector) -> RationalVector {
        self.orth.apply(v).scale(&self.ratio)
    }

    pub fn apply(&self, p: &RationalVector) -> Result<RationalVector> {
        p.check_dim(self.dim())?;
        Ok(self.eval(p))
    }

    pub(crate) fn eval(&self, p: &RationalVector) -> RationalVector {
        self.linear(p).add(&self.trans)
    }

    /// Exact image of an axis-aligned box.
    pub fn apply_box(&self, b: &AxisBox) -> Result<AxisBox> {
        b.lower().check_dim(self.dim())?;
        Ok(self.eval_box(b))
    }

    pub(crate) fn eval_box(&self, b: &AxisBox) -> AxisBox {
        let d = self.dim();
        let mut lower = Vec::with_capacity(d);
        let mut upper = Vec::with_capacity(d);
        for i in 0..d {
            let p = self.orth.perm()[i];
            let (lo, hi) = if self.orth.signs()[i] > 0 {
                (&b.lower().0[p] * &self.ratio, &b.upper().0[p] * &self.ratio)
            } else {
                (
                    -(&b.upper().0[p] * &self.ratio),
                    -(&b.lower().0[p] * &self.ratio),
                )
            };
            lower.push(lo + &self.trans.0[i]);
            upper.push(hi + &self.trans.0[i]);
        }
        AxisBox::new_unchecked(RationalVector(lower), RationalVector(upper))
    }

    /// The unique fixed point, solving `(I - rO) x = a` exactly.
    pub fn fixed_point(&self) -> Result<RationalVector> {
        if !self.is_contracting() {
            return Err(Error::NotContracting(format_rational(&self.ratio)));
        }
        let d = self.dim();
        let mut mat: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                let mut row = vec![Rational::zero(); d];
                row[i] = Rational::one();
                let p = self.orth.perm()[i];
                let entry = &self.ratio * Rational::from_integer(self.orth.signs()[i].into());
                row[p] -= entry;
                row
            })
            .collect();
        let mut rhs = self.trans.0.clone();
        solve_linear(&mut mat, &mut rhs)
            .map(RationalVector)
            .ok_or_else(|| Error::NotContracting(format_rational(&self.ratio)))
    }

    pub fn inverse(&self) -> Similitude {
        let inv_ratio = self.ratio.recip();
        let inv_orth = self.orth.inverse();
        let trans = inv_orth.apply(&self.trans).scale(&(-&inv_ratio));
        Similitude {
            ratio: inv_ratio,
            orth: inv_orth,
            trans,
        }
    }

    /// `k`-fold composition; `power(0)` is the identity.
    pub fn power(&self, k: u64) -> Similitude {
        let mut acc = Similitude::identity(self.dim());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then_inner(&base);
            }
            base = base.then_inner(&base);
            e >>= 1;
        }
        acc
    }

    pub fn orth_order(&self) -> u64 {
        self.orth.order()
    }
}

impl fmt::Debug for Similitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Similitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {}", format_rational(&self.ratio))?;
        if !self.orth.is_identity() {
            write!(f, " {:?}", self.orth.to_matrix())?;
        }
        write!(f, " x + {}", self.trans)
    }
}

/// Gauss-Jordan elimination over the rationals. Returns `None` for singular
/// systems.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_linear(
    mat: &mut [Vec<Rational>],
    rhs: &mut [Rational],
) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = mat[col][col].recip();
        for c in col..n {
            mat[col][c] = &mat[col][c] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r != col && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..n {
                    let delta = &factor * &mat[col][c];
                    mat[r][c] -= delta;
                }
                let delta = &factor * &rhs[col];
                rhs[r] -= delta;
            }
        }
    }
    Some(rhs.to_vec())
}
