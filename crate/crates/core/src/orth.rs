//! Signed permutation matrices: the orthogonal parts the crate can represent
//! exactly.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::RationalVector;

/// Orthogonal matrix whose row `i` holds `signs[i]` in column `perm[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let d = perm.len();
        if d == 0 {
            return Err(Error::Invalid("empty signed permutation".into()));
        }
        if signs.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: signs.len(),
            });
        }
        let mut seen = vec![false; d];
        for &p in &perm {
            if p >= d || seen[p] {
                return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Invalid(format!("signs {signs:?} must be 1 or -1")));
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            perm: (0..dim).collect(),
            signs: vec![1; dim],
        }
    }

    /// `x -> -x`.
    pub fn negation(dim: usize) -> Self {
        Self {
            perm: (0..dim).collect(),
            signs: vec![-1; dim],
        }
    }

    /// Counter-clockwise planar rotation by `quarter_turns * pi/2`.
    pub fn rotation_2d(quarter_turns: u32) -> Self {
        match quarter_turns % 4 {
            0 => Self::identity(2),
            // (x, y) -> (-y, x)
            1 => Self {
                perm: vec![1, 0],
                signs: vec![-1, 1],
            },
            2 => Self::negation(2),
            // (x, y) -> (y, -x)
            _ => Self {
                perm: vec![1, 0],
                signs: vec![1, -1],
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn apply(&self, v: &RationalVector) -> RationalVector {
        RationalVector(
            self.perm
                .iter()
                .zip(&self.signs)
                .map(|(&p, &s)| if s < 0 { -&v.0[p] } else { v.0[p].clone() })
                .collect(),
        )
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let signs = self
            .perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| s * other.signs[p])
            .collect();
        Self { perm, signs }
    }

    pub fn inverse(&self) -> Self {
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut signs = vec![1; d];
        for (i, (&p, &s)) in self.perm.iter().zip(&self.signs).enumerate() {
            perm[p] = i;
            signs[p] = s;
        }
        Self { perm, signs }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::identity(self.dim());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Smallest `k >= 1` with `self^k = I`.
    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut acc = self.clone();
        while !acc.is_identity() {
            acc = acc.compose(self);
            k += 1;
        }
        k
    }

    /// Dense integer matrix, row-major.
    pub fn to_matrix(&self) -> Vec<Vec<i8>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut row = vec![0; d];
                row[self.perm[i]] = self.signs[i];
                row
            })
            .collect()
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPermutation{:?}", self.to_matrix())
    }
}
