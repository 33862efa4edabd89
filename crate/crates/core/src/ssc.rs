//! Strong separation: certification, refutation by coinciding exact points,
//! and the similarity dimension of homogeneous separated systems.

use num_traits::{One, Zero};

use crate::bounds::{min_gap, GapBounds};
use crate::error::{Error, Result};
use crate::geometry::RationalVector;
use crate::ifs::{Ifs, Word};
use crate::rational::{to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SscResult {
    /// All level-1 pieces are a positive distance apart; `gap.lower > 0`.
    Certified {
        gap: GapBounds,
    },
    /// Two distinct level-1 pieces share the exact point `point`, named by
    /// the labels in `words` (`w·i` is `phi_w(x_i)`).
    Violated {
        words: (Word, Word),
        point: RationalVector,
    },
    Unknown {
        depth: usize,
        gap: GapBounds,
    },
}

impl SscResult {
    pub fn is_certified(&self) -> bool {
        matches!(self, SscResult::Certified { .. })
    }
}

/// Refines the cover up to `max_depth` levels below the level-1 cells.
pub fn check_ssc(ifs: &Ifs, max_depth: usize) -> SscResult {
    let mut last = None;
    for depth in 0..=max_depth {
        let (gap, _) = min_gap(ifs, depth);
        if gap.lower > Rational::zero() {
            return SscResult::Certified { gap };
        }
        if gap.upper.is_zero() {
            let (a, b) = gap.witness.clone();
            let pa = ifs.point_of(&a).expect("labels come from the system");
            let pb = ifs.point_of(&b).expect("labels come from the system");
            debug_assert_eq!(pa, pb);
            debug_assert_ne!(a.first(), b.first());
            return SscResult::Violated {
                words: (a, b),
                point: pa,
            };
        }
        let reached = gap.depth;
        last = Some(gap);
        if reached < depth {
            // Refinement hit the frontier cap; deeper calls cannot do better.
            break;
        }
    }
    let gap = last.expect("at least one round");
    SscResult::Unknown {
        depth: gap.depth,
        gap,
    }
}

/// Similarity dimension `log m / log(1/r)` of a homogeneous system, kept
/// symbolically as `(m, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dimension {
    pub maps: usize,
    pub ratio: Rational,
}

impl Dimension {
    /// Floating-point value, for display only.
    pub fn approx(&self) -> f64 {
        (self.maps as f64).ln() / (1.0 / to_f64(&self.ratio)).ln()
    }

    /// Whether the dimension is exactly one (`m r = 1`).
    pub fn is_one(&self) -> bool {
        Rational::from_integer((self.maps as i64).into()) * &self.ratio == Rational::one()
    }
}

pub fn dimension(ifs: &Ifs, depth: usize) -> Result<Dimension> {
    let ratio = ifs.common_ratio().ok_or(Error::NotHomogeneous)?.clone();
    if !check_ssc(ifs, depth).is_certified() {
        return Err(Error::SeparationNotCertified);
    }
    Ok(Dimension {
        maps: ifs.len(),
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::rat;

    #[test]
    fn cantor_certified_with_exact_gap() {
        match check_ssc(&fixtures::cantor(), 1) {
            SscResult::Certified { gap } => {
                assert_eq!(gap.lower, rat(1, 9));
                assert_eq!(gap.upper, rat(1, 9));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn halves_violated_at_one_half() {
        match check_ssc(&fixtures::halves(), 3) {
            SscResult::Violated { point, words } => {
                assert_eq!(point, RationalVector(vec![rat(1, 2)]));
                assert_ne!(words.0.first(), words.1.first());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn example25_certified() {
        match check_ssc(&fixtures::example25(), 2) {
            SscResult::Certified { gap } => assert!(gap.lower >= rat(1, 16)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimensions() {
        let d = dimension(&fixtures::cantor(), 2).unwrap();
        assert!((d.approx() - 0.6309297535714574).abs() < 1e-12);
        let d = dimension(&fixtures::example25(), 2).unwrap();
        assert!((d.approx() - 9f64.ln() / 6f64.ln()).abs() < 1e-12);
        assert_eq!(
            dimension(&fixtures::halves(), 2),
            Err(Error::SeparationNotCertified)
        );
    }
}
