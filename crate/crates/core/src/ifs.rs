//! Iterated function systems, words over the alphabet `1..=m`, cylinders
//! and covers of the attractor.
//!
//! The attractor itself is never materialised. Everything below works with
//! the invariant box `B` (`phi_i(B) ⊆ B` for all `i`) and with exact points
//! of the form `phi_w(x_i)`, where `x_i` is the fixed point of `phi_i`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, RationalVector};
use crate::orth::SignedPermutation;
use crate::rational::Rational;
use crate::similitude::Similitude;

/// Upper bound on the number of cells a single cover or point list may hold.
pub const ITEM_CAP: usize = 1 << 21;

pub(crate) fn check_cap(base: usize, exp: usize) -> Result<usize> {
    let requested = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if requested > ITEM_CAP as u128 {
        Err(Error::ResourceLimit {
            requested,
            cap: ITEM_CAP,
        })
    } else {
        Ok(requested as usize)
    }
}

/// A finite word over the alphabet `1..=m`. The empty word is the identity
/// cylinder.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letter(a: u32) -> Self {
        Self(vec![a])
    }

    pub fn repeat(a: u32, n: usize) -> Self {
        Self(vec![a; n])
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, a: u32) -> Word {
        let mut v = self.0.clone();
        v.push(a);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n.min(self.len())..].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Neither word is a prefix of the other, so the two cylinders are
    /// disjoint under strong separation.
    pub fn incomparable(&self, other: &Word) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    /// First index where the words differ, if neither is a prefix of the other.
    pub fn divergence(&self, other: &Word) -> Option<usize> {
        self.0.iter().zip(&other.0).position(|(a, b)| a != b)
    }

    pub fn check_alphabet(&self, m: usize) -> Result<()> {
        match self.0.iter().find(|&&a| a == 0 || a as usize > m) {
            Some(&letter) => Err(Error::LetterOutOfRange {
                letter,
                alphabet: m,
            }),
            None => Ok(()),
        }
    }

    /// All words of length `n` over `1..=m` in lexicographic order.
    pub fn all(m: usize, n: usize) -> Result<Vec<Word>> {
        let count = check_cap(m, n)?;
        let mut out = Vec::with_capacity(count);
        let mut cur = vec![1u32; n];
        loop {
            out.push(Word(cur.clone()));
            let mut pos = n;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                if (cur[pos] as usize) < m {
                    cur[pos] += 1;
                    for c in cur.iter_mut().skip(pos + 1) {
                        *c = 1;
                    }
                    break;
                }
            }
        }
    }

    /// Re-express a word over the `m^p` alphabet of a powered system as a
    /// word over the base alphabet `1..=m`.
    pub fn expand_power(&self, m: usize, p: usize) -> Word {
        let mut out = Vec::with_capacity(self.len() * p);
        for &a in &self.0 {
            let mut idx = (a - 1) as usize;
            let mut digits = vec![0u32; p];
            for d in digits.iter_mut().rev() {
                *d = (idx % m) as u32 + 1;
                idx /= m;
            }
            out.extend(digits);
        }
        Word(out)
    }

    /// Inverse of [`Word::expand_power`]; `None` if the length is not a
    /// multiple of `p`.
    pub fn contract_power(&self, m: usize, p: usize) -> Option<Word> {
        if p == 0 || !self.len().is_multiple_of(p) {
            return None;
        }
        Some(Word(
            self.0
                .chunks(p)
                .map(|chunk| {
                    chunk
                        .iter()
                        .fold(0usize, |acc, &a| acc * m + (a as usize - 1))
                        as u32
                        + 1
                })
                .collect(),
        ))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&a| a <= 9) {
            for a in &self.0 {
                write!(f, "{a}")?;
            }
        } else {
            for (i, a) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Digits (`"87"`) or dot-separated letters (`"12.3"`); `""` or `"ε"` is
    /// the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Word::empty());
        }
        let parse = |t: &str| {
            t.parse::<u32>()
                .ok()
                .filter(|&a| a > 0)
                .ok_or_else(|| Error::Parse(format!("bad letter {t:?} in word {s:?}")))
        };
        let letters = if s.contains('.') {
            s.split('.').map(parse).collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| parse(&c.to_string()))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(letters))
    }
}

/// An ordered list of `m >= 2` contracting similitudes together with a
/// verified invariant box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ifs {
    maps: Vec<Similitude>,
    invariant: AxisBox,
    fixed_points: Vec<RationalVector>,
}

impl Ifs {
    /// Builds the system and derives an invariant box from the maps.
    pub fn new(maps: Vec<Similitude>) -> Result<Self> {
        let fixed_points = Self::validate(&maps)?;
        let invariant = compute_invariant_box(&maps, &fixed_points);
        Ok(Self {
            maps,
            invariant,
            fixed_points,
        })
    }

    /// Builds the system with a caller-supplied box, which must satisfy
    /// `phi_i(B) ⊆ B` exactly for every map.
    pub fn with_box(maps: Vec<Similitude>, invariant: AxisBox) -> Result<Self> {
        let fixed_points = Self::validate(&maps)?;
        invariant.lower().check_dim(maps[0].dim())?;
        if let Some(i) = maps
            .iter()
            .position(|s| !invariant.contains_box(&s.eval_box(&invariant)))
        {
            return Err(Error::Invalid(format!(
                "box {invariant} is not invariant: map {} sends it outside",
                i + 1
            )));
        }
        Ok(Self {
            maps,
            invariant,
            fixed_points,
        })
    }

    fn validate(maps: &[Similitude]) -> Result<Vec<RationalVector>> {
        if maps.len() < 2 {
            return Err(Error::Invalid(format!(
                "an IFS needs at least 2 maps, got {}",
                maps.len()
            )));
        }
        let d = maps[0].dim();
        maps.iter()
            .map(|s| {
                s.trans().check_dim(d)?;
                s.fixed_point()
            })
            .collect()
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }

    pub fn map(&self, letter: u32) -> &Similitude {
        &self.maps[letter as usize - 1]
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn invariant_box(&self) -> &AxisBox {
        &self.invariant
    }

    pub fn fixed_points(&self) -> &[RationalVector] {
        &self.fixed_points
    }

    /// The shared contraction ratio, if all maps agree.
    pub fn common_ratio(&self) -> Option<&Rational> {
        let r = self.maps[0].ratio();
        self.maps.iter().all(|s| s.ratio() == r).then_some(r)
    }

    /// The shared orthogonal part, if all maps agree.
    pub fn common_orth(&self) -> Option<&SignedPermutation> {
        let o = self.maps[0].orth();
        self.maps.iter().all(|s| s.orth() == o).then_some(o)
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = u32> + Clone {
        1..=self.maps.len() as u32
    }

    /// `phi_{w_1} ∘ ... ∘ phi_{w_n}`.
    pub fn cylinder(&self, w: &Word) -> Result<Similitude> {
        w.check_alphabet(self.len())?;
        Ok(self.cylinder_unchecked(w))
    }

    pub(crate) fn cylinder_unchecked(&self, w: &Word) -> Similitude {
        w.letters()
            .iter()
            .fold(Similitude::identity(self.dim()), |acc, &a| {
                acc.then_inner(self.map(a))
            })
    }

    /// `phi_w(B)`.
    pub fn cell_box(&self, w: &Word) -> Result<AxisBox> {
        Ok(self.cylinder(w)?.eval_box(&self.invariant))
    }

    /// `{(w, phi_w(B)) : w ∈ Λ^depth}` in lexicographic order.
    pub fn cover(&self, depth: usize) -> Result<Vec<(Word, AxisBox)>> {
        Ok(self
            .cylinders(depth)?
            .into_iter()
            .map(|(w, s)| {
                let b = s.eval_box(&self.invariant);
                (w, b)
            })
            .collect())
    }

    /// `{(w, phi_w) : w ∈ Λ^depth}` in lexicographic order.
    pub fn cylinders(&self, depth: usize) -> Result<Vec<(Word, Similitude)>> {
        check_cap(self.len(), depth)?;
        let mut level = vec![(Word::empty(), Similitude::identity(self.dim()))];
        for _ in 0..depth {
            level = level
                .iter()
                .flat_map(|(w, s)| {
                    self.letters()
                        .map(move |a| (w.push(a), s.then_inner(self.map(a))))
                })
                .collect();
        }
        Ok(level)
    }

    /// Exact attractor points `phi_w(x_i)` for `w ∈ Λ^depth` and every fixed
    /// point `x_i`, labelled by the word `w·i` (the point is the limit of the
    /// infinite word `w i i i ...`).
    pub fn attractor_points(&self, depth: usize) -> Result<Vec<(Word, RationalVector)>> {
        check_cap(self.len(), depth + 1)?;
        Ok(self
            .cylinders(depth)?
            .iter()
            .flat_map(|(w, s)| {
                self.letters()
                    .zip(&self.fixed_points)
                    .map(move |(a, x)| (w.push(a), s.eval(x)))
            })
            .collect())
    }

    /// The exact point named by a word `w·i`: `phi_w(x_i)`.
    pub fn point_of(&self, label: &Word) -> Result<RationalVector> {
        label.check_alphabet(self.len())?;
        let last = label
            .letters()
            .last()
            .copied()
            .ok_or_else(|| Error::Invalid("point label must be non-empty".into()))?;
        Ok(self
            .cylinder_unchecked(label)
            .eval(&self.fixed_points[last as usize - 1]))
    }

    /// The system `{phi_w : w ∈ Λ^p}` with letters ordered lexicographically.
    pub fn power_system(&self, p: usize) -> Result<Ifs> {
        if p == 0 {
            return Err(Error::Invalid("power must be at least 1".into()));
        }
        let maps = self.cylinders(p)?.into_iter().map(|(_, s)| s).collect();
        Ifs::with_box(maps, self.invariant.clone())
    }
}

/// Cube centred at the mean of the fixed points with half-width
/// `max_i |phi_i(c) - c|_inf / (1 - r_i)`; then `phi_i(B) ⊆ B` for every map.
fn compute_invariant_box(maps: &[Similitude], fixed_points: &[RationalVector]) -> AxisBox {
    let d = maps[0].dim();
    let count = Rational::from_integer((fixed_points.len() as i64).into());
    let center = fixed_points
        .iter()
        .fold(RationalVector::zeros(d), |acc, x| acc.add(x))
        .scale(&count.recip());
    let half = maps
        .iter()
        .map(|s| {
            let dev = s
                .eval(&center)
                .sub(&center)
                .0
                .iter()
                .map(|c| c.abs())
                .max()
                .unwrap_or_else(Rational::zero);
            dev / (Rational::one() - s.ratio())
        })
        .max()
        .unwrap_or_else(Rational::zero);
    let h = RationalVector(vec![half; d]);
    AxisBox::new_unchecked(center.sub(&h), center.add(&h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, rat};

    #[test]
    fn cantor_cylinder_12() {
        let c = fixtures::cantor();
        let s = c.cylinder(&"12".parse().unwrap()).unwrap();
        assert_eq!(
            s,
            Similitude::scaling(rat(1, 9), RationalVector(vec![rat(2, 9)])).unwrap()
        );
        assert_eq!(c.cylinder(&Word::letter(2)).unwrap(), c.maps()[1]);
        assert!(matches!(
            c.cylinder(&Word::letter(3)),
            Err(Error::LetterOutOfRange { letter: 3, .. })
        ));
    }

    #[test]
    fn cantor_box_and_cover() {
        let c = fixtures::cantor();
        let b = c.invariant_box();
        assert_eq!(b.lower().0, vec![int(0)]);
        assert_eq!(b.upper().0, vec![int(1)]);
        let cover = c.cover(1).unwrap();
        assert_eq!(cover.len(), 2);
        assert_eq!(cover[0].1.upper().0, vec![rat(1, 3)]);
        assert_eq!(cover[1].1.lower().0, vec![rat(2, 3)]);
        assert_eq!(c.cover(0).unwrap(), vec![(Word::empty(), b.clone())]);
    }

    #[test]
    fn cantor_points() {
        let c = fixtures::cantor();
        let pts: Vec<_> = c
            .attractor_points(1)
            .unwrap()
            .into_iter()
            .map(|(_, p)| p.0[0].clone())
            .collect();
        assert_eq!(pts, vec![int(0), rat(1, 3), rat(2, 3), int(1)]);
        assert_eq!(c.attractor_points(0).unwrap().len(), 2);
    }

    #[test]
    fn single_map_rejected() {
        let c = fixtures::cantor();
        assert!(Ifs::new(vec![c.maps()[0].clone()]).is_err());
    }

    #[test]
    fn non_invariant_box_rejected() {
        let c = fixtures::cantor();
        let b = AxisBox::new(
            RationalVector(vec![rat(1, 10)]),
            RationalVector(vec![int(1)]),
        )
        .unwrap();
        assert!(Ifs::with_box(c.maps().to_vec(), b).is_err());
    }

    #[test]
    fn word_codecs() {
        let w: Word = "1211".parse().unwrap();
        assert_eq!(w.letters(), &[1, 2, 1, 1]);
        assert_eq!("10.2".parse::<Word>().unwrap().letters(), &[10, 2]);
        assert_eq!(Word::new(vec![10, 2]).to_string(), "10.2");
        assert!("1a".parse::<Word>().is_err());
        let p = Word::new(vec![2, 1]);
        assert_eq!(p.expand_power(2, 2).to_string(), "1211");
        assert_eq!(p.expand_power(2, 2).contract_power(2, 2), Some(p));
        assert_eq!(Word::all(2, 2).unwrap().len(), 4);
        assert_eq!(Word::all(3, 0).unwrap(), vec![Word::empty()]);
    }
}
