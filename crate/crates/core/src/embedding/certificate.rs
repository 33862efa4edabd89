//! Embedding certificates: finite systems of exact identities
//! `g ∘ phi_i = phi_u ∘ g'` with `u` non-empty and `g'` either the identity
//! or another generator.
//!
//! If such a system is complete (one identity for every generator `g` and
//! every letter `i`) then `g(K) ⊆ K` for every generator. Unrolling the
//! identities `N` times places `g(K)` inside a union of images `phi_U(C)`,
//! `|U| >= N`, of a fixed compact `C`, and these unions converge to subsets
//! of `K`.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::geometry::RationalVector;
use crate::ifs::{check_cap, Ifs, Word};
use crate::similitude::Similitude;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub generator: usize,
    pub letter: u32,
    pub word: Word,
    /// `None` is the identity.
    pub target: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingCertificate {
    /// `generators[0]` is the map the certificate was requested for.
    pub generators: Vec<Similitude>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate has no generators")]
    Empty,
    #[error("generator {0} has the wrong dimension")]
    Dimension(usize),
    #[error("no relation for generator {generator} and letter {letter}")]
    Missing { generator: usize, letter: u32 },
    #[error("duplicate relation for generator {generator} and letter {letter}")]
    Duplicate { generator: usize, letter: u32 },
    #[error("relation ({generator}, {letter}) uses an empty or out-of-range word")]
    BadWord { generator: usize, letter: u32 },
    #[error("relation ({generator}, {letter}) targets unknown generator {target}")]
    BadTarget {
        generator: usize,
        letter: u32,
        target: usize,
    },
    #[error("relation ({generator}, {letter}) is not an exact identity")]
    Inexact { generator: usize, letter: u32 },
}

impl EmbeddingCertificate {
    /// Checks completeness and exactness against `ifs`.
    pub fn verify(&self, ifs: &Ifs) -> Result<(), CertificateError> {
        if self.generators.is_empty() {
            return Err(CertificateError::Empty);
        }
        if let Some(g) = self.generators.iter().position(|g| g.dim() != ifs.dim()) {
            return Err(CertificateError::Dimension(g));
        }
        let m = ifs.len() as u32;
        let mut seen = vec![vec![false; m as usize]; self.generators.len()];
        for rel in &self.relations {
            let (generator, letter) = (rel.generator, rel.letter);
            if generator >= self.generators.len() || letter == 0 || letter > m {
                return Err(CertificateError::Missing { generator, letter });
            }
            let slot = &mut seen[generator][letter as usize - 1];
            if *slot {
                return Err(CertificateError::Duplicate { generator, letter });
            }
            *slot = true;
            if rel.word.is_empty() || rel.word.check_alphabet(ifs.len()).is_err() {
                return Err(CertificateError::BadWord { generator, letter });
            }
            let rhs_inner = match rel.target {
                None => Similitude::identity(ifs.dim()),
                Some(t) if t < self.generators.len() => self.generators[t].clone(),
                Some(target) => {
                    return Err(CertificateError::BadTarget {
                        generator,
                        letter,
                        target,
                    })
                }
            };
            let lhs = self.generators[generator].then_inner(ifs.map(letter));
            let rhs = ifs.cylinder_unchecked(&rel.word).then_inner(&rhs_inner);
            if lhs != rhs {
                return Err(CertificateError::Inexact { generator, letter });
            }
        }
        for (generator, row) in seen.iter().enumerate() {
            if let Some(i) = row.iter().position(|s| !s) {
                return Err(CertificateError::Missing {
                    generator,
                    letter: i as u32 + 1,
                });
            }
        }
        Ok(())
    }

    pub fn relation(&self, generator: usize, letter: u32) -> Option<&Relation> {
        self.relations
            .iter()
            .find(|r| r.generator == generator && r.letter == letter)
    }

    /// Level-1 cells met by `g(K)`: exactly the first letters of the
    /// relation words of `g`.
    pub fn first_letters(&self, generator: usize) -> BTreeSet<u32> {
        self.relations
            .iter()
            .filter(|r| r.generator == generator)
            .filter_map(|r| r.word.first())
            .collect()
    }

    /// SHA-256 over a canonical text rendering of generators and relations.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for g in &self.generators {
            h.update(format!("{g}\n").as_bytes());
        }
        for r in &self.relations {
            h.update(
                format!(
                    "{} {} {} {}\n",
                    r.generator,
                    r.letter,
                    r.word,
                    r.target.map_or("id".to_string(), |t| t.to_string())
                )
                .as_bytes(),
            );
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_word_len: usize,
    pub max_generators: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_word_len: 8,
            max_generators: 16,
        }
    }
}

/// Finds `j` with `phi_j = g` exactly, `|j| <= max_len`.
pub fn match_cylinder(ifs: &Ifs, g: &Similitude, max_len: usize) -> Option<Word> {
    let target_box = g.eval_box(ifs.invariant_box());
    let mut stack = vec![(Word::empty(), Similitude::identity(ifs.dim()))];
    while let Some((w, s)) = stack.pop() {
        if s == *g {
            return Some(w);
        }
        if w.len() == max_len {
            continue;
        }
        // Reverse so that the smallest letter is explored first.
        for a in ifs.letters().rev() {
            let c = s.then_inner(ifs.map(a));
            if c.ratio() >= g.ratio() && c.eval_box(ifs.invariant_box()).contains_box(&target_box) {
                stack.push((w.push(a), c));
            }
        }
    }
    None
}

/// An identity `f^k ∘ phi_i = phi_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerIdentity {
    pub k: u64,
    pub i: Word,
    pub j: Word,
}

/// Searches `k <= max_k` and non-empty `i` with `|i| <= max_len` for an
/// exact identity `f^k ∘ phi_i = phi_j`.
pub fn relation_search(
    f: &Similitude,
    ifs: &Ifs,
    max_k: u64,
    max_len: usize,
) -> Option<PowerIdentity> {
    if f.dim() != ifs.dim() {
        return None;
    }
    for k in 1..=max_k {
        let fk = f.power(k);
        for len in 1..=max_len {
            if check_cap(ifs.len(), len).is_err() {
                break;
            }
            for i in Word::all(ifs.len(), len).ok()? {
                let g = fk.then_inner(&ifs.cylinder_unchecked(&i));
                if let Some(j) = match_cylinder(ifs, &g, max_len.max(len) * 2 + k as usize) {
                    return Some(PowerIdentity { k, i, j });
                }
            }
        }
    }
    None
}

/// Whether `p` lies in the depth-`depth` cover of the attractor (a necessary
/// condition for `p ∈ K`).
pub fn in_cover(ifs: &Ifs, p: &RationalVector, depth: usize) -> bool {
    let mut frontier = vec![Similitude::identity(ifs.dim())];
    if !ifs.invariant_box().contains_point(p) {
        return false;
    }
    for _ in 0..depth {
        frontier = frontier
            .iter()
            .flat_map(|s| {
                ifs.letters()
                    .map(move |a| s.then_inner(ifs.map(a)))
                    .filter(|c| c.eval_box(ifs.invariant_box()).contains_point(p))
            })
            .collect();
        if frontier.is_empty() {
            return false;
        }
    }
    true
}

/// A pure translation by a non-zero vector never maps a non-empty compact
/// set into itself.
fn is_nontrivial_translation(g: &Similitude) -> bool {
    g.ratio().is_one() && g.orth().is_identity() && g.trans().0.iter().any(|c| !c.is_zero())
}

/// Necessary conditions for `g(K) ⊆ K`: ratio at most one, not a pure
/// translation, and exact attractor points land in a fine cover.
fn plausible_embedding(ifs: &Ifs, g: &Similitude) -> bool {
    if *g.ratio() > num_traits::One::one() || is_nontrivial_translation(g) {
        return false;
    }
    match ifs.attractor_points(1) {
        Ok(points) => points.iter().all(|(_, q)| in_cover(ifs, &g.eval(q), 3)),
        Err(_) => true,
    }
}

/// Searches for a complete relation system containing `f`.
///
/// Each pair `(g, i)` is closed by the shortest `u` for which
/// `g' = phi_u^{-1} ∘ g ∘ phi_i` is the identity or an existing generator;
/// failing that, the shortest `u` giving a plausible `g'` admits `g'` as a
/// new generator. `extra` seeds the generator list with maps certified
/// elsewhere. Returns `None` when the budget runs out; never returns an
/// unverified certificate.
pub fn certify_embedding(
    f: &Similitude,
    ifs: &Ifs,
    extra: &[Similitude],
    budget: SearchBudget,
) -> Option<EmbeddingCertificate> {
    if f.dim() != ifs.dim() || budget.max_word_len == 0 || budget.max_generators == 0 {
        return None;
    }
    if !plausible_embedding(ifs, f) {
        return None;
    }
    let mut generators = vec![f.clone()];
    for g in extra {
        if !generators.contains(g) && g.dim() == ifs.dim() {
            generators.push(g.clone());
        }
    }
    let mut relations = Vec::new();
    let mut idx = 0;
    while idx < generators.len() {
        let g = generators[idx].clone();
        for letter in ifs.letters() {
            let target = g.then_inner(ifs.map(letter));
            let (word, resolved) = close_pair(ifs, &target, &generators, budget.max_word_len)?;
            let target_idx = match resolved {
                Closure::Identity => None,
                Closure::Existing(t) => Some(t),
                Closure::New(h) => {
                    if generators.len() >= budget.max_generators {
                        return None;
                    }
                    generators.push(h);
                    Some(generators.len() - 1)
                }
            };
            relations.push(Relation {
                generator: idx,
                letter,
                word,
                target: target_idx,
            });
        }
        idx += 1;
    }
    let cert = EmbeddingCertificate {
        generators,
        relations,
    };
    debug_assert_eq!(cert.verify(ifs), Ok(()));
    cert.verify(ifs).ok().map(|_| cert)
}

enum Closure {
    Identity,
    Existing(usize),
    New(Similitude),
}

fn close_pair(
    ifs: &Ifs,
    target: &Similitude,
    generators: &[Similitude],
    max_len: usize,
) -> Option<(Word, Closure)> {
    let images: Vec<RationalVector> = ifs.fixed_points().iter().map(|x| target.eval(x)).collect();
    let mut queue = VecDeque::from([(Word::empty(), Similitude::identity(ifs.dim()))]);
    let mut fallback: Option<(Word, Similitude)> = None;
    while let Some((w, s)) = queue.pop_front() {
        if !w.is_empty() {
            let h = s.inverse().then_inner(target);
            if h.is_identity() {
                return Some((w, Closure::Identity));
            }
            if let Some(t) = generators.iter().position(|g| *g == h) {
                return Some((w, Closure::Existing(t)));
            }
            if fallback.is_none() && plausible_embedding(ifs, &h) {
                fallback = Some((w.clone(), h.clone()));
            }
            if *h.ratio() >= num_traits::One::one() {
                continue;
            }
        }
        if w.len() == max_len {
            continue;
        }
        for a in ifs.letters() {
            let c = s.then_inner(ifs.map(a));
            let b = c.eval_box(ifs.invariant_box());
            if images.iter().all(|p| b.contains_point(p)) {
                queue.push_back((w.push(a), c));
            }
        }
    }
    fallback.map(|(w, h)| (w, Closure::New(h)))
}
