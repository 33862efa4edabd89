//! Openness of `f(K)` in `K` for a homogeneous system with a common
//! orthogonal part, decided by the chain orbit.
//!
//! The output is an explicit cell union `W` with `f^k(K) = ⋃_{v ∈ W} psi_v(K)`
//! where `psi` is the `p`-th power system. Every cell equality is checked by
//! an exact identity `f^k ∘ psi_w = psi_v` (or, failing that, by an embedding
//! certificate for the ratio-one map `psi_v^{-1} ∘ f^k ∘ psi_w`), so the
//! union is proved independently of the route that found it. Under strong
//! separation every cell is clopen in `K`, hence `f^k(K)` is open, and
//! openness of `f^k(K)` implies openness of `f(K)`.

use std::collections::BTreeSet;

use num_traits::One;
use thiserror::Error;

use crate::bounds::locate_point;
use crate::chains::{chain_decomposition, chain_level, ChainStructure};
use crate::error::Error;
use crate::ifs::{check_cap, Ifs, Word};
use crate::orth::SignedPermutation;
use crate::rational::format_rational;
use crate::similitude::Similitude;
use crate::ssc::{check_ssc, SscResult};

use super::certificate::{certify_embedding, EmbeddingCertificate, SearchBudget};
use super::commensurability::{log_commensurability, PowerRelation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpennessError {
    #[error("not homogeneous with a common orthogonal part: {0}")]
    NotHomogeneousOrthogonal(String),
    #[error("strong separation not certified: {0}")]
    NotSeparated(String),
    #[error("invalid embedding evidence: {0}")]
    InvalidEvidence(String),
    #[error("undecided: {0}")]
    Unknown(String),
    #[error("inconsistent orbit: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Core(#[from] Error),
}

/// Which exact point represents each chain in the orbit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OrbitSampling {
    /// Rank of the word within its chain (taken modulo the chain size).
    pub word_rank: usize,
    /// Index of the fixed point `x_j` pushed through the cell.
    pub fixed_point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpennessOptions {
    /// Refinement depth for gap, diameter and point location bounds.
    pub depth: usize,
    /// Budget for fallback embedding certificates.
    pub budget: SearchBudget,
    pub sampling: OrbitSampling,
}

impl Default for OpennessOptions {
    fn default() -> Self {
        Self {
            depth: 6,
            budget: SearchBudget::default(),
            sampling: OrbitSampling::default(),
        }
    }
}

/// `f^k(E) ⊂ psi_letter(E')` for chain `chain`, with `E' = target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainImage {
    pub chain: usize,
    pub sample: Word,
    pub located: Word,
    pub letter: u32,
    pub target: usize,
}

/// The orbit `E_0, E_1, ...` from one starting chain, with the first repeat
/// `E_s = E_t`, `s < t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainOrbit {
    pub start: usize,
    pub sequence: Vec<usize>,
    pub s: usize,
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellUnion {
    /// Word length over the powered alphabet.
    pub level: usize,
    /// Sorted words over the powered alphabet.
    pub words: Vec<Word>,
    /// The same words over the base alphabet.
    pub base_words: Vec<Word>,
    pub source: String,
}

#[derive(Clone, Debug)]
pub struct OpennessCertificate {
    pub relation: PowerRelation,
    pub orth: SignedPermutation,
    pub chains: ChainStructure,
    pub images: Vec<ChainImage>,
    pub orbits: Vec<ChainOrbit>,
    pub union: CellUnion,
    /// Cells closed by exact identity / by a fallback certificate.
    pub exact_cells: usize,
    pub certified_cells: usize,
    pub conclusion: String,
}

/// Smallest `(k, p)` with `r_f^k = r^p` and `O_f^k = O^p`.
pub fn aligned_power(
    r: &crate::rational::Rational,
    o: &SignedPermutation,
    f: &Similitude,
) -> Result<Option<PowerRelation>, Error> {
    let Some(base) = log_commensurability(r, f.ratio())? else {
        return Ok(None);
    };
    let bound = f.orth().order() * o.order();
    Ok((1..=bound)
        .map(|j| PowerRelation {
            k: base.k * j,
            p: base.p * j,
        })
        .find(|rel| f.orth().pow(rel.k) == o.pow(rel.p)))
}

/// Orthogonal part used by the decision: the common one, or the common
/// value over the level-1 cells that `f(K)` meets.
fn gate_orthogonal(
    ifs: &Ifs,
    evidence: &EmbeddingCertificate,
) -> Result<SignedPermutation, OpennessError> {
    if let Some(o) = ifs.common_orth() {
        return Ok(o.clone());
    }
    let meets = evidence.first_letters(0);
    let mut orths = meets.iter().map(|&i| ifs.map(i).orth());
    let first = orths.next().expect("complete certificate has relations");
    if orths.all(|o| o == first) {
        Ok(first.clone())
    } else {
        let list: Vec<String> = meets.iter().map(u32::to_string).collect();
        Err(OpennessError::NotHomogeneousOrthogonal(format!(
            "orthogonal parts differ over the cells {{{}}} met by f(K)",
            list.join(", ")
        )))
    }
}

fn pick_sample(chain: &[Word], sampling: OrbitSampling, fixed: usize) -> Word {
    chain[sampling.word_rank % chain.len()].push((sampling.fixed_point % fixed) as u32 + 1)
}

/// Decides whether `f(K)` is a finite union of cells, returning the cell
/// union for `f^k(K)` at the chain level of the powered system.
pub fn openness_decision(
    f: &Similitude,
    ifs: &Ifs,
    evidence: &EmbeddingCertificate,
    options: &OpennessOptions,
) -> Result<OpennessCertificate, OpennessError> {
    let r = ifs.common_ratio().ok_or_else(|| {
        OpennessError::NotHomogeneousOrthogonal("contraction ratios differ".into())
    })?;
    if f.dim() != ifs.dim() {
        return Err(Error::DimensionMismatch {
            expected: ifs.dim(),
            found: f.dim(),
        }
        .into());
    }
    if evidence.generators.first() != Some(f) {
        return Err(OpennessError::InvalidEvidence(
            "first generator is not the map under test".into(),
        ));
    }
    evidence
        .verify(ifs)
        .map_err(|e| OpennessError::InvalidEvidence(e.to_string()))?;
    let o = gate_orthogonal(ifs, evidence)?;
    match check_ssc(ifs, options.depth) {
        SscResult::Certified { .. } => {}
        SscResult::Violated { point, .. } => {
            return Err(OpennessError::NotSeparated(format!(
                "pieces meet at {point}"
            )))
        }
        SscResult::Unknown { depth, .. } => {
            return Err(OpennessError::Unknown(format!(
                "separation undecided at depth {depth}"
            )))
        }
    }
    if *f.ratio() >= crate::rational::Rational::one() {
        return Err(OpennessError::Unknown(format!(
            "f has ratio {}; only strict contractions are handled",
            format_rational(f.ratio())
        )));
    }
    let relation = aligned_power(r, &o, f)?.ok_or_else(|| {
        OpennessError::Inconsistent(format!(
            "log {} / log {} is irrational, impossible for a certified embedding",
            format_rational(f.ratio()),
            format_rational(r)
        ))
    })?;
    let p = usize::try_from(relation.p).map_err(|_| Error::Invalid("power too large".into()))?;
    let psi = ifs.power_system(p)?;
    let m_psi = psi.len();
    let n = chain_level(&psi, options.depth)?;
    check_cap(m_psi, n)?;
    let chains = chain_decomposition(&psi, n, options.depth)?;
    let fk = f.power(relation.k);
    let inconsistent = |msg: String| {
        if chains.is_coarsened() {
            OpennessError::Unknown(format!("{msg} (chain structure coarsened)"))
        } else {
            OpennessError::Inconsistent(msg)
        }
    };

    let locate = |g: &Similitude, label: &Word| -> Result<Word, OpennessError> {
        let x = &psi.fixed_points()[*label.letters().last().unwrap() as usize - 1];
        let q = g.eval(
            &psi.cylinder_unchecked(&label.prefix(label.len() - 1))
                .eval(x),
        );
        match locate_point(&psi, &q, n, options.depth) {
            Ok(Some(v)) => Ok(v),
            Ok(None) => Err(OpennessError::Unknown(format!(
                "cannot isolate the cell of f^k(psi_{label})"
            ))),
            Err(Error::NotInAttractor) => Err(OpennessError::InvalidEvidence(format!(
                "f^k maps the point {label} outside K"
            ))),
            Err(e) => Err(e.into()),
        }
    };

    let mut images = Vec::with_capacity(chains.chains.len());
    for (idx, chain) in chains.chains.iter().enumerate() {
        let sample = pick_sample(chain, options.sampling, psi.len());
        let located = locate(&fk, &sample)?;
        let target = chains
            .chain_of(&located.suffix_from(1))
            .expect("chains partition the level");
        images.push(ChainImage {
            chain: idx,
            sample,
            letter: located.first().expect("level n >= 1"),
            located,
            target,
        });
    }

    let mut orbits = Vec::with_capacity(images.len());
    for start in 0..images.len() {
        let mut sequence = vec![start];
        let (s, t) = loop {
            let next = images[*sequence.last().unwrap()].target;
            if let Some(s) = sequence.iter().position(|&c| c == next) {
                break (s, sequence.len());
            }
            sequence.push(next);
        };
        // f^k followed by psi_i^{-1} has ratio one, so each step can only
        // grow the chain.
        for pair in sequence.windows(2) {
            if chains.chains[pair[0]].len() > chains.chains[pair[1]].len() {
                return Err(inconsistent(format!(
                    "chain {} maps into the smaller chain {}",
                    pair[0], pair[1]
                )));
            }
        }
        orbits.push(ChainOrbit {
            start,
            sequence,
            s,
            t,
        });
    }

    let mut words = BTreeSet::new();
    let (mut exact_cells, mut certified_cells) = (0, 0);
    for (idx, chain) in chains.chains.iter().enumerate() {
        let image = &images[idx];
        for w in chain {
            let g = fk.then_inner(&psi.cylinder_unchecked(w));
            let v = locate(&fk, &w.push(1))?;
            if v.first() != Some(image.letter)
                || chains.chain_of(&v.suffix_from(1)) != Some(image.target)
            {
                return Err(inconsistent(format!(
                    "cell {w} of chain {idx} does not follow the chain image"
                )));
            }
            let cell = psi.cylinder_unchecked(&v);
            if cell == g {
                exact_cells += 1;
            } else {
                let h = cell.inverse().then_inner(&g);
                if certify_embedding(&h, &psi, &[], options.budget).is_none() {
                    return Err(OpennessError::Unknown(format!(
                        "cell equality f^k(psi_{w}(K)) = psi_{v}(K) not certified"
                    )));
                }
                certified_cells += 1;
            }
            if !words.insert(v.clone()) {
                return Err(OpennessError::Inconsistent(format!("cell {v} hit twice")));
            }
        }
    }
    let expected = m_psi.pow(n as u32 - 1);
    if words.len() != expected {
        return Err(OpennessError::Inconsistent(format!(
            "{} cells, measure identity requires {expected}",
            words.len()
        )));
    }
    let words: Vec<Word> = words.into_iter().collect();
    let base_words = words.iter().map(|w| w.expand_power(ifs.len(), p)).collect();
    let union = CellUnion {
        level: n,
        words,
        base_words,
        source: format!("f^{} with f = {f}", relation.k),
    };
    let conclusion = format!(
        "f^{}(K) is a union of {} cells of level {n} over the {p}-th power system; \
         cells are clopen under strong separation, so f(K) is relatively open in K",
        relation.k, expected
    );
    Ok(OpennessCertificate {
        relation,
        orth: o,
        chains,
        images,
        orbits,
        union,
        exact_cells,
        certified_cells,
        conclusion,
    })
}
