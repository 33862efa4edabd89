//! Chain decomposition of the level-`(n-1)` cells.
//!
//! Two cells are joined when their squared distance is not certified to
//! exceed the threshold `r^{2(n-1)} * D`, where `D` is a certified upper
//! bound on the squared diameter. Chains are the connected components.
//! Pairs the bounds cannot decide are joined and flagged, so cells in
//! different chains are always certified to be farther apart than the
//! threshold.

use num_traits::Zero;
use rayon::prelude::*;

use crate::bounds::{compare_dist, diameter_upper, min_gap, set_dist_bounds, Comparison};
use crate::error::{Error, Result};
use crate::geometry::AxisBox;
use crate::ifs::{Ifs, Word};
use crate::rational::{pow, Rational};

#[derive(Clone, Debug)]
struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != node {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
    }
}

/// Distance evidence for one pair of cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairEvidence {
    pub a: Word,
    pub b: Word,
    pub lower: Rational,
    pub upper: Rational,
}

#[derive(Clone, Debug)]
pub struct ChainStructure {
    /// The `n` of the construction; chains consist of words of length `n - 1`.
    pub n: usize,
    /// Squared comparison value `r^{2(n-1)} * diam2_upper`.
    pub threshold: Rational,
    pub diam2_upper: Rational,
    pub depth: usize,
    /// Each chain sorted; chains ordered by their smallest word.
    pub chains: Vec<Vec<Word>>,
    /// Cross-chain pairs, each with `lower > threshold`.
    pub separations: Vec<PairEvidence>,
    /// Joined pairs.
    pub joins: Vec<PairEvidence>,
    /// Joined pairs whose comparison was undecided.
    pub flags: Vec<(Word, Word)>,
}

impl ChainStructure {
    pub fn level(&self) -> usize {
        self.n - 1
    }

    pub fn chain_of(&self, w: &Word) -> Option<usize> {
        self.chains.iter().position(|c| c.binary_search(w).is_ok())
    }

    pub fn is_coarsened(&self) -> bool {
        !self.flags.is_empty()
    }

    /// Re-checks the partition and separation claims from the stored
    /// evidence alone.
    pub fn verify(&self, alphabet: usize) -> bool {
        let Ok(all) = Word::all(alphabet, self.level()) else {
            return false;
        };
        let mut listed: Vec<&Word> = self.chains.iter().flatten().collect();
        listed.sort();
        if listed.len() != all.len() || listed.iter().zip(&all).any(|(a, b)| *a != b) {
            return false;
        }
        let cross = self
            .separations
            .iter()
            .all(|e| e.lower > self.threshold && self.chain_of(&e.a) != self.chain_of(&e.b));
        let expected: usize = {
            let sizes: Vec<usize> = self.chains.iter().map(Vec::len).collect();
            let total: usize = sizes.iter().sum();
            sizes.iter().map(|s| s * (total - s)).sum::<usize>() / 2
        };
        cross && self.separations.len() == expected
    }
}

fn homogeneous_ratio(ifs: &Ifs) -> Result<&Rational> {
    ifs.common_ratio().ok_or(Error::NotHomogeneous)
}

/// Smallest `n >= 1` with `r^{2n} * diam2_upper < delta2_lower`.
pub fn chain_level(ifs: &Ifs, depth: usize) -> Result<usize> {
    let r = homogeneous_ratio(ifs)?;
    let (gap, _) = min_gap(ifs, depth);
    if gap.lower.is_zero() {
        return Err(if gap.upper.is_zero() {
            Error::SeparationNotCertified
        } else {
            Error::BoundsTooLoose(depth)
        });
    }
    let diam = diameter_upper(ifs, depth);
    let r2 = r * r;
    let mut scaled = &r2 * &diam;
    let mut n = 1;
    while scaled >= gap.lower {
        scaled *= &r2;
        n += 1;
    }
    Ok(n)
}

pub fn chain_decomposition(ifs: &Ifs, n: usize, depth: usize) -> Result<ChainStructure> {
    if n == 0 {
        return Err(Error::Invalid("chain level n must be at least 1".into()));
    }
    let r = homogeneous_ratio(ifs)?;
    let diam2_upper = diameter_upper(ifs, depth);
    let threshold = pow(r, 2 * (n as i32 - 1)) * &diam2_upper;
    let words = Word::all(ifs.len(), n - 1)?;
    let cylinders: Vec<_> = words.iter().map(|w| ifs.cylinder_unchecked(w)).collect();
    let pairs: Vec<(usize, usize)> = (0..words.len())
        .flat_map(|i| (i + 1..words.len()).map(move |j| (i, j)))
        .collect();
    let evidence: Vec<(Comparison, PairEvidence)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let b = set_dist_bounds(ifs, &cylinders[i], &cylinders[j], depth, Some(&threshold));
            (
                compare_dist(&b, &threshold),
                PairEvidence {
                    a: words[i].clone(),
                    b: words[j].clone(),
                    lower: b.lower,
                    upper: b.upper,
                },
            )
        })
        .collect();

    let mut dsu = DisjointSet::new(words.len());
    let mut joins = Vec::new();
    let mut flags = Vec::new();
    for (&(i, j), (cmp, ev)) in pairs.iter().zip(&evidence) {
        if *cmp != Comparison::Above {
            dsu.union(i, j);
            if *cmp == Comparison::Unknown {
                flags.push((ev.a.clone(), ev.b.clone()));
            }
            joins.push(ev.clone());
        }
    }
    let mut groups: Vec<Vec<Word>> = Vec::new();
    let mut root_slot = vec![usize::MAX; words.len()];
    for (i, w) in words.iter().enumerate() {
        let root = dsu.find(i);
        if root_slot[root] == usize::MAX {
            root_slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[root]].push(w.clone());
    }
    let separations = pairs
        .iter()
        .zip(evidence)
        .filter(|(&(i, j), _)| dsu.find(i) != dsu.find(j))
        .map(|(_, (_, ev))| ev)
        .collect();
    Ok(ChainStructure {
        n,
        threshold,
        diam2_upper,
        depth,
        chains: groups,
        separations,
        joins,
        flags,
    })
}

/// Chains of a 1D system ordered left to right by their certified hull
/// intervals, which must be pairwise disjoint.
pub fn chains_ordered_1d(cs: &ChainStructure, ifs: &Ifs) -> Result<Vec<(Vec<Word>, AxisBox)>> {
    if ifs.dim() != 1 {
        return Err(Error::Invalid(format!(
            "left-to-right ordering needs dimension 1, got {}",
            ifs.dim()
        )));
    }
    let m = ifs.len();
    let extra = (0..=cs.depth)
        .take_while(|&j| (m as u128).pow(j as u32) <= 4096)
        .last()
        .unwrap_or(0);
    let tails = Word::all(m, extra)?;
    let mut hulls: Vec<(Vec<Word>, AxisBox)> = cs
        .chains
        .iter()
        .map(|chain| {
            let hull = chain
                .iter()
                .flat_map(|w| tails.iter().map(move |t| w.concat(t)))
                .map(|w| ifs.cylinder_unchecked(&w).eval_box(ifs.invariant_box()))
                .reduce(|a, b| a.hull(&b))
                .expect("chains are non-empty");
            (chain.clone(), hull)
        })
        .collect();
    hulls.sort_by(|a, b| a.1.lower().0[0].cmp(&b.1.lower().0[0]));
    for pair in hulls.windows(2) {
        if pair[0].1.upper().0[0] >= pair[1].1.lower().0[0] {
            return Err(Error::Invalid(format!(
                "chain hulls {} and {} overlap",
                pair[0].1, pair[1].1
            )));
        }
    }
    Ok(hulls)
}
