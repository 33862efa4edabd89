//! Certified squared-distance bounds between pieces of the attractor.
//!
//! Lower bounds come from distances between cover boxes, which contain the
//! pieces. Upper bounds come from exact attractor points. Refinement
//! replaces a pair of boxes by the `m^2` pairs of child boxes; pairs whose
//! box distance already exceeds the best upper bound are retired, since no
//! descendant can realise the minimum.

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, RationalVector};
use crate::ifs::{Ifs, Word};
use crate::rational::Rational;
use crate::similitude::Similitude;

/// Frontier size beyond which refinement stops and the current bounds are
/// reported.
const FRONTIER_CAP: usize = 1 << 16;
const DIAMETER_PAIR_CAP: u128 = 200_000;

/// Certified interval `[lower, upper]` for a squared distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapBounds {
    pub lower: Rational,
    pub upper: Rational,
    /// Refinement depth actually reached.
    pub depth: usize,
    /// Labels of the exact point pair realising `upper`, relative to the two
    /// pieces (`w·i` names `phi_w(x_i)`).
    pub witness: (Word, Word),
}

/// Certified interval for the squared diameter of the attractor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiameterBounds {
    pub lower: Rational,
    pub upper: Rational,
    pub depth: usize,
}

/// What an early-exiting comparison against a threshold concluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Certified `dist^2 > threshold`.
    Above,
    /// Certified `dist^2 <= threshold`.
    AtMost,
    Unknown,
}

/// A pair of cells `g1 ∘ phi_{w1}` and `g2 ∘ phi_{w2}` with one exact point
/// of each. For `w = v·a` the point is `phi_w(x_a) = phi_v(x_a)`, labelled
/// `w`; the children of a node thus carry every point `phi_v(x_i)`.
struct Node {
    w1: Word,
    s1: Similitude,
    p1: RationalVector,
    w2: Word,
    s2: Similitude,
    p2: RationalVector,
    dist: Rational,
}

impl Node {
    fn point_dist(&self) -> Rational {
        self.p1.dist2(&self.p2)
    }

    fn children(&self, ifs: &Ifs) -> Vec<Node> {
        let mut out = Vec::with_capacity(ifs.len() * ifs.len());
        let side = |s: &Similitude| -> Vec<(Similitude, AxisBox, RationalVector)> {
            ifs.letters()
                .zip(ifs.fixed_points())
                .map(|(a, x)| {
                    let c = s.then_inner(ifs.map(a));
                    let b = c.eval_box(ifs.invariant_box());
                    (c, b, s.eval(x))
                })
                .collect()
        };
        let left = side(&self.s1);
        let right = side(&self.s2);
        for (a, (c1, b1, p1)) in ifs.letters().zip(&left) {
            for (b, (c2, b2, p2)) in ifs.letters().zip(&right) {
                out.push(Node {
                    w1: self.w1.push(a),
                    s1: c1.clone(),
                    p1: p1.clone(),
                    w2: self.w2.push(b),
                    s2: c2.clone(),
                    p2: p2.clone(),
                    dist: b1.dist2(b2),
                });
            }
        }
        out
    }
}

/// Bounds on `dist^2(g1(K), g2(K))` after at most `depth` refinements.
///
/// With a threshold, refinement stops as soon as the comparison against it
/// is decided.
pub fn set_dist_bounds(
    ifs: &Ifs,
    g1: &Similitude,
    g2: &Similitude,
    depth: usize,
    threshold: Option<&Rational>,
) -> GapBounds {
    bounds_with_cutoff(ifs, g1, g2, depth, threshold, None)
}

/// As `set_dist_bounds`, additionally retiring nodes farther apart than
/// `cutoff`, a known upper bound on some competing distance.
fn bounds_with_cutoff(
    ifs: &Ifs,
    g1: &Similitude,
    g2: &Similitude,
    depth: usize,
    threshold: Option<&Rational>,
    cutoff: Option<&Rational>,
) -> GapBounds {
    let x1 = &ifs.fixed_points()[0];
    let root = Node {
        w1: Word::letter(1),
        s1: g1.clone(),
        p1: g1.eval(x1),
        w2: Word::letter(1),
        s2: g2.clone(),
        p2: g2.eval(x1),
        dist: g1
            .eval_box(ifs.invariant_box())
            .dist2(&g2.eval_box(ifs.invariant_box())),
    };
    // Every pair phi_i(x_a), phi_j(x_b) at the root, as the children would see them.
    let points = |g: &Similitude| -> Vec<(Word, RationalVector)> {
        ifs.letters()
            .zip(ifs.fixed_points())
            .map(|(a, x)| (Word::letter(a), g.eval(x)))
            .collect()
    };
    let (left, right) = (points(g1), points(g2));
    let (mut upper, mut wit1, mut wit2) = (root.point_dist(), root.w1.clone(), root.w2.clone());
    for (wa, a) in &left {
        for (wb, b) in &right {
            let d = a.dist2(b);
            if d < upper {
                upper = d;
                wit1 = wa.clone();
                wit2 = wb.clone();
            }
        }
    }
    let mut retired_min: Option<Rational> = None;
    let mut frontier = vec![Node {
        w1: Word::empty(),
        w2: Word::empty(),
        ..root
    }];
    let mut level = 0;
    loop {
        if level > 0 {
            for node in &frontier[..] {
                let d = node.point_dist();
                if d < upper {
                    upper = d;
                    wit1 = node.w1.clone();
                    wit2 = node.w2.clone();
                }
            }
        }
        let bar = match cutoff {
            Some(c) if *c < upper => c.clone(),
            _ => upper.clone(),
        };
        let (keep, retire): (Vec<Node>, Vec<Node>) =
            frontier.into_iter().partition(|n| n.dist <= bar);
        for n in retire {
            if retired_min.as_ref().is_none_or(|r| n.dist < *r) {
                retired_min = Some(n.dist);
            }
        }
        let live_min = keep.iter().map(|n| &n.dist).min().cloned();
        let lower = match (live_min, retired_min.clone()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => upper.clone(),
        };
        let decided = match threshold {
            Some(t) => lower > *t || upper <= *t,
            None => false,
        };
        if decided
            || lower == upper
            || level == depth
            || keep.len() * ifs.len() * ifs.len() > FRONTIER_CAP
        {
            return GapBounds {
                lower,
                upper,
                depth: level,
                witness: (wit1, wit2),
            };
        }
        frontier = keep.iter().flat_map(|n| n.children(ifs)).collect();
        level += 1;
    }
}

pub fn compare_dist(bounds: &GapBounds, threshold: &Rational) -> Comparison {
    if bounds.lower > *threshold {
        Comparison::Above
    } else if bounds.upper <= *threshold {
        Comparison::AtMost
    } else {
        Comparison::Unknown
    }
}

/// Bounds on `dist^2(phi_u(K), phi_v(K))`.
pub fn cell_dist_bounds(ifs: &Ifs, u: &Word, v: &Word, depth: usize) -> Result<GapBounds> {
    let su = ifs.cylinder(u)?;
    let sv = ifs.cylinder(v)?;
    let mut b = set_dist_bounds(ifs, &su, &sv, depth, None);
    b.witness = (u.concat(&b.witness.0), v.concat(&b.witness.1));
    Ok(b)
}

/// Bounds on `delta^2 = min_{i != j} dist^2(phi_i(K), phi_j(K))`, together
/// with the level-1 pair attaining the smallest upper bound.
pub fn min_gap(ifs: &Ifs, depth: usize) -> (GapBounds, (u32, u32)) {
    let pairs: Vec<(u32, u32)> = ifs
        .letters()
        .flat_map(|i| ifs.letters().filter(move |&j| j > i).map(move |j| (i, j)))
        .collect();
    let bound = |(i, j): (u32, u32), depth: usize, cutoff: Option<&Rational>| {
        let mut b = bounds_with_cutoff(ifs, ifs.map(i), ifs.map(j), depth, None, cutoff);
        b.witness = (
            Word::letter(i).concat(&b.witness.0),
            Word::letter(j).concat(&b.witness.1),
        );
        b
    };
    // pairs already farther apart than the closest exact points are irrelevant
    let cutoff = pairs.par_iter().map(|&p| bound(p, 0, None).upper).min();
    let results: Vec<GapBounds> = pairs
        .par_iter()
        .map(|&p| bound(p, depth, cutoff.as_ref()))
        .collect();
    let lower = results.iter().map(|b| &b.lower).min().cloned().unwrap();
    let reached = results.iter().map(|b| b.depth).max().unwrap_or(0);
    let (idx, best) = results
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.upper.cmp(&b.1.upper))
        .unwrap();
    (
        GapBounds {
            lower,
            upper: best.upper.clone(),
            depth: reached,
            witness: best.witness.clone(),
        },
        pairs[idx],
    )
}

fn deepest_level(m: usize, depth: usize, fits: impl Fn(u128) -> bool) -> usize {
    (0..=depth)
        .take_while(|&l| fits((m as u128).saturating_pow(l as u32)))
        .last()
        .unwrap_or(0)
}

/// Squared diameter bounds: the lower bound from exact point pairs, the
/// upper bound from the bounding box of the depth-`depth` cover.
pub fn diameter_bounds(ifs: &Ifs, depth: usize) -> DiameterBounds {
    let m = ifs.len();
    let point_level = deepest_level(m, depth, |c| {
        let n = c * m as u128;
        n * n / 2 <= DIAMETER_PAIR_CAP
    });
    let points: Vec<RationalVector> = ifs
        .attractor_points(point_level)
        .expect("within cap")
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    let lower = points
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            points[i + 1..]
                .iter()
                .map(|b| a.dist2(b))
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .max()
        .unwrap_or_else(Rational::zero);
    DiameterBounds {
        lower,
        upper: diameter_upper(ifs, depth),
        depth,
    }
}

/// Upper bound alone: the squared diagonal of the hull of the depth-`depth`
/// cover. Signed permutations commute with taking hulls, so the hull at one
/// level is the hull of the images of the hull one level up.
pub fn diameter_upper(ifs: &Ifs, depth: usize) -> Rational {
    let mut hull = ifs.invariant_box().clone();
    for _ in 0..depth {
        let mut images = ifs.maps().iter().map(|s| s.eval_box(&hull));
        let first = images.next().expect("nonempty system");
        hull = images.fold(first, |acc, b| acc.hull(&b));
    }
    hull.diag2()
}

/// The unique `w ∈ Λ^level` with `p ∈ phi_w(K)`, for a point known to lie in
/// `K`. Returns `Ok(None)` when `depth` extra levels of refinement cannot
/// isolate one cell, and `NotInAttractor` when every candidate is excluded.
pub fn locate_point(
    ifs: &Ifs,
    p: &RationalVector,
    level: usize,
    depth: usize,
) -> Result<Option<Word>> {
    p.check_dim(ifs.dim())?;
    if !ifs.invariant_box().contains_point(p) {
        return Err(Error::NotInAttractor);
    }
    let mut frontier = vec![(Word::empty(), Similitude::identity(ifs.dim()))];
    for len in 1..=level + depth {
        frontier = frontier
            .iter()
            .flat_map(|(w, s)| {
                ifs.letters().filter_map(move |a| {
                    let c = s.then_inner(ifs.map(a));
                    c.eval_box(ifs.invariant_box())
                        .contains_point(p)
                        .then(|| (w.push(a), c))
                })
            })
            .collect();
        if frontier.is_empty() {
            return Err(Error::NotInAttractor);
        }
        if len >= level {
            let first = frontier[0].0.prefix(level);
            if frontier.iter().all(|(w, _)| w.prefix(level) == first) {
                return Ok(Some(first));
            }
        }
        if frontier.len() > FRONTIER_CAP {
            break;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, rat};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn cantor_level_one_gap_is_exact() {
        let c = fixtures::cantor();
        let b = cell_dist_bounds(&c, &w("1"), &w("2"), 1).unwrap();
        assert_eq!(b.lower, rat(1, 9));
        assert_eq!(b.upper, rat(1, 9));
        assert_eq!(
            c.point_of(&b.witness.0).unwrap(),
            RationalVector(vec![rat(1, 3)])
        );
        assert_eq!(
            c.point_of(&b.witness.1).unwrap(),
            RationalVector(vec![rat(2, 3)])
        );
    }

    #[test]
    fn same_cell_has_zero_gap() {
        let c = fixtures::example25();
        let b = cell_dist_bounds(&c, &w("4"), &w("4"), 3).unwrap();
        assert_eq!(b.lower, int(0));
        assert_eq!(b.upper, int(0));
    }

    #[test]
    fn example25_gap_between_cells_2_and_3() {
        let e = fixtures::example25();
        let b = cell_dist_bounds(&e, &w("2"), &w("3"), 0).unwrap();
        assert!(b.lower >= rat(1, 16));
        assert!(b.lower <= b.upper);
    }

    #[test]
    fn diameters() {
        let c = fixtures::cantor();
        let d = diameter_bounds(&c, 3);
        assert_eq!((d.lower, d.upper), (int(1), int(1)));
        let e = fixtures::example25();
        let d = diameter_bounds(&e, 0);
        assert_eq!(d.upper, int(72));
        let d1 = diameter_bounds(&e, 2);
        assert!(d1.lower <= d1.upper && d1.upper <= int(72));
    }

    #[test]
    fn locate_examples() {
        let c = fixtures::cantor();
        let p = RationalVector(vec![rat(2, 3)]);
        assert_eq!(locate_point(&c, &p, 1, 4).unwrap(), Some(w("2")));
        let x1 = c.fixed_points()[0].clone();
        assert_eq!(locate_point(&c, &x1, 5, 4).unwrap(), Some(w("11111")));
        let e = fixtures::example25();
        let fx1 = RationalVector(vec![rat(3, 2), rat(-3, 2)]);
        assert_eq!(locate_point(&e, &fx1, 1, 2).unwrap(), Some(w("6")));
        // 1/2 sits in the middle gap of the Cantor set.
        assert_eq!(
            locate_point(&c, &RationalVector(vec![rat(1, 2)]), 1, 3),
            Err(Error::NotInAttractor)
        );
    }

    #[test]
    fn locate_is_unknown_on_overlapping_cells() {
        let h = fixtures::halves();
        assert_eq!(
            locate_point(&h, &RationalVector(vec![rat(1, 2)]), 1, 6).unwrap(),
            None
        );
    }
}
