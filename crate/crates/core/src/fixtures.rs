//! Bundled systems: the Cantor set, the nine-map planar counterexample with
//! its embedding `f`, symmetry pairs and separation calibration systems.

use crate::geometry::{AxisBox, RationalVector};
use crate::ifs::Ifs;
use crate::orth::SignedPermutation;
use crate::rational::{int, rat, Rational};
use crate::similitude::Similitude;
use crate::symmetry::SymmetryProblem;

fn line(ratio: Rational, sign: i8, a: Rational) -> Similitude {
    Similitude::new(
        ratio,
        SignedPermutation::new(vec![0], vec![sign]).unwrap(),
        RationalVector(vec![a]),
    )
    .expect("fixture map")
}

fn plane(quarter_turns: u32, a: (i64, i64), b: (i64, i64)) -> Similitude {
    Similitude::new(
        rat(1, 6),
        SignedPermutation::rotation_2d(quarter_turns),
        RationalVector(vec![rat(a.0, a.1), rat(b.0, b.1)]),
    )
    .expect("fixture map")
}

/// `{x/3, x/3 + 2/3}`.
pub fn cantor() -> Ifs {
    Ifs::new(vec![
        line(rat(1, 3), 1, int(0)),
        line(rat(1, 3), 1, rat(2, 3)),
    ])
    .unwrap()
}

/// `{x/2, x/2 + 1/2}`: generates `[0, 1]`, open set condition only.
pub fn halves() -> Ifs {
    Ifs::new(vec![
        line(rat(1, 2), 1, int(0)),
        line(rat(1, 2), 1, rat(1, 2)),
    ])
    .unwrap()
}

/// `{x/5, x/5 + 2/5, x/5 + 4/5}`.
pub fn fifths() -> Ifs {
    Ifs::new(vec![
        line(rat(1, 5), 1, int(0)),
        line(rat(1, 5), 1, rat(2, 5)),
        line(rat(1, 5), 1, rat(4, 5)),
    ])
    .unwrap()
}

/// Two maps whose level-1 pieces are `1/1000` apart, packaged with the
/// loose invariant box `[-1, 2]` so that shallow covers cannot separate them.
pub fn near_touching() -> Ifs {
    let r = rat(999, 2000);
    let maps = vec![line(r.clone(), 1, int(0)), line(r.clone(), 1, int(1) - r)];
    let b = AxisBox::new(RationalVector(vec![int(-1)]), RationalVector(vec![int(2)])).unwrap();
    Ifs::with_box(maps, b).unwrap()
}

/// The nine maps of the planar counterexample, with `I = [-3, 3]^2`.
///
/// Rotations are counter-clockwise quarter turns: `R_{pi/2}` is one turn,
/// `R_pi` two, `R_{3pi/2}` three.
pub fn example25() -> Ifs {
    let maps = vec![
        plane(0, (-15, 8), (15, 8)),
        plane(0, (-5, 2), (-5, 4)),
        plane(3, (-5, 4), (-5, 4)),
        plane(1, (-5, 2), (-5, 2)),
        plane(2, (-5, 4), (-5, 2)),
        plane(0, (5, 4), (-5, 4)),
        plane(3, (5, 2), (-5, 4)),
        plane(1, (5, 4), (-5, 2)),
        plane(2, (5, 2), (-5, 2)),
    ];
    Ifs::with_box(maps, example25_square()).unwrap()
}

pub fn example25_square() -> AxisBox {
    AxisBox::new(
        RationalVector(vec![int(-3), int(-3)]),
        RationalVector(vec![int(3), int(3)]),
    )
    .unwrap()
}

/// `f(x) = x/6 + (15/8, -15/8)`; the translation is the centre of
/// `Q = [3/4, 3] x [-3, -3/4]`.
pub fn example25_f() -> Similitude {
    plane(0, (15, 8), (-15, 8))
}

/// Cantor set with its reflected generating system `{-x/3 + 1/3, -x/3 + 1}`.
pub fn cantor_pair() -> SymmetryProblem {
    SymmetryProblem::new(
        cantor(),
        Ifs::new(vec![
            line(rat(1, 3), -1, rat(1, 3)),
            line(rat(1, 3), -1, int(1)),
        ])
        .unwrap(),
    )
}

/// `{x/5, x/5 + 2/5, x/5 + 4/5}` with `{-x/5 + 1/5, -x/5 + 3/5, -x/5 + 1}`.
pub fn fifths_pair() -> SymmetryProblem {
    SymmetryProblem::new(
        fifths(),
        Ifs::new(vec![
            line(rat(1, 5), -1, rat(1, 5)),
            line(rat(1, 5), -1, rat(3, 5)),
            line(rat(1, 5), -1, int(1)),
        ])
        .unwrap(),
    )
}

/// Cantor paired with `{-x/3 + 1/3, -x/3 + 2/3}`, whose attractor has hull
/// `[1/8, 5/8]`: not a valid second generating system.
pub fn broken_pair() -> SymmetryProblem {
    SymmetryProblem::new(
        cantor(),
        Ifs::new(vec![
            line(rat(1, 3), -1, rat(1, 3)),
            line(rat(1, 3), -1, rat(2, 3)),
        ])
        .unwrap(),
    )
}

pub const NAMES: &[&str] = &[
    "cantor",
    "halves",
    "fifths",
    "near-touching",
    "example25",
    "example25-f",
    "cantor-pair",
    "fifths-pair",
    "broken-pair",
];
