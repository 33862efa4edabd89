//! Independent oracles: affine maps as explicit rational matrices, and the
//! planar counterexample rebuilt from its published constants.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use selfsim::Similitude;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `x -> A x + t` with a dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Aff {
    pub a: Vec<Vec<Q>>,
    pub t: Vec<Q>,
}

impl Aff {
    pub fn dim(&self) -> usize {
        self.t.len()
    }

    pub fn identity(d: usize) -> Aff {
        let a = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect();
        Aff {
            a,
            t: vec![Q::zero(); d],
        }
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        (0..self.dim())
            .map(|i| {
                let mut s = self.t[i].clone();
                for (j, xj) in x.iter().enumerate() {
                    s += &self.a[i][j] * xj;
                }
                s
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Aff) -> Aff {
        let d = self.dim();
        let a = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(Q::zero(), |acc, k| acc + &self.a[i][k] * &inner.a[k][j]))
                    .collect()
            })
            .collect();
        Aff {
            a,
            t: self.apply(&inner.t),
        }
    }

    pub fn of(s: &Similitude) -> Aff {
        let m = s.orth().to_matrix();
        Aff {
            a: m.iter()
                .map(|row| {
                    row.iter()
                        .map(|&e| s.ratio() * Q::from_integer(BigInt::from(e)))
                        .collect()
                })
                .collect(),
            t: s.trans().0.clone(),
        }
    }

    /// Fixed point of a 2x2 contraction by Cramer's rule.
    pub fn fixed_point_2d(&self) -> Vec<Q> {
        let (a, b, c, d) = (
            Q::one() - &self.a[0][0],
            -self.a[0][1].clone(),
            -self.a[1][0].clone(),
            Q::one() - &self.a[1][1],
        );
        let det = &a * &d - &b * &c;
        vec![
            (&self.t[0] * &d - &b * &self.t[1]) / &det,
            (&a * &self.t[1] - &c * &self.t[0]) / &det,
        ]
    }
}

/// Counter-clockwise rotation by `k * pi/2`, written out from cos and sin.
pub fn rotation(k: u32) -> [[i64; 2]; 2] {
    let (c, s) = match k % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    [[c, -s], [s, c]]
}

pub fn planar(ratio: Q, rot: [[i64; 2]; 2], t: (Q, Q)) -> Aff {
    Aff {
        a: rot
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&e| &ratio * Q::from_integer(BigInt::from(e)))
                    .collect()
            })
            .collect(),
        t: vec![t.0, t.1],
    }
}

/// The nine maps, parsed from the transcription in `tests/data`.
pub fn transcribed_maps() -> Vec<Aff> {
    let table = include_str!("../data/example25_maps.txt");
    table
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|line| {
            let cols: Vec<&str> = line.split_whitespace().collect();
            let ratio = parse(cols[1]);
            let quarter = match cols[2] {
                "0" => 0,
                "pi/2" => 1,
                "pi" => 2,
                "3pi/2" => 3,
                other => panic!("unexpected angle {other}"),
            };
            planar(ratio, rotation(quarter), (parse(cols[3]), parse(cols[4])))
        })
        .collect()
}

pub fn transcribed_f() -> Aff {
    planar(q(1, 6), rotation(0), (q(15, 8), q(-15, 8)))
}

pub fn parse(s: &str) -> Q {
    s.parse().expect("rational literal")
}

/// Random signed permutation of `d` coordinates.
pub fn random_orth<R: rand::Rng>(rng: &mut R, d: usize) -> selfsim::SignedPermutation {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let signs = (0..d)
        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect();
    selfsim::SignedPermutation::new(perm, signs).unwrap()
}

pub fn random_rational<R: rand::Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Q {
    q(rng.gen_range(lo..=hi), rng.gen_range(1..=den))
}

pub fn random_vector<R: rand::Rng>(rng: &mut R, d: usize) -> selfsim::RationalVector {
    selfsim::RationalVector::new((0..d).map(|_| random_rational(rng, -20, 20, 12)).collect())
}

/// Random similitude with ratio in `(0, 1)` when `contracting`.
pub fn random_similitude<R: rand::Rng>(rng: &mut R, d: usize, contracting: bool) -> Similitude {
    let ratio = if contracting {
        let den = rng.gen_range(2..=9);
        q(rng.gen_range(1..den), den)
    } else {
        q(rng.gen_range(1..=9), rng.gen_range(1..=9))
    };
    Similitude::new(ratio, random_orth(rng, d), random_vector(rng, d)).unwrap()
}

/// Homogeneous system with one common orthogonal part whose level-1 cells
/// are distinct cells at even indices of a `q`-grid on the unit cube.
/// Returns the system and, for each map, its grid cell.
pub fn random_grid_system<R: rand::Rng>(rng: &mut R, d: usize) -> (selfsim::Ifs, Vec<Vec<i64>>) {
    use rand::seq::SliceRandom;
    use selfsim::{AxisBox, Ifs, RationalVector};
    let q_den: i64 = *[5, 7].choose(rng).unwrap();
    let per_axis: Vec<i64> = (0..q_den).step_by(2).collect();
    let mut all: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d {
        all = all
            .into_iter()
            .flat_map(|p| per_axis.iter().map(move |&k| [p.clone(), vec![k]].concat()))
            .collect();
    }
    all.shuffle(rng);
    let m = rng.gen_range(2..=all.len().min(4));
    let cells: Vec<Vec<i64>> = all.into_iter().take(m).collect();
    let orth = random_orth(rng, d);
    let r = q(1, q_den);
    let maps = cells
        .iter()
        .map(|cell| {
            // (r O x)_j ranges over [-r, 0] where the sign is negative
            let t = (0..d)
                .map(|j| {
                    let shift = if orth.signs()[j] < 0 {
                        r.clone()
                    } else {
                        Q::zero()
                    };
                    q(cell[j], q_den) + shift
                })
                .collect();
            Similitude::new(r.clone(), orth.clone(), RationalVector::new(t)).unwrap()
        })
        .collect();
    let unit = AxisBox::new(
        RationalVector::zeros(d),
        RationalVector::new(vec![Q::one(); d]),
    )
    .unwrap();
    (Ifs::with_box(maps, unit).unwrap(), cells)
}
