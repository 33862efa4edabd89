//! Two homogeneous separated systems on the line, one orientation
//! preserving and one reversing, with the same attractor `S`: decide the
//! constant `c` with `-S = S + c` and certify it by an exact reflection.

use std::fmt;

use num_traits::{One, Zero};

use crate::bounds::set_dist_bounds;
use crate::embedding::{certify_embedding, EmbeddingCertificate, SearchBudget};
use crate::error::{Error, Result};
use crate::geometry::RationalVector;
use crate::ifs::Ifs;
use crate::orth::SignedPermutation;
use crate::rational::{format_rational, Rational};
use crate::similitude::{solve_linear, Similitude};
use crate::ssc::{check_ssc, SscResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryProblem {
    /// Maps `x -> r x + a_i`.
    pub phi: Ifs,
    /// Maps `x -> -r x + b_j`.
    pub psi: Ifs,
}

fn sign(s: &Similitude) -> i8 {
    s.orth().signs()[0]
}

fn offset(s: &Similitude) -> &Rational {
    &s.trans().0[0]
}

fn line_map(ratio: Rational, sign: i8, a: Rational) -> Similitude {
    Similitude::new(
        ratio,
        SignedPermutation::new(vec![0], vec![sign]).expect("1d sign"),
        RationalVector(vec![a]),
    )
    .expect("positive ratio")
}

impl SymmetryProblem {
    pub fn new(phi: Ifs, psi: Ifs) -> Self {
        Self { phi, psi }
    }

    /// Checks dimension, orientations and the shared ratio; returns `r`.
    pub fn validate(&self) -> Result<Rational> {
        for (name, ifs, want) in [("phi", &self.phi, 1i8), ("psi", &self.psi, -1i8)] {
            if ifs.dim() != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    found: ifs.dim(),
                });
            }
            if ifs.maps().iter().any(|s| sign(s) != want) {
                return Err(Error::Invalid(format!(
                    "every {name} map must have orientation {want:+}"
                )));
            }
        }
        let r = self.phi.common_ratio().ok_or(Error::NotHomogeneous)?;
        if self.psi.common_ratio() != Some(r) {
            return Err(Error::Invalid("phi and psi must share one ratio".into()));
        }
        Ok(r.clone())
    }
}

/// Exact convex hull `[A, B]` of a 1d attractor.
///
/// `A` is `phi_i(A)` or `phi_i(B)` for the map attaining the minimum, and
/// likewise for `B`; every assignment gives a 2x2 linear system, and the
/// consistent solution is the hull.
pub fn attractor_hull(ifs: &Ifs) -> Result<(Rational, Rational)> {
    if ifs.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: ifs.dim(),
        });
    }
    let coeff = |s: &Similitude| {
        if sign(s) > 0 {
            s.ratio().clone()
        } else {
            -s.ratio().clone()
        }
    };
    let image = |s: &Similitude, a: &Rational, b: &Rational| {
        let (x, y) = (
            s.eval(&RationalVector(vec![a.clone()])),
            s.eval(&RationalVector(vec![b.clone()])),
        );
        let (x, y) = (x.0[0].clone(), y.0[0].clone());
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    };
    for lo in ifs.maps() {
        for hi in ifs.maps() {
            // Unknowns (A, B). Row 1: A = c A + a (or c B + a when lo reverses).
            let (cl, ch) = (coeff(lo), coeff(hi));
            let row_a = if sign(lo) > 0 {
                vec![Rational::one() - &cl, Rational::zero()]
            } else {
                vec![Rational::one(), -cl.clone()]
            };
            let row_b = if sign(hi) > 0 {
                vec![Rational::zero(), Rational::one() - &ch]
            } else {
                vec![-ch.clone(), Rational::one()]
            };
            let mut mat = vec![row_a, row_b];
            let mut rhs = vec![offset(lo).clone(), offset(hi).clone()];
            let Some(sol) = solve_linear(&mut mat, &mut rhs) else {
                continue;
            };
            let (a, b) = (sol[0].clone(), sol[1].clone());
            if a > b {
                continue;
            }
            let images: Vec<_> = ifs.maps().iter().map(|s| image(s, &a, &b)).collect();
            let min = images.iter().map(|(x, _)| x).min().expect("non-empty");
            let max = images.iter().map(|(_, y)| y).max().expect("non-empty");
            if *min == a && *max == b {
                if a == b {
                    return Err(Error::Invalid("attractor is a single point".into()));
                }
                return Ok((a, b));
            }
        }
    }
    unreachable!("the hull interval solves one of the assignments")
}

/// Conjugates by the affine map sending the hull `[A, B]` onto `[0, 1]`;
/// returns the conjugated system and `(A, B)`.
pub fn normalize_hull(ifs: &Ifs) -> Result<(Ifs, (Rational, Rational))> {
    let (a, b) = attractor_hull(ifs)?;
    let width = &b - &a;
    let maps = ifs
        .maps()
        .iter()
        .map(|s| {
            let sr = if sign(s) > 0 {
                s.ratio().clone()
            } else {
                -s.ratio().clone()
            };
            let t = (&sr * &a + offset(s) - &a) / &width;
            line_map(s.ratio().clone(), sign(s), t)
        })
        .collect();
    Ok((Ifs::new(maps)?, (a, b)))
}

/// `{g ∘ phi_i}` with `g(x) = -x + A + B` the reflection of the hull.
pub fn reflect_system(phi: &Ifs) -> Result<Ifs> {
    let (a, b) = attractor_hull(phi)?;
    let g = line_map(Rational::one(), -1, a + b);
    Ifs::new(phi.maps().iter().map(|s| g.then_inner(s)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SameAttractor {
    /// Certificates for `psi_j(S_phi) ⊂ S_phi`, one per `j`, plus
    /// squared-distance lower bounds certifying the images are disjoint.
    Certified {
        certificates: Vec<EmbeddingCertificate>,
        separations: Vec<(u32, u32, Rational)>,
    },
    Refuted(String),
    Unknown(String),
}

/// Certifies `S_psi = S_phi`: each `psi_j` embeds `S_phi` into itself, the
/// images are pairwise disjoint, and `m' = m`, so the images fill `S_phi` by
/// the measure identity and `S_phi` is the attractor of `psi`.
pub fn same_attractor_check(
    problem: &SymmetryProblem,
    depth: usize,
    budget: SearchBudget,
) -> SameAttractor {
    let (phi, psi) = (&problem.phi, &problem.psi);
    if phi.len() != psi.len() {
        return SameAttractor::Refuted(format!(
            "{} phi maps but {} psi maps",
            phi.len(),
            psi.len()
        ));
    }
    let mut certificates = Vec::with_capacity(psi.len());
    for j in psi.letters() {
        match certify_embedding(psi.map(j), phi, psi.maps(), budget) {
            Some(c) => certificates.push(c),
            None => {
                return SameAttractor::Unknown(format!(
                    "no embedding certificate for psi_{j} within budget"
                ))
            }
        }
    }
    let mut separations = Vec::new();
    for i in psi.letters() {
        for j in psi.letters().filter(|&j| j > i) {
            let gap = set_dist_bounds(phi, psi.map(i), psi.map(j), depth, Some(&Rational::zero()));
            if gap.lower.is_zero() {
                return SameAttractor::Unknown(format!("psi_{i}(S) and psi_{j}(S) not separated"));
            }
            separations.push((i, j, gap.lower));
        }
    }
    SameAttractor::Certified {
        certificates,
        separations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: &'static str,
    pub detail: String,
}

/// Hypothesis checks that passed, and the one that failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterevidenceReport {
    pub passed: Vec<CheckRecord>,
    pub failed: CheckRecord,
}

impl fmt::Display for CounterevidenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.passed {
            writeln!(f, "passed {}: {}", c.name, c.detail)?;
        }
        write!(f, "FAILED {}: {}", self.failed.name, self.failed.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryResult {
    /// `-S = S + c`.
    pub c: Rational,
    /// `c` for the hull normalized to `[0, 1]`; always `-1`.
    pub c_normalized: Rational,
    pub hull: (Rational, Rational),
    pub ratio: Rational,
    /// Normalized `(a_i, b_i - r)` in increasing order.
    pub endpoints: Vec<(Rational, Rational)>,
    /// `g ∘ phi_i = psi_j` for the reflection `g(x) = -x - c`.
    pub reflection: Vec<(u32, u32)>,
    pub same_attractor: Vec<EmbeddingCertificate>,
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum SymmetryOutcome {
    Symmetric(SymmetryResult),
    Counterevidence(CounterevidenceReport),
    Unknown(String),
}

fn rat_list<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> String {
    let parts: Vec<String> = xs.into_iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Verifies the hypotheses, the endpoint identities `b_i - r = a_i`, and a
/// reflection certificate.
pub fn symmetry_decision(
    problem: &SymmetryProblem,
    depth: usize,
    budget: SearchBudget,
) -> Result<SymmetryOutcome> {
    let r = problem.validate()?;
    let mut passed = Vec::new();
    macro_rules! pass {
        ($name:expr, $detail:expr) => {
            passed.push(CheckRecord {
                name: $name,
                detail: $detail,
            })
        };
    }
    macro_rules! fail {
        ($passed:expr, $name:expr, $detail:expr) => {
            return Ok(SymmetryOutcome::Counterevidence(CounterevidenceReport {
                passed: $passed,
                failed: CheckRecord {
                    name: $name,
                    detail: $detail,
                },
            }))
        };
    }
    pass!(
        "setup",
        format!(
            "dimension 1, opposite orientations, common ratio {}",
            format_rational(&r)
        )
    );
    let (m, m2) = (problem.phi.len(), problem.psi.len());
    if m != m2 {
        fail!(passed, "count", format!("m = {m} but m' = {m2}"));
    }
    pass!("count", format!("m = m' = {m}"));
    for (name, ifs) in [("phi", &problem.phi), ("psi", &problem.psi)] {
        match check_ssc(ifs, depth) {
            SscResult::Certified { gap } => {
                pass!(
                    "separation",
                    format!("{name}: gap^2 >= {}", format_rational(&gap.lower))
                )
            }
            SscResult::Violated { point, .. } => {
                return Err(Error::Invalid(format!(
                    "{name} violates strong separation at {point}"
                )))
            }
            SscResult::Unknown { depth, .. } => {
                return Ok(SymmetryOutcome::Unknown(format!(
                    "{name}: separation undecided at depth {depth}"
                )))
            }
        }
    }
    let (phi_n, hull) = normalize_hull(&problem.phi)?;
    let (psi_n, psi_hull) = normalize_hull(&problem.psi)?;
    if hull != psi_hull {
        fail!(
            passed,
            "hull",
            format!(
                "phi hull [{}, {}] but psi hull [{}, {}]",
                format_rational(&hull.0),
                format_rational(&hull.1),
                format_rational(&psi_hull.0),
                format_rational(&psi_hull.1)
            )
        );
    }
    pass!(
        "hull",
        format!(
            "[{}, {}]",
            format_rational(&hull.0),
            format_rational(&hull.1)
        )
    );
    let same = match same_attractor_check(problem, depth, budget) {
        SameAttractor::Certified { certificates, .. } => certificates,
        SameAttractor::Refuted(why) => fail!(passed, "same attractor", why),
        SameAttractor::Unknown(why) => return Ok(SymmetryOutcome::Unknown(why)),
    };
    pass!(
        "same attractor",
        format!("{} embedding certificates", same.len())
    );
    let mut a: Vec<Rational> = phi_n.maps().iter().map(|s| offset(s).clone()).collect();
    let mut b: Vec<Rational> = psi_n.maps().iter().map(|s| offset(s).clone()).collect();
    a.sort();
    b.sort();
    if !a[0].is_zero() {
        fail!(
            passed,
            "left endpoint",
            format!("a_1 = {} but expected 0", format_rational(&a[0]))
        );
    }
    if b[0] != r {
        fail!(
            passed,
            "left endpoint",
            format!(
                "b_1 = {} but expected r = {}",
                format_rational(&b[0]),
                format_rational(&r)
            )
        );
    }
    pass!(
        "left endpoint",
        format!("a_1 = 0, b_1 = {}", format_rational(&r))
    );
    let shifted: Vec<Rational> = b.iter().map(|x| x - &r).collect();
    if shifted != a {
        fail!(
            passed,
            "endpoints",
            format!("a = {} but b - r = {}", rat_list(&a), rat_list(&shifted))
        );
    }
    pass!("endpoints", format!("b - r = a = {}", rat_list(&a)));
    let sum = &hull.0 + &hull.1;
    let g = line_map(Rational::one(), -1, sum.clone());
    let mut reflection = Vec::with_capacity(m);
    for i in problem.phi.letters() {
        let image = g.then_inner(problem.phi.map(i));
        match problem
            .psi
            .letters()
            .find(|&j| *problem.psi.map(j) == image)
        {
            Some(j) => reflection.push((i, j)),
            None => fail!(
                passed,
                "reflection",
                format!("g o phi_{i} = {image} is not a psi map")
            ),
        }
    }
    let mut targets: Vec<u32> = reflection.iter().map(|&(_, j)| j).collect();
    targets.sort_unstable();
    targets.dedup();
    if targets.len() != m {
        fail!(
            passed,
            "reflection",
            "g o phi_i hit some psi map twice".into()
        );
    }
    pass!(
        "reflection",
        format!("g(x) = -x + {} permutes the pieces", format_rational(&sum))
    );
    Ok(SymmetryOutcome::Symmetric(SymmetryResult {
        c: -sum,
        c_normalized: -Rational::one(),
        hull,
        ratio: r,
        endpoints: a.into_iter().zip(shifted).collect(),
        reflection,
        same_attractor: same,
        checks: passed,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, rat};

    fn line(r: Rational, s: i8, a: Rational) -> Similitude {
        line_map(r, s, a)
    }

    #[test]
    fn hulls() {
        assert_eq!(
            attractor_hull(&fixtures::cantor()).unwrap(),
            (int(0), int(1))
        );
        let shifted = Ifs::new(vec![
            line(rat(1, 3), 1, int(1)),
            line(rat(1, 3), 1, rat(5, 3)),
        ])
        .unwrap();
        let (conj, hull) = normalize_hull(&shifted).unwrap();
        assert_eq!(hull, (rat(3, 2), rat(5, 2)));
        assert_eq!(conj, fixtures::cantor());
        let p = fixtures::cantor_pair();
        assert_eq!(attractor_hull(&p.psi).unwrap(), (int(0), int(1)));
        let broken = fixtures::broken_pair();
        assert_eq!(attractor_hull(&broken.psi).unwrap(), (rat(1, 8), rat(5, 8)));
    }

    #[test]
    fn normalized_hull_is_unit() {
        let broken = fixtures::broken_pair();
        let (conj, _) = normalize_hull(&broken.psi).unwrap();
        assert_eq!(attractor_hull(&conj).unwrap(), (int(0), int(1)));
    }

    #[test]
    fn cantor_pair_is_symmetric() {
        let out = symmetry_decision(&fixtures::cantor_pair(), 4, SearchBudget::default()).unwrap();
        let SymmetryOutcome::Symmetric(res) = out else {
            panic!("{out:?}")
        };
        assert_eq!(res.c, int(-1));
        assert_eq!(
            res.endpoints,
            vec![(int(0), int(0)), (rat(2, 3), rat(2, 3))]
        );
        assert_eq!(res.reflection, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn fifths_pair_is_symmetric() {
        let out = symmetry_decision(&fixtures::fifths_pair(), 4, SearchBudget::default()).unwrap();
        assert!(
            matches!(out, SymmetryOutcome::Symmetric(ref r) if r.c == int(-1)),
            "{out:?}"
        );
    }

    #[test]
    fn broken_pair_fails_at_hull() {
        let out = symmetry_decision(&fixtures::broken_pair(), 4, SearchBudget::default()).unwrap();
        let SymmetryOutcome::Counterevidence(rep) = out else {
            panic!("{out:?}")
        };
        assert_eq!(rep.failed.name, "hull");
        assert!(rep.passed.iter().any(|c| c.name == "separation"));
    }

    #[test]
    fn shifted_cantor_constant() {
        let phi = Ifs::new(vec![
            line(rat(1, 3), 1, int(1)),
            line(rat(1, 3), 1, rat(5, 3)),
        ])
        .unwrap();
        let psi = reflect_system(&phi).unwrap();
        let out =
            symmetry_decision(&SymmetryProblem::new(phi, psi), 4, SearchBudget::default()).unwrap();
        assert!(
            matches!(out, SymmetryOutcome::Symmetric(ref r) if r.c == int(-4)),
            "{out:?}"
        );
    }

    #[test]
    fn count_mismatch_is_refuted() {
        let p = SymmetryProblem::new(
            fixtures::cantor(),
            Ifs::new(vec![
                line(rat(1, 3), -1, rat(1, 3)),
                line(rat(1, 3), -1, rat(2, 3)),
                line(rat(1, 3), -1, int(1)),
            ])
            .unwrap(),
        );
        assert!(matches!(
            same_attractor_check(&p, 3, SearchBudget::default()),
            SameAttractor::Refuted(_)
        ));
    }

    #[test]
    fn zero_budget_is_unknown() {
        let budget = SearchBudget {
            max_word_len: 0,
            max_generators: 0,
        };
        assert!(matches!(
            same_attractor_check(&fixtures::cantor_pair(), 3, budget),
            SameAttractor::Unknown(_)
        ));
    }

    #[test]
    fn orientation_is_validated() {
        let p = SymmetryProblem::new(fixtures::cantor(), fixtures::cantor());
        assert!(p.validate().is_err());
    }
}
