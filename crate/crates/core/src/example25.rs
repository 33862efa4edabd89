//! End-to-end verification that the nine-map planar system and
//! `f(x) = x/6 + (15/8, -15/8)` give an embedded copy `f(K)` that is not
//! relatively open in `K`.
//!
//! The argument: `f(x_1)` is the fixed point of `phi_6`, so it lies in every
//! `phi_6^n(K)`. Each `phi_6^n phi_7(K)` contains exact points of `K`
//! within `|phi_6^n(K)|` of `f(x_1)`, and the unrolled embedding
//! certificate shows `f(K)` misses every such cell.

use std::fmt;

use crate::chains::{chain_decomposition, chain_level};
use crate::embedding::{certify_embedding, EmbeddingCertificate, SearchBudget};
use crate::error::Result;
use crate::geometry::RationalVector;
use crate::ifs::{Ifs, Word};
use crate::rational::{format_rational, int, pow, rat, Rational};
use crate::similitude::Similitude;
use crate::ssc::{check_ssc, SscResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub id: char,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: usize,
    /// Label `6^n 7`: the point `phi_6^n(x_7) = phi_6^n phi_7(x_7)`.
    pub label: Word,
    pub point: RationalVector,
    pub dist2: Rational,
    pub bound: Rational,
    /// Number of terms in the unrolled decomposition of `f(K)`.
    pub terms: usize,
}

#[derive(Clone, Debug)]
pub struct Example25Report {
    pub steps: Vec<Step>,
    pub x1: RationalVector,
    pub fx1: RationalVector,
    pub certificate: Option<EmbeddingCertificate>,
    pub witnesses: Vec<Witness>,
}

impl Example25Report {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }

    pub fn failed_step(&self) -> Option<&Step> {
        self.steps.iter().find(|s| !s.passed)
    }
}

impl fmt::Display for Example25Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "x1 = {}, f(x1) = {}", self.x1, self.fx1)?;
        for s in &self.steps {
            writeln!(
                f,
                "({}) {} {}: {}",
                s.id,
                if s.passed { "PASS" } else { "FAIL" },
                s.name,
                s.detail
            )?;
        }
        for w in &self.witnesses {
            writeln!(
                f,
                "n = {}: y_n = phi_6^{}(x_7) = {}, |y_n - f(x1)|^2 = {} <= {}",
                w.n,
                w.n,
                w.point,
                format_rational(&w.dist2),
                format_rational(&w.bound)
            )?;
        }
        if self.passed() {
            write!(f, "f(x1) is not an interior point of f(K) relative to K")?;
        }
        Ok(())
    }
}

/// Pairs `i -> j` with `f ∘ phi_i = phi_outer ∘ phi_j`, `j` ranging over
/// `targets`; `None` unless every `i` has exactly one partner and the
/// partners are distinct.
fn decomposition(
    ifs: &Ifs,
    f: &Similitude,
    sources: std::ops::RangeInclusive<u32>,
    outer: u32,
    targets: std::ops::RangeInclusive<u32>,
) -> Option<Vec<(u32, u32)>> {
    let mut pairs = Vec::new();
    for i in sources {
        let lhs = f.then_inner(ifs.map(i));
        let hits: Vec<u32> = targets
            .clone()
            .filter(|&j| ifs.map(outer).then_inner(ifs.map(j)) == lhs)
            .collect();
        if hits.len() != 1 || pairs.iter().any(|&(_, j)| j == hits[0]) {
            return None;
        }
        pairs.push((i, hits[0]));
    }
    Some(pairs)
}

/// Unrolls the certificate `rounds` times from `f`: every term is either a
/// cell `phi_w(K)` (`None`) or `phi_w(g(K)) ⊂ phi_w(K)` for a generator `g`.
pub fn unroll(
    cert: &EmbeddingCertificate,
    alphabet: u32,
    rounds: usize,
) -> Vec<(Word, Option<usize>)> {
    let mut terms = vec![(Word::empty(), Some(0))];
    for _ in 0..rounds {
        terms = terms
            .into_iter()
            .flat_map(|(w, g)| match g {
                None => vec![(w, None)],
                Some(g) => (1..=alphabet)
                    .map(|i| {
                        let rel = cert.relation(g, i).expect("complete certificate");
                        (w.concat(&rel.word), rel.target)
                    })
                    .collect(),
            })
            .collect();
    }
    terms
}

fn push(steps: &mut Vec<Step>, id: char, name: &'static str, passed: bool, detail: String) -> bool {
    steps.push(Step {
        id,
        name,
        passed,
        detail,
    });
    passed
}

/// Runs steps (a)-(e) and, for `nmax >= 1`, the disjointness and witness
/// steps (f), (g) for `n = 1..=nmax`. Stops at the first failing step.
pub fn verify_counterexample(
    ifs: &Ifs,
    f: &Similitude,
    nmax: usize,
    depth: usize,
) -> Result<Example25Report> {
    let x1 = ifs.fixed_points()[0].clone();
    let fx1 = f.apply(&x1)?;
    let mut report = Example25Report {
        steps: Vec::new(),
        x1,
        fx1,
        certificate: None,
        witnesses: Vec::new(),
    };
    let steps = &mut report.steps;

    let gap_floor = rat(1, 16);
    let ok = match check_ssc(ifs, depth) {
        SscResult::Certified { gap } => push(
            steps,
            'a',
            "strong separation",
            gap.lower >= gap_floor,
            format!(
                "gap^2 >= {} (required >= 1/16)",
                format_rational(&gap.lower)
            ),
        ),
        other => push(steps, 'a', "strong separation", false, format!("{other:?}")),
    };
    if !ok {
        return Ok(report);
    }

    let lhs = f.then_inner(ifs.map(1));
    let ok = push(
        steps,
        'b',
        "f o phi_1 = phi_6 o f",
        lhs == ifs.map(6).then_inner(f),
        format!("both sides {lhs}"),
    );
    if !ok {
        return Ok(report);
    }

    let e2 = decomposition(ifs, f, 2..=5, 8, 6..=9);
    let e3 = decomposition(ifs, f, 6..=9, 9, 6..=9);
    let ok = match (&e2, &e3) {
        (Some(a), Some(b)) => {
            let fmt = |outer: u32, v: &[(u32, u32)]| {
                v.iter()
                    .map(|(i, j)| format!("f o phi_{i} = phi_{outer} o phi_{j}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            push(
                steps,
                'c',
                "f(E2) = phi_8(E3), f(E3) = phi_9(E3)",
                true,
                format!(
                    "{}; {}; f o phi_2 = {}",
                    fmt(8, a),
                    fmt(9, b),
                    f.then_inner(ifs.map(2))
                ),
            )
        }
        _ => push(
            steps,
            'c',
            "f(E2) = phi_8(E3), f(E3) = phi_9(E3)",
            false,
            "no exact bijection".into(),
        ),
    };
    if !ok {
        return Ok(report);
    }

    let cert = certify_embedding(f, ifs, &[], SearchBudget::default());
    let ok = match &cert {
        Some(c) => push(
            steps,
            'd',
            "embedding certificate",
            c.generators.len() == 1 && c.verify(ifs).is_ok(),
            format!(
                "|G| = {}, {} relations, sha256 {}",
                c.generators.len(),
                c.relations.len(),
                c.digest()
            ),
        ),
        None => push(
            steps,
            'd',
            "embedding certificate",
            false,
            "search budget exhausted".into(),
        ),
    };
    report.certificate = cert;
    if !ok {
        return Ok(report);
    }

    let expected: Vec<Vec<Word>> = [vec![1], vec![2, 3, 4, 5], vec![6, 7, 8, 9]]
        .iter()
        .map(|c| c.iter().map(|&a| Word::letter(a)).collect())
        .collect();
    let chains = chain_level(ifs, depth).and_then(|n| chain_decomposition(ifs, n, depth));
    let ok = match chains {
        Ok(cs) => {
            let shown: Vec<String> = cs
                .chains
                .iter()
                .map(|c| {
                    format!(
                        "{{{}}}",
                        c.iter().map(Word::to_string).collect::<Vec<_>>().join(",")
                    )
                })
                .collect();
            push(
                steps,
                'e',
                "chains",
                cs.chains == expected && cs.verify(ifs.len()),
                format!("n = {}: {}", cs.n, shown.join(" ")),
            )
        }
        Err(e) => push(steps, 'e', "chains", false, e.to_string()),
    };
    if !ok || nmax == 0 {
        return Ok(report);
    }

    let cert = report.certificate.clone().expect("step (d) passed");
    let diam2 = int(72);
    let fixed6 = ifs.fixed_points()[5].clone();
    let steps = &mut report.steps;
    let mut disjoint = Vec::new();
    for n in 1..=nmax {
        let target = Word::repeat(6, n).push(7);
        let terms = unroll(&cert, ifs.len() as u32, n + 1);
        if let Some((w, _)) = terms.iter().find(|(w, _)| !w.incomparable(&target)) {
            push(
                steps,
                'f',
                "f(K) misses phi_6^n phi_7(K)",
                false,
                format!("n = {n}: term {w} is comparable with {target}"),
            );
            return Ok(report);
        }
        disjoint.push(terms.len());
    }
    push(
        steps,
        'f',
        "f(K) misses phi_6^n phi_7(K)",
        true,
        format!("n = 1..{nmax}: every unrolled term is prefix-incomparable with 6^n 7"),
    );

    let on_axis = report.fx1 == fixed6;
    let mut worst = None;
    for (n, terms) in (1..=nmax).zip(disjoint) {
        let label = Word::repeat(6, n).push(7);
        let point = ifs.point_of(&label)?;
        let dist2 = point.dist2(&report.fx1);
        let bound = &diam2 * pow(&rat(1, 36), n as i32);
        if dist2 > bound {
            worst = Some(n);
        }
        report.witnesses.push(Witness {
            n,
            label,
            point,
            dist2,
            bound,
            terms,
        });
    }
    let ok = on_axis && worst.is_none();
    push(
        steps,
        'g',
        "witnesses approach f(x1)",
        ok,
        match worst {
            _ if !on_axis => "f(x1) is not the fixed point of phi_6".into(),
            Some(n) => format!("n = {n}: witness too far"),
            None => format!(
                "f(x1) = {} is fixed by phi_6; |y_n - f(x1)|^2 <= 72/36^n",
                report.fx1
            ),
        },
    );
    Ok(report)
}

/// The bundled system and map.
pub fn verify_example25(nmax: usize, depth: usize) -> Result<Example25Report> {
    verify_counterexample(
        &crate::fixtures::example25(),
        &crate::fixtures::example25_f(),
        nmax,
        depth,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn full_run() {
        let r = verify_example25(3, 2).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.steps.len(), 7);
        assert_eq!(r.fx1, RationalVector(vec![rat(3, 2), rat(-3, 2)]));
        assert_eq!(r.x1, RationalVector(vec![rat(-9, 4), rat(9, 4)]));
        assert_eq!(r.witnesses.len(), 3);
    }

    #[test]
    fn nmax_zero_stops_after_chains() {
        let r = verify_example25(0, 2).unwrap();
        assert!(r.passed());
        let ids: String = r.steps.iter().map(|s| s.id).collect();
        assert_eq!(ids, "abcde");
    }

    #[test]
    fn wrong_map_fails_at_b() {
        let e = fixtures::example25();
        let g = e.map(6).clone();
        let r = verify_counterexample(&e, &g, 2, 2).unwrap();
        assert_eq!(r.failed_step().unwrap().id, 'b');
    }

    #[test]
    fn unrolling_prefixes() {
        let e = fixtures::example25();
        let cert =
            certify_embedding(&fixtures::example25_f(), &e, &[], SearchBudget::default()).unwrap();
        let terms = unroll(&cert, 9, 2);
        assert_eq!(terms.len(), 17);
        assert!(terms.contains(&("66".parse().unwrap(), Some(0))));
        assert!(terms.contains(&("687".parse().unwrap(), None)));
    }
}
