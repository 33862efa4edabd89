//! JSON documents: IFS files, single maps, embedding certificates and
//! symmetry problems. Rationals are written as `"p/q"` strings; integers are
//! also accepted as JSON numbers on input.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::embedding::{EmbeddingCertificate, Relation};
use crate::error::{Error, Result};
use crate::geometry::{AxisBox, RationalVector};
use crate::ifs::{Ifs, Word};
use crate::orth::SignedPermutation;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::similitude::Similitude;
use crate::symmetry::SymmetryProblem;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn value(&self) -> Result<Rational> {
        match self {
            Num::Int(n) => Ok(Rational::from_integer((*n).into())),
            Num::Text(s) => parse_rational(s),
        }
    }

    fn of(r: &Rational) -> Num {
        Num::Text(format_rational(r))
    }
}

fn vector(v: &[Num]) -> Result<RationalVector> {
    Ok(RationalVector(
        v.iter().map(Num::value).collect::<Result<_>>()?,
    ))
}

fn nums(v: &RationalVector) -> Vec<Num> {
    v.0.iter().map(Num::of).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrthDoc {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    ratio: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orth: Option<OrthDoc>,
    trans: Vec<Num>,
}

impl MapDoc {
    fn build(&self) -> Result<Similitude> {
        let trans = vector(&self.trans)?;
        let orth = match &self.orth {
            Some(o) => SignedPermutation::new(o.perm.clone(), o.signs.clone())?,
            None => SignedPermutation::identity(trans.dim()),
        };
        Similitude::new(self.ratio.value()?, orth, trans)
    }

    fn of(s: &Similitude) -> MapDoc {
        MapDoc {
            ratio: Num::of(s.ratio()),
            orth: (!s.orth().is_identity()).then(|| OrthDoc {
                perm: s.orth().perm().to_vec(),
                signs: s.orth().signs().to_vec(),
            }),
            trans: nums(s.trans()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxDoc {
    lower: Vec<Num>,
    upper: Vec<Num>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IfsDoc {
    dimension: usize,
    maps: Vec<MapDoc>,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    invariant: Option<BoxDoc>,
}

impl IfsDoc {
    fn build(&self) -> Result<Ifs> {
        let maps: Vec<Similitude> = self.maps.iter().map(MapDoc::build).collect::<Result<_>>()?;
        if let Some(bad) = maps.iter().find(|s| s.dim() != self.dimension) {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: bad.dim(),
            });
        }
        match &self.invariant {
            Some(b) => Ifs::with_box(maps, AxisBox::new(vector(&b.lower)?, vector(&b.upper)?)?),
            None => Ifs::new(maps),
        }
    }

    fn of(ifs: &Ifs, with_box: bool) -> IfsDoc {
        IfsDoc {
            dimension: ifs.dim(),
            maps: ifs.maps().iter().map(MapDoc::of).collect(),
            invariant: with_box.then(|| BoxDoc {
                lower: nums(ifs.invariant_box().lower()),
                upper: nums(ifs.invariant_box().upper()),
            }),
        }
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse_ifs(text: &str) -> Result<Ifs> {
    from_json::<IfsDoc>(text)?.build()
}

/// Always writes the invariant box, so a round trip preserves it.
pub fn ifs_to_json(ifs: &Ifs) -> String {
    to_json(&IfsDoc::of(ifs, true))
}

pub fn parse_map(text: &str) -> Result<Similitude> {
    from_json::<MapDoc>(text)?.build()
}

pub fn map_to_json(s: &Similitude) -> String {
    to_json(&MapDoc::of(s))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDoc {
    phi: IfsDoc,
    psi: IfsDoc,
}

pub fn parse_problem(text: &str) -> Result<SymmetryProblem> {
    let doc: ProblemDoc = from_json(text)?;
    Ok(SymmetryProblem::new(doc.phi.build()?, doc.psi.build()?))
}

pub fn problem_to_json(p: &SymmetryProblem) -> String {
    to_json(&ProblemDoc {
        phi: IfsDoc::of(&p.phi, false),
        psi: IfsDoc::of(&p.psi, false),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    generator: usize,
    letter: u32,
    word: String,
    /// `null` is the identity.
    target: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    generators: Vec<MapDoc>,
    relations: Vec<RelationDoc>,
    sha256: String,
}

pub fn certificate_to_json(c: &EmbeddingCertificate) -> String {
    to_json(&CertificateDoc {
        generators: c.generators.iter().map(MapDoc::of).collect(),
        relations: c
            .relations
            .iter()
            .map(|r| RelationDoc {
                generator: r.generator,
                letter: r.letter,
                word: r.word.to_string(),
                target: r.target,
            })
            .collect(),
        sha256: c.digest(),
    })
}

/// Parses a certificate document and checks its hash. Exactness is checked
/// separately by [`EmbeddingCertificate::verify`].
pub fn parse_certificate(text: &str) -> Result<EmbeddingCertificate> {
    let doc: CertificateDoc = from_json(text)?;
    let cert = EmbeddingCertificate {
        generators: doc
            .generators
            .iter()
            .map(MapDoc::build)
            .collect::<Result<_>>()?,
        relations: doc
            .relations
            .iter()
            .map(|r| {
                Ok(Relation {
                    generator: r.generator,
                    letter: r.letter,
                    word: r.word.parse::<Word>()?,
                    target: r.target,
                })
            })
            .collect::<Result<_>>()?,
    };
    if cert.digest() != doc.sha256 {
        return Err(Error::Parse(
            "certificate hash does not match its contents".into(),
        ));
    }
    Ok(cert)
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{certify_embedding, SearchBudget};
    use crate::fixtures;

    #[test]
    fn ifs_round_trip() {
        for ifs in [
            fixtures::cantor(),
            fixtures::example25(),
            fixtures::near_touching(),
        ] {
            assert_eq!(parse_ifs(&ifs_to_json(&ifs)).unwrap(), ifs);
        }
    }

    #[test]
    fn minimal_ifs_file() {
        let text = r#"{"dimension": 1, "maps": [{"ratio": "1/3", "trans": [0]}, {"ratio": "1/3", "trans": ["2/3"]}]}"#;
        assert_eq!(parse_ifs(text).unwrap(), fixtures::cantor());
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(
            parse_ifs(r#"{"dimension": 1, "maps": ["#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_ifs(r#"{"dimension": 1, "maps": [{"ratio": "1/0", "trans": [0]}]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_ifs(r#"{"dimension": 2, "maps": [{"ratio": "1/2", "trans": [0]}]}"#),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(parse_ifs(r#"{"dimension": 1, "maps": [{"ratio": "2", "trans": [0]}]}"#).is_err());
    }

    #[test]
    fn certificate_round_trip_and_tamper() {
        let e = fixtures::example25();
        let cert =
            certify_embedding(&fixtures::example25_f(), &e, &[], SearchBudget::default()).unwrap();
        let text = certificate_to_json(&cert);
        assert_eq!(parse_certificate(&text).unwrap(), cert);
        let tampered = text.replacen("\"87\"", "\"88\"", 1);
        assert_ne!(tampered, text);
        assert!(parse_certificate(&tampered).is_err());
    }

    #[test]
    fn problem_round_trip() {
        let p = fixtures::cantor_pair();
        let q = parse_problem(&problem_to_json(&p)).unwrap();
        assert_eq!(q.phi.maps(), p.phi.maps());
        assert_eq!(q.psi.maps(), p.psi.maps());
    }
}
