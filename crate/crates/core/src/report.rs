//! JSON result documents shared by the command line and the C interface.

use serde_json::{json, Value};

use crate::bounds::GapBounds;
use crate::chains::{ChainStructure, PairEvidence};
use crate::embedding::{EmbeddingCertificate, OpennessCertificate};
use crate::example25::Example25Report;
use crate::ifs::Word;
use crate::io;
use crate::rational::{format_rational, to_decimal};
use crate::ssc::SscResult;
use crate::symmetry::SymmetryOutcome;

pub fn gap_json(g: &GapBounds) -> Value {
    json!({
        "lower": format_rational(&g.lower),
        "upper": format_rational(&g.upper),
        "depth": g.depth,
        "witness": [g.witness.0.to_string(), g.witness.1.to_string()],
    })
}

pub fn words_json(ws: &[Word]) -> Value {
    Value::from(ws.iter().map(Word::to_string).collect::<Vec<_>>())
}

pub fn chains_json(cs: &ChainStructure) -> Value {
    let pair = |e: &PairEvidence| {
        json!({"a": e.a.to_string(), "b": e.b.to_string(),
               "lower": format_rational(&e.lower), "upper": format_rational(&e.upper)})
    };
    json!({
        "n": cs.n,
        "level": cs.level(),
        "threshold": format_rational(&cs.threshold),
        "diam2_upper": format_rational(&cs.diam2_upper),
        "depth": cs.depth,
        "chains": cs.chains.iter().map(|c| words_json(c)).collect::<Vec<_>>(),
        "separations": cs.separations.iter().map(pair).collect::<Vec<_>>(),
        "joins": cs.joins.iter().map(pair).collect::<Vec<_>>(),
        "flags": cs.flags.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>(),
        "coarsened": cs.is_coarsened(),
    })
}

pub fn chains_text(cs: &ChainStructure) -> String {
    let groups: Vec<String> = cs
        .chains
        .iter()
        .map(|c| {
            format!(
                "{{{}}}",
                c.iter().map(Word::to_string).collect::<Vec<_>>().join(", ")
            )
        })
        .collect();
    let mut text = format!(
        "chain level n = {}, threshold = {}\nchains: {}",
        cs.n,
        format_rational(&cs.threshold),
        groups.join(" ")
    );
    if cs.is_coarsened() {
        text.push_str(&format!(
            "\ncoarsened: {} undecided pairs were merged",
            cs.flags.len()
        ));
    }
    text
}

pub fn openness_json(c: &OpennessCertificate) -> Value {
    json!({
        "k": c.relation.k,
        "p": c.relation.p,
        "chains": chains_json(&c.chains),
        "images": c.images.iter().map(|i| json!({
            "chain": i.chain, "sample": i.sample.to_string(), "located": i.located.to_string(),
            "letter": i.letter, "target": i.target,
        })).collect::<Vec<_>>(),
        "orbits": c.orbits.iter().map(|o| json!({
            "start": o.start, "sequence": o.sequence, "s": o.s, "t": o.t,
        })).collect::<Vec<_>>(),
        "cells": {
            "level": c.union.level,
            "words": words_json(&c.union.words),
            "base_words": words_json(&c.union.base_words),
            "source": c.union.source,
        },
        "exact_cells": c.exact_cells,
        "certified_cells": c.certified_cells,
        "conclusion": c.conclusion,
    })
}

pub fn ssc_json(r: &SscResult) -> Value {
    match r {
        SscResult::Certified { gap } => json!({"status": "certified", "gap": gap_json(gap)}),
        SscResult::Violated { words, point } => json!({
            "status": "violated",
            "words": [words.0.to_string(), words.1.to_string()],
            "point": point.0.iter().map(format_rational).collect::<Vec<_>>(),
        }),
        SscResult::Unknown { gap, .. } => json!({"status": "unknown", "gap": gap_json(gap)}),
    }
}

pub fn certificate_json(c: &EmbeddingCertificate) -> Value {
    serde_json::from_str(&io::certificate_to_json(c)).expect("certificate documents are JSON")
}

pub fn symmetry_json(outcome: &SymmetryOutcome) -> Value {
    let check = |c: &crate::symmetry::CheckRecord| json!({"name": c.name, "detail": c.detail});
    match outcome {
        SymmetryOutcome::Symmetric(res) => json!({
            "status": "symmetric",
            "c": format_rational(&res.c),
            "c_normalized": format_rational(&res.c_normalized),
            "hull": [format_rational(&res.hull.0), format_rational(&res.hull.1)],
            "endpoints": res.endpoints.iter().map(|(a, b)| json!([format_rational(a), format_rational(b)])).collect::<Vec<_>>(),
            "reflection": res.reflection,
            "checks": res.checks.iter().map(check).collect::<Vec<_>>(),
        }),
        SymmetryOutcome::Counterevidence(rep) => json!({
            "status": "counterevidence",
            "passed": rep.passed.iter().map(check).collect::<Vec<_>>(),
            "failed": check(&rep.failed),
        }),
        SymmetryOutcome::Unknown(why) => json!({"status": "unknown", "reason": why}),
    }
}

pub fn example25_json(report: &Example25Report) -> Value {
    json!({
        "x1": report.x1.0.iter().map(format_rational).collect::<Vec<_>>(),
        "f_x1": report.fx1.0.iter().map(format_rational).collect::<Vec<_>>(),
        "steps": report.steps.iter().map(|s| json!({
            "id": s.id.to_string(), "name": s.name, "passed": s.passed, "detail": s.detail,
        })).collect::<Vec<_>>(),
        "witnesses": report.witnesses.iter().map(|w| json!({
            "n": w.n,
            "label": w.label.to_string(),
            "point": w.point.0.iter().map(format_rational).collect::<Vec<_>>(),
            "dist2": format_rational(&w.dist2),
            "bound": format_rational(&w.bound),
            "bound_decimal": to_decimal(&w.bound, 14),
        })).collect::<Vec<_>>(),
        "passed": report.passed(),
    })
}
