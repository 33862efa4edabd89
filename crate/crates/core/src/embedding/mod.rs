//! Self-embeddings `f(K) ⊂ K`: commensurability of ratios, exact relation
//! search, embedding certificates and the openness decision.

mod certificate;
mod commensurability;
mod openness;

pub use certificate::in_cover;
pub use certificate::{
    certify_embedding, match_cylinder, relation_search, CertificateError, EmbeddingCertificate,
    PowerIdentity, Relation, SearchBudget,
};
pub use commensurability::{log_commensurability, PowerRelation};
pub use openness::{
    aligned_power, openness_decision, CellUnion, ChainImage, ChainOrbit, OpennessCertificate,
    OpennessError, OpennessOptions, OrbitSampling,
};
