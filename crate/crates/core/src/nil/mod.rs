//! Nilpotency certificates for algebra-valued forms.

mod cert;
mod check;

pub use cert::{
    CertKind, ComponentVerdict, Mode, ModeRecord, NilCertificate, Subject, Verdict, Witness,
    CERT_SCHEMA_VERSION,
};
pub use check::{
    nil_bound, nil_degree, solv_verify, trees_for, weak_nil, NilOptions, ParenPolicy,
    QUOTIENT_ANNOTATION,
};
