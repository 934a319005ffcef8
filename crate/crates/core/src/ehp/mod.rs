//! Hilbert-Palatini forms over generic connections and threshold reports.

mod hp;
mod report;

pub use hp::{
    curvature, ep_equation_forms, hp_form, hp_parts, torsion, valued_in, ConnectionData,
    GradingUse, HpParams, HpParts, PowerShape,
};
pub use report::{
    theorem_a_report, Analysis, Condition, CoreCheck, EhpReport, GradePremise, NVerdict, Premise,
    PremiseRecord, TheoremOptions, Thresholds, REPORT_SCHEMA_VERSION,
};
