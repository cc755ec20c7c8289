//! Dense constructions of port states, measurements and dual certificates
//! on `A_1 ... A_N B`, used as ground truth for the closed forms at small
//! `(d, N)`.

mod certificate;
mod channel;
mod config;
mod measurement;
mod operator;
mod random;
mod spectrum;
mod states;
mod verify;

pub use certificate::{
    certificate_x, certificate_y, certify_optimality, certify_optimality_with, pgm_certificate, scaled,
    CertificateReport, Hermitized, CERTIFICATE_TOLERANCE,
};
pub use channel::{entanglement_fidelity, identity_channel_fidelity, teleportation_fidelity_direct, PortState};
pub use config::{OracleConfig, DEFAULT_CHANNEL_CAP, DEFAULT_ORACLE_CAP, MAX_PROJECTOR_PORTS, ORACLE_CAP_ENV};
pub use measurement::{
    povm_defect, pretty_good_measurement, success_probability, Povm, POVM_TOLERANCE, PSEUDO_INVERSE_CUTOFF,
};
pub use operator::{
    partial_trace_first, permutation_operator, tensor_power, DenseOperator, C64, HERMITIAN_TOLERANCE,
    HERMITIZATION_LIMIT,
};
pub use random::{haar_unitaries, haar_unitary, HAAR_SEED};
pub use spectrum::{compare_spectrum, oracle_operator, SpectrumComparison, SpectrumRow};
pub use states::{
    average_state, build_eta, build_port_operator, build_rho, eta_ensemble, maximally_entangled, pbt_ensemble,
    young_projector, young_projectors, Ensemble, PROBABILITY_TOLERANCE, STATE_TOLERANCE,
};
pub use verify::{
    verify, Check, Verification, FEASIBILITY_TOLERANCE, FIDELITY_TOLERANCE, GAP_TOLERANCE, SPECTRUM_TOLERANCE,
    TRACE_TOLERANCE,
};
