//! Existence conditions for p-symplectic structures, obstruction
//! certificates, and invariant-level cohomology.

pub mod closure;
pub mod cohomology;
pub mod families;
pub mod holomorphic;
pub mod obstruction;
pub mod sweep;

pub use closure::{closure_system, AnsatzSolution};
pub use cohomology::{bott_chern_dimensions, invariant_ddbar_lemma_check};
pub use holomorphic::{exact_simple_holomorphic_search, HolomorphicVerdict};
pub use obstruction::{verify_obstruction_certificate, CertificateMode, ObstructionCertificate};
