//! Passive single-setting fidelity estimation for thermal graph and
//! hypergraph states.
//!
//! - [`pauli`] and [`stabilizer`]: stabilizer generators and their exact
//!   products, as signed Pauli words or in a phase-polynomial normal form.
//! - [`thermal`]: closed forms for fidelity, stabilizer expectations,
//!   accuracy bounds, sample sizes and temperature inversion.
//! - [`sampler`]: Monte-Carlo execution of the measurement protocol.
//! - [`oracle`]: dense brute-force ground truth for small systems.
//! - [`identities`]: exact binomial identities behind the closed forms.
//! - [`supremacy`]: the restricted hypergraph family and the IQP
//!   certification rule.

pub mod bits;
pub mod error;
pub mod graph;
pub mod identities;
pub mod oracle;
pub mod pauli;
pub mod sampler;
pub mod stabilizer;
pub mod supremacy;
pub mod thermal;

pub use bits::BitVec;
pub use error::{Error, Result};
pub use graph::{GraphSpec, HypergraphSpec};
pub use pauli::{PauliString, SettingVector, Sign};
pub use stabilizer::StabilizerProduct;
pub use thermal::{Beta, BoundReport, ThermalParams};
