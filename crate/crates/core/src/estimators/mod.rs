//! Stateless information-theoretic estimators. All values are in nats.

pub mod binned;
pub mod continuous;
pub mod discrete;
pub mod special;

pub use binned::{kl_divergence_binned, BinnedDistribution, DEFAULT_BINS, DEFAULT_SMOOTHING};
pub use continuous::{
    knn_differential_entropy, mi_components, mutual_information_knn, nmi_continuous, total_correlation, MiComponents,
};
pub use discrete::{
    conditional_entropy, discrete_entropy, joint_entropy, kl_divergence_discrete, mutual_information_discrete,
    nmi_discrete, DiscreteDistribution, JointDistribution,
};
pub use special::{digamma, unit_ball_volume};
