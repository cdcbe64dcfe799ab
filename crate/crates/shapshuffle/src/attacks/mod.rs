//! Score-shuffling attacks on batch scoring.
//!
//! The adversary here never changes model outputs, only their assignment to
//! rows within a batch, guided solely by protected-group membership. See
//! [`kernels`] for the shuffle algorithms, [`spec`](AttackSpec) for the
//! declarative configuration, and [`AdversarialScorer`] for the deployable
//! wrapper.

mod kernels;
mod scorer;
mod spec;
mod view;

pub use kernels::{
    apply_attack, apply_spec, attack_dominance, attack_mixing, attack_swapping, compose_hybrid,
};
pub use scorer::AdversarialScorer;
pub use spec::{AttackKind, AttackSpec, CoinVariant, HybridSpec, Modifiers};
pub use view::{prepare_sorted_view, SortedView};
