//! Declarative attack configuration.
//!
//! An [`AttackSpec`] is either a single shuffle kernel with modifiers or a
//! hybrid of two single-kernel specs applied to the top and bottom halves
//! of the sorted batch. Specs serialize to JSON and are accepted by the CLI
//! and the experiment harness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the biased coin in the mixing kernel treats tails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CoinVariant {
    /// Tails falls through to a score comparison between the two queue
    /// fronts, so an all-tails run reproduces the unattacked order.
    #[default]
    Literal,
    /// Tails hands the next score to the unprivileged side unconditionally.
    Bernoulli,
}

/// The shuffle kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    /// Privileged rows take the best scores, preserving within-group order.
    Dominance,
    /// Merge the two group queues, flipping a coin with `head_prob` for the
    /// privileged side at each step.
    Mixing {
        head_prob: f64,
        #[serde(default)]
        coin_variant: CoinVariant,
    },
    /// Bubble privileged rows upward with passes starting at the sorted
    /// position addressed by `quantile`.
    Swapping {
        quantile: f64,
        /// When set, group flags are not updated after a swap, so each
        /// unprivileged row moves at most one position per pass.
        #[serde(default)]
        single_step: bool,
    },
}

impl AttackKind {
    fn validate(&self) -> Result<()> {
        match *self {
            AttackKind::Dominance => Ok(()),
            AttackKind::Mixing { head_prob, .. } => {
                if (0.0..=1.0).contains(&head_prob) {
                    Ok(())
                } else {
                    Err(Error::Config(format!(
                        "mixing head_prob must lie in [0, 1], got {head_prob}"
                    )))
                }
            }
            AttackKind::Swapping { quantile, .. } => {
                if (0.0..=1.0).contains(&quantile) {
                    Ok(())
                } else {
                    Err(Error::Config(format!(
                        "swapping quantile must lie in [0, 1], got {quantile}"
                    )))
                }
            }
        }
    }

    /// Short label used in report tables.
    pub fn label(&self) -> &'static str {
        match self {
            AttackKind::Dominance => "dominance",
            AttackKind::Mixing { .. } => "mixing",
            AttackKind::Swapping { .. } => "swapping",
        }
    }

    /// The kernel's scalar parameter, if it has one.
    pub fn param(&self) -> Option<f64> {
        match *self {
            AttackKind::Dominance => None,
            AttackKind::Mixing { head_prob, .. } => Some(head_prob),
            AttackKind::Swapping { quantile, .. } => Some(quantile),
        }
    }
}

fn default_frequency() -> f64 {
    1.0
}

/// Scope restrictions layered on top of a kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Modifiers {
    /// Attack only the top `ceil(region * n)` sorted positions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<f64>,
    /// Probability that each elementary shuffle action actually executes.
    /// At the default of 1 the kernel runs unmodified (no extra coin flips).
    #[serde(default = "default_frequency")]
    pub frequency: f64,
    /// Hard cap on the number of executed elementary actions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_count: Option<u64>,
}

impl Default for Modifiers {
    fn default() -> Self {
        Modifiers {
            region: None,
            frequency: 1.0,
            max_count: None,
        }
    }
}

impl Modifiers {
    pub fn is_identity(&self) -> bool {
        self.region.is_none() && self.frequency == 1.0 && self.max_count.is_none()
    }

    fn validate(&self) -> Result<()> {
        if let Some(r) = self.region {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::Config(format!(
                    "region must lie in (0, 1], got {r}"
                )));
            }
        }
        if !(self.frequency > 0.0 && self.frequency <= 1.0) {
            return Err(Error::Config(format!(
                "frequency must lie in (0, 1], got {}",
                self.frequency
            )));
        }
        Ok(())
    }
}

/// Independent specs for the two halves of the sorted batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<Box<AttackSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<Box<AttackSpec>>,
}

/// A complete attack description: one kernel with modifiers, a hybrid of
/// two, or nothing (the identity).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AttackSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<AttackKind>,
    #[serde(default, skip_serializing_if = "Modifiers::is_default")]
    pub modifiers: Modifiers,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hybrid: Option<HybridSpec>,
}

impl Modifiers {
    fn is_default(&self) -> bool {
        self.is_identity()
    }
}

impl AttackSpec {
    /// The identity: scores pass through untouched.
    pub fn none() -> Self {
        AttackSpec::default()
    }

    pub fn single(kind: AttackKind) -> Self {
        AttackSpec {
            kind: Some(kind),
            ..Default::default()
        }
    }

    pub fn dominance() -> Self {
        AttackSpec::single(AttackKind::Dominance)
    }

    pub fn mixing(head_prob: f64) -> Self {
        AttackSpec::single(AttackKind::Mixing {
            head_prob,
            coin_variant: CoinVariant::Literal,
        })
    }

    pub fn swapping(quantile: f64) -> Self {
        AttackSpec::single(AttackKind::Swapping {
            quantile,
            single_step: false,
        })
    }

    /// Hybrid of two optional single-kernel specs.
    pub fn hybrid(top: Option<AttackSpec>, bottom: Option<AttackSpec>) -> Self {
        AttackSpec {
            kind: None,
            modifiers: Modifiers::default(),
            hybrid: Some(HybridSpec {
                top: top.map(Box::new),
                bottom: bottom.map(Box::new),
            }),
        }
    }

    pub fn with_region(mut self, region: f64) -> Self {
        self.modifiers.region = Some(region);
        self
    }

    pub fn with_frequency(mut self, frequency: f64) -> Self {
        self.modifiers.frequency = frequency;
        self
    }

    pub fn with_max_count(mut self, max_count: u64) -> Self {
        self.modifiers.max_count = Some(max_count);
        self
    }

    /// True when the spec is the identity.
    pub fn is_none(&self) -> bool {
        self.kind.is_none() && self.hybrid.is_none()
    }

    /// Check parameter ranges and structural rules. A spec may carry either
    /// a kernel or a hybrid, not both, and hybrid halves must be
    /// single-kernel specs.
    pub fn validate(&self) -> Result<()> {
        if self.kind.is_some() && self.hybrid.is_some() {
            return Err(Error::Config(
                "attack spec sets both a kernel and a hybrid".into(),
            ));
        }
        if let Some(kind) = &self.kind {
            kind.validate()?;
        }
        self.modifiers.validate()?;
        if let Some(hybrid) = &self.hybrid {
            if !self.modifiers.is_identity() {
                return Err(Error::Config(
                    "modifiers on a hybrid spec must sit on its halves".into(),
                ));
            }
            for (name, half) in [("top", &hybrid.top), ("bottom", &hybrid.bottom)] {
                if let Some(half) = half {
                    if half.hybrid.is_some() {
                        return Err(Error::Config(format!(
                            "hybrid {name} half must be a single-kernel spec"
                        )));
                    }
                    half.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Short label for tables: "none", "dominance", "mixing", ...,
    /// or "top+bottom" for hybrids.
    pub fn label(&self) -> String {
        if let Some(h) = &self.hybrid {
            let name = |half: &Option<Box<AttackSpec>>| {
                half.as_ref()
                    .and_then(|s| s.kind.as_ref())
                    .map_or("none", |k| k.label())
                    .to_string()
            };
            return format!("{}+{}", name(&h.top), name(&h.bottom));
        }
        match &self.kind {
            None => "none".to_string(),
            Some(k) => k.label().to_string(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: AttackSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        AttackSpec::from_json(&std::fs::read_to_string(path.as_ref())?)
    }
}
