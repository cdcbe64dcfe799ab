//! Synthetic dataset generators.
//!
//! Three statistically plausible stand-ins for familiar tabular scoring
//! settings. All draws come from a single seeded stream with a fixed
//! per-row draw count, so a (template, n, seed) triple always reproduces
//! the same dataset bit for bit.

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Dataset, Direction, FeatureRole, FeatureSchema, FeatureSpec};

/// Available generator templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthTemplate {
    /// Graduate-admission style: three correlated test scores driven by a
    /// latent ability, plus a binary research flag (protected) that also
    /// correlates with ability. Higher scores are better.
    Admission,
    /// Clinic-screening style: six binary symptoms independent of the two
    /// protected attributes (sex, age group), plus a diagnosis label driven
    /// by the symptoms alone. Higher scores are better.
    Diabetes,
    /// Consumer-credit style: a single positive burden feature
    /// (installment rate as % of income) where *lower* is better, plus a
    /// balanced gender flag. Lower scores are better.
    Credit,
}

impl fmt::Display for SynthTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SynthTemplate::Admission => "admission",
            SynthTemplate::Diabetes => "diabetes",
            SynthTemplate::Credit => "credit",
        };
        f.write_str(s)
    }
}

impl FromStr for SynthTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "admission" => Ok(SynthTemplate::Admission),
            "diabetes" => Ok(SynthTemplate::Diabetes),
            "credit" => Ok(SynthTemplate::Credit),
            other => Err(Error::Config(format!(
                "unknown synthetic template \"{other}\" (expected admission, diabetes or credit)"
            ))),
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Generate `n` rows from a template. `n` must be at least 10.
pub fn synth_dataset(template: SynthTemplate, n: usize, seed: u64) -> Result<Dataset> {
    if n < 10 {
        return Err(Error::Config(format!(
            "synthetic datasets need at least 10 rows, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match template {
        SynthTemplate::Admission => admission(n, &mut rng),
        SynthTemplate::Diabetes => diabetes(n, &mut rng),
        SynthTemplate::Credit => credit(n, &mut rng),
    }
}

fn admission(n: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let schema = FeatureSchema::new(
        vec![
            FeatureSpec::new("GRE", FeatureRole::Scoring),
            FeatureSpec::new("TOEFL", FeatureRole::Scoring),
            FeatureSpec::new("Rating", FeatureRole::Scoring),
            FeatureSpec::new("Research", FeatureRole::Protected),
        ],
        Direction::HigherIsSuperior,
    )?;
    let normal = Normal::new(0.0, 1.0).expect("valid parameters");
    let mut rows = Array2::zeros((n, 4));
    for i in 0..n {
        let ability: f64 = normal.sample(rng);
        let e1: f64 = normal.sample(rng);
        let e2: f64 = normal.sample(rng);
        let e3: f64 = normal.sample(rng);
        let research_draw: f64 = rng.random();
        rows[(i, 0)] = (316.0 + 11.0 * ability + 4.0 * e1).round().clamp(290.0, 340.0);
        rows[(i, 1)] = (107.0 + 5.0 * ability + 3.0 * e2).round().clamp(92.0, 120.0);
        rows[(i, 2)] = (3.0 + 1.1 * ability + 0.6 * e3).round().clamp(1.0, 5.0);
        rows[(i, 3)] = f64::from(research_draw < sigmoid(0.9 * ability + 0.2));
    }
    Dataset::new(rows, schema, None)
}

fn diabetes(n: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let schema = FeatureSchema::new(
        vec![
            FeatureSpec::new("Polyuria", FeatureRole::Scoring),
            FeatureSpec::new("Polydipsia", FeatureRole::Scoring),
            FeatureSpec::new("Weakness", FeatureRole::Scoring),
            FeatureSpec::new("Irritability", FeatureRole::Scoring),
            FeatureSpec::new("WeightLoss", FeatureRole::Scoring),
            FeatureSpec::new("Blurring", FeatureRole::Scoring),
            FeatureSpec::new("Sex", FeatureRole::Protected),
            FeatureSpec::new("AgeGroup", FeatureRole::Protected),
            FeatureSpec::new("Diabetes", FeatureRole::Label),
        ],
        Direction::HigherIsSuperior,
    )?;
    const SYMPTOM_RATES: [f64; 6] = [0.45, 0.40, 0.50, 0.35, 0.40, 0.35];
    const SYMPTOM_LOAD: [f64; 6] = [2.0, 1.8, 1.0, 0.8, 1.3, 0.7];
    let mut rows = Array2::zeros((n, 8));
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        // Protected attributes are independent of everything else: the
        // honest pipeline is fair by construction.
        rows[(i, 6)] = f64::from(rng.random::<f64>() < 0.5);
        rows[(i, 7)] = f64::from(rng.random::<f64>() < 0.5);
        let mut risk = -2.4;
        for (j, (&rate, &load)) in SYMPTOM_RATES.iter().zip(&SYMPTOM_LOAD).enumerate() {
            let present = rng.random::<f64>() < rate;
            rows[(i, j)] = f64::from(present);
            if present {
                risk += load;
            }
        }
        labels.push(u8::from(rng.random::<f64>() < sigmoid(2.0 * risk)));
    }
    Dataset::new(rows, schema, Some(labels))
}

fn credit(n: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let schema = FeatureSchema::new(
        vec![
            FeatureSpec::new("LoanRatePctIncome", FeatureRole::Scoring),
            FeatureSpec::new("Gender", FeatureRole::Protected),
        ],
        Direction::LowerIsSuperior,
    )?;
    let mut rows = Array2::zeros((n, 2));
    for i in 0..n {
        let gender_draw: f64 = rng.random();
        // Installment burden spread evenly between 0.5% and 4% of income.
        rows[(i, 0)] = 0.5 + 3.5 * rng.random::<f64>();
        rows[(i, 1)] = f64::from(gender_draw < 0.5);
    }
    Dataset::new(rows, schema, None)
}
