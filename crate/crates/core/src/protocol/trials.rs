//! Seeded Monte Carlo rounds and the exact distribution they sample.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, so
//! every trial depends on `(seed, i)` alone. Each trial consumes exactly
//! three `f64` draws in this order: axis, Bob's outcome, Alice's outcome.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{alice_measure, bob_measure, RetrodictionProtocol};
use crate::error::{Error, Result};
use crate::state::Sign;

/// Seed used when the caller supplies none.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug, Default, PartialEq)]
pub enum AxisChoice {
    #[default]
    Uniform,
    /// Relative weights, one per axis.
    Weighted(Vec<f64>),
}

impl AxisChoice {
    fn weights(&self, m: usize) -> Result<Vec<f64>> {
        match self {
            AxisChoice::Uniform => Ok(vec![1.0 / m as f64; m]),
            AxisChoice::Weighted(w) => {
                if w.len() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        found: w.len(),
                    });
                }
                let total: f64 = w.iter().sum();
                if w.iter().any(|x| !x.is_finite() || *x < 0.0) || total <= 0.0 {
                    return Err(Error::Precondition(
                        "axis weights must be finite, nonnegative and not all zero".into(),
                    ));
                }
                Ok(w.iter().map(|x| x / total).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    pub axis_choice: AxisChoice,
    pub keep_records: bool,
}

impl TrialConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        TrialConfig {
            trials,
            seed,
            axis_choice: AxisChoice::Uniform,
            keep_records: false,
        }
    }
}

/// One round: `correct` iff Alice's answer for the true axis is Bob's result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub chosen_axis: usize,
    pub bob_outcome: Sign,
    pub alice_outcome: usize,
    pub retrodictions: Vec<Sign>,
    pub correct: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AxisStats {
    pub axis: usize,
    pub chosen: usize,
    pub successes: usize,
    pub bob_up: usize,
    pub bob_down: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialStats {
    pub seed: u64,
    pub trials: usize,
    pub successes: usize,
    pub axis_weights: Vec<f64>,
    pub per_axis: Vec<AxisStats>,
    pub alice_counts: Vec<usize>,
    /// `joint_counts[l][η][j]`, η indexed by [`Sign::index`].
    pub joint_counts: Vec<[Vec<usize>; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<Vec<TrialRecord>>,
}

impl TrialStats {
    /// `successes / trials`; `None` for an empty run.
    pub fn success_rate(&self) -> Option<f64> {
        (self.trials > 0).then(|| self.successes as f64 / self.trials as f64)
    }
}

/// Independent rounds of Bob's measurement on a random axis, Alice's
/// measurement and her answers for every axis.
pub fn run_trials(protocol: &RetrodictionProtocol, config: &TrialConfig) -> Result<TrialStats> {
    let m = protocol.m();
    let k = protocol.k();
    let weights = config.axis_choice.weights(m)?;
    let mut stats = TrialStats {
        seed: config.seed,
        trials: config.trials,
        successes: 0,
        axis_weights: weights.clone(),
        per_axis: (0..m)
            .map(|axis| AxisStats {
                axis,
                ..AxisStats::default()
            })
            .collect(),
        alice_counts: vec![0; k],
        joint_counts: vec![[vec![0; k], vec![0; k]]; m],
        records: config.keep_records.then(Vec::new),
    };
    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial as u64);

        let u: f64 = rng.gen();
        let l = pick_axis(&weights, u);
        let (eta, post) = bob_measure(protocol, l, &mut rng)?;
        let j = alice_measure(&post, protocol.measurement(), &mut rng)?;
        let retrodictions: Vec<Sign> = (0..m)
            .map(|a| protocol.table().retrodict(j, a))
            .collect::<Result<_>>()?;
        let correct = retrodictions[l] == eta;

        let axis = &mut stats.per_axis[l];
        axis.chosen += 1;
        match eta {
            Sign::Up => axis.bob_up += 1,
            Sign::Down => axis.bob_down += 1,
        }
        if correct {
            axis.successes += 1;
            stats.successes += 1;
        }
        stats.alice_counts[j] += 1;
        stats.joint_counts[l][eta.index()][j] += 1;
        if let Some(records) = stats.records.as_mut() {
            records.push(TrialRecord {
                trial,
                chosen_axis: l,
                bob_outcome: eta,
                alice_outcome: j,
                retrodictions,
                correct,
            });
        }
    }
    Ok(stats)
}

fn pick_axis(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (l, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return l;
        }
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

/// Closed-form outcome probabilities under a uniform axis choice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    pub m: usize,
    pub k: usize,
    /// `‖φ_η(n_l)‖²`, indexed `[l][η]`.
    pub eta_probability: Vec<[f64; 2]>,
    /// `|⟨φ_j|φ_η(n_l)⟩|²`, indexed `[l][η][j]`.
    pub amplitude_weight: Vec<[Vec<f64>; 2]>,
}

/// Observed versus expected count for one `(l, η, j)` cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellComparison {
    pub axis: usize,
    pub eta: Sign,
    pub outcome: usize,
    pub expected: f64,
    pub observed: usize,
    pub sigma: f64,
    pub pass: bool,
}

impl OutcomeDistribution {
    /// `P(l, η, j) = (1/m) |⟨φ_j|φ_η(n_l)⟩|²`.
    pub fn joint(&self, l: usize, eta: Sign, j: usize) -> f64 {
        self.amplitude_weight[l][eta.index()][j] / self.m as f64
    }

    /// Sum of all joint probabilities.
    pub fn total(&self) -> f64 {
        (0..self.m)
            .map(|l| self.axis_marginal(l))
            .sum()
    }

    pub fn axis_marginal(&self, l: usize) -> f64 {
        Sign::BOTH
            .iter()
            .flat_map(|&eta| (0..self.k).map(move |j| (eta, j)))
            .map(|(eta, j)| self.joint(l, eta, j))
            .sum()
    }

    /// `P(j | l, η)`; zero when η is unreachable.
    pub fn conditional(&self, l: usize, eta: Sign, j: usize) -> f64 {
        let p = self.eta_probability[l][eta.index()];
        if p <= 0.0 {
            return 0.0;
        }
        self.amplitude_weight[l][eta.index()][j] / p
    }

    /// `P(j | l)` before η is revealed.
    pub fn alice_given_axis(&self, l: usize) -> Vec<f64> {
        (0..self.k)
            .map(|j| {
                Sign::BOTH
                    .iter()
                    .map(|&eta| self.amplitude_weight[l][eta.index()][j])
                    .sum()
            })
            .collect()
    }

    /// `max_j (max_l P(j|l) - min_l P(j|l))`: zero when Alice's outcome
    /// carries no information about the axis.
    pub fn leakage(&self) -> f64 {
        let per_axis: Vec<Vec<f64>> = (0..self.m).map(|l| self.alice_given_axis(l)).collect();
        (0..self.k)
            .map(|j| {
                let col = per_axis.iter().map(|r| r[j]);
                let hi = col.clone().fold(f64::NEG_INFINITY, f64::max);
                let lo = col.fold(f64::INFINITY, f64::min);
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    /// Compares sampled counts against the exact distribution using the
    /// axis weights the sample was drawn with; a cell passes when it lies
    /// within `sigmas` binomial standard deviations.
    pub fn compare(&self, stats: &TrialStats, sigmas: f64) -> Vec<CellComparison> {
        let n = stats.trials as f64;
        let mut out = Vec::new();
        for l in 0..self.m {
            let w = stats.axis_weights.get(l).copied().unwrap_or(0.0);
            for eta in Sign::BOTH {
                for j in 0..self.k {
                    let p = (w * self.amplitude_weight[l][eta.index()][j]).clamp(0.0, 1.0);
                    let expected = n * p;
                    let sigma = (n * p * (1.0 - p)).sqrt();
                    let observed = stats.joint_counts[l][eta.index()][j];
                    let dev = (observed as f64 - expected).abs();
                    let pass = if sigma > 0.0 {
                        dev <= sigmas * sigma
                    } else {
                        dev < 0.5
                    };
                    out.push(CellComparison {
                        axis: l,
                        eta,
                        outcome: j,
                        expected,
                        observed,
                        sigma,
                        pass,
                    });
                }
            }
        }
        out
    }
}

pub fn enumerate_outcomes(protocol: &RetrodictionProtocol) -> OutcomeDistribution {
    let meas = protocol.measurement();
    let mut eta_probability = Vec::with_capacity(protocol.m());
    let mut amplitude_weight = Vec::with_capacity(protocol.m());
    for l in 0..protocol.m() {
        let mut eta_p = [0.0; 2];
        let mut weights: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for eta in Sign::BOTH {
            let post = protocol.post_state(l, eta).expect("axis in range");
            eta_p[eta.index()] = post.norm_sqr();
            weights[eta.index()] = meas.probabilities(&post).expect("dims checked");
        }
        eta_probability.push(eta_p);
        amplitude_weight.push(weights);
    }
    OutcomeDistribution {
        m: protocol.m(),
        k: protocol.k(),
        eta_probability,
        amplitude_weight,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pick_axis_edges() {
        let w = [0.25, 0.25, 0.5];
        assert_eq!(pick_axis(&w, 0.0), 0);
        assert_eq!(pick_axis(&w, 0.3), 1);
        assert_eq!(pick_axis(&w, 0.999_999), 2);
        assert_eq!(pick_axis(&[0.5, 0.5, 0.0], 1.0), 1);
    }

    #[test]
    fn weights_validated() {
        assert!(AxisChoice::Weighted(vec![1.0]).weights(2).is_err());
        assert!(AxisChoice::Weighted(vec![-1.0, 2.0]).weights(2).is_err());
        assert_eq!(AxisChoice::Weighted(vec![1.0, 3.0]).weights(2).unwrap(), vec![0.25, 0.75]);
    }
}
