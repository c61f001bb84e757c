//! Random instance generation for the frequency experiments, plus the
//! canonical instance file format.
//!
//! Agents draw a linear preference order from one of two cultures —
//! impartial culture (IC, uniformly random permutations) or single-peaked
//! uniform peak (SPUP, a uniform peak on the identity axis extended by fair
//! coin flips to the left or right — then draw i.i.d. uniform utility
//! values which are sorted descending and assigned along the order, most
//! preferred resource first. Weights are i.i.d. uniform over the configured
//! range.
//!
//! All randomness comes from [`SplitMix64`], so equal seeds reproduce
//! byte-identical instances on every platform.

use crate::model::{Instance, ModelError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// SplitMix64 generator (Steele, Lea & Flood's `splitmix64`).
///
/// State advances by `s += 0x9E3779B97F4A7C15`; output is the advanced
/// state mixed by `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
/// z *= 0x94D049BB133111EB; z ^= z >> 31`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, bound)` by rejection of the biased tail.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform value in `[lo, hi]` inclusive.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.below(hi - lo + 1)
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

/// Seed for instance `index` in a run with base seed `base`: the SplitMix64
/// output mixes `base + (index + 1) * 0x9E3779B97F4A7C15`, so parallel
/// workers derive independent deterministic streams.
pub fn derived_seed(base: u64, index: u64) -> u64 {
    SplitMix64::new(base.wrapping_add((index + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))).next_u64()
}

/// Preference culture for generated orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Culture {
    /// Impartial culture: uniformly random permutation.
    Ic,
    /// Single-peaked uniform peak on the identity axis.
    Spup,
}

impl Culture {
    pub fn name(self) -> &'static str {
        match self {
            Culture::Ic => "ic",
            Culture::Spup => "spup",
        }
    }
}

impl std::fmt::Display for Culture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Culture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ic" => Ok(Culture::Ic),
            "spup" => Ok(Culture::Spup),
            other => Err(format!("unknown culture: {other}")),
        }
    }
}

/// A linear preference order over resources, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceOrder(pub Vec<usize>);

/// Uniformly random order (Fisher-Yates).
pub fn gen_order_ic(m: usize, rng: &mut SplitMix64) -> PreferenceOrder {
    let mut order: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        order.swap(i, j);
    }
    PreferenceOrder(order)
}

/// Single-peaked order on the identity axis `r_0 < r_1 < ... < r_{m-1}`:
/// uniform peak, then repeatedly extend to the nearer untaken resource on a
/// fair-coin side (taking the only side left once the other is exhausted).
pub fn gen_order_spup(m: usize, rng: &mut SplitMix64) -> PreferenceOrder {
    assert!(m >= 1);
    let peak = rng.below(m as u64) as usize;
    let mut order = Vec::with_capacity(m);
    order.push(peak);
    let (mut left, mut right) = (peak as isize - 1, peak + 1);
    while order.len() < m {
        let take_left = if left < 0 {
            false
        } else if right >= m {
            true
        } else {
            rng.coin()
        };
        if take_left {
            order.push(left as usize);
            left -= 1;
        } else {
            order.push(right);
            right += 1;
        }
    }
    PreferenceOrder(order)
}

/// Whether `order` is single-peaked with respect to `axis` (an ordering of
/// the same resources), peak taken as the top of the order: preference must
/// fall with axis distance from the peak on each side.
pub fn is_single_peaked(order: &PreferenceOrder, axis: &[usize]) -> bool {
    let m = order.0.len();
    if axis.len() != m {
        return false;
    }
    let mut axis_pos = vec![usize::MAX; m];
    for (p, &r) in axis.iter().enumerate() {
        if r >= m || axis_pos[r] != usize::MAX {
            return false;
        }
        axis_pos[r] = p;
    }
    let mut rank = vec![usize::MAX; m];
    for (p, &r) in order.0.iter().enumerate() {
        if r >= m || rank[r] != usize::MAX {
            return false;
        }
        rank[r] = p;
    }
    let peak_pos = axis_pos[order.0[0]];
    // On each side of the peak, rank must increase with axis distance.
    let mut prev_rank = 0;
    for p in (0..peak_pos).rev() {
        let r = axis[p];
        if rank[r] <= prev_rank {
            return false;
        }
        prev_rank = rank[r];
    }
    prev_rank = 0;
    for p in peak_pos + 1..m {
        let r = axis[p];
        if rank[r] <= prev_rank {
            return false;
        }
        prev_rank = rank[r];
    }
    true
}

/// Generation parameters for one random instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub agents: usize,
    pub resources: usize,
    pub culture: Culture,
    /// Inclusive utility value range, default `[1, 10000]`.
    pub utility_range: (u64, u64),
    /// Inclusive weight range, default `[1, 100]` (the alternative setting
    /// is `[101, 200]`).
    pub weight_range: (u64, u64),
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid range [{lo}, {hi}]: lo must be >= 1 and <= hi")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("instance needs at least one agent and one resource")]
    EmptyShape,
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl GenConfig {
    pub fn new(agents: usize, resources: usize, culture: Culture, seed: u64) -> Self {
        Self {
            agents,
            resources,
            culture,
            utility_range: (1, 10_000),
            weight_range: (1, 100),
            seed,
        }
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.agents == 0 || self.resources == 0 {
            return Err(GenError::EmptyShape);
        }
        for (lo, hi) in [self.utility_range, self.weight_range] {
            if lo < 1 || hi < lo {
                return Err(GenError::InvalidRange { lo, hi });
            }
        }
        Ok(())
    }
}

/// Draws one instance. Draw order is fixed: the n weights first, then per
/// agent a preference order followed by its m utility values.
pub fn gen_instance(config: &GenConfig) -> Result<Instance, GenError> {
    config.validate()?;
    let mut rng = SplitMix64::new(config.seed);
    let (n, m) = (config.agents, config.resources);
    let (wlo, whi) = config.weight_range;
    let (ulo, uhi) = config.utility_range;
    let weights: Vec<u64> = (0..n).map(|_| rng.range(wlo, whi)).collect();
    let mut utilities = Vec::with_capacity(n);
    for _ in 0..n {
        let order = match config.culture {
            Culture::Ic => gen_order_ic(m, &mut rng),
            Culture::Spup => gen_order_spup(m, &mut rng),
        };
        let mut values: Vec<u64> = (0..m).map(|_| rng.range(ulo, uhi)).collect();
        values.sort_unstable_by(|a, b| b.cmp(a));
        let mut row = vec![0u64; m];
        for (value, &resource) in values.into_iter().zip(order.0.iter()) {
            row[resource] = value;
        }
        utilities.push(row);
    }
    Ok(Instance::new(weights, utilities)?)
}

/// Optional provenance attached to serialized instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub culture: Option<Culture>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub utility_range: Option<(u64, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_range: Option<(u64, u64)>,
}

/// On-disk JSON document: `n`, `m`, `weights`, `utilities`, optional `meta`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceDoc {
    n: usize,
    m: usize,
    weights: Vec<u64>,
    utilities: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<InstanceMeta>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field n = {n} does not match {got} weights")]
    AgentCount { n: usize, got: usize },
    #[error("field m = {m} does not match utility row of length {got}")]
    ResourceCount { m: usize, got: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn serialize_instance(instance: &Instance, meta: Option<&InstanceMeta>) -> String {
    let doc = InstanceDoc {
        n: instance.num_agents(),
        m: instance.num_resources(),
        weights: instance.weights().to_vec(),
        utilities: (0..instance.num_agents())
            .map(|i| instance.utility_row(i).to_vec())
            .collect(),
        meta: meta.cloned(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("instance serialization");
    text.push('\n');
    text
}

pub fn parse_instance(text: &str) -> Result<(Instance, Option<InstanceMeta>), ParseError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    if doc.weights.len() != doc.n {
        return Err(ParseError::AgentCount {
            n: doc.n,
            got: doc.weights.len(),
        });
    }
    for row in &doc.utilities {
        if row.len() != doc.m {
            return Err(ParseError::ResourceCount {
                m: doc.m,
                got: row.len(),
            });
        }
    }
    if doc.utilities.len() != doc.n {
        return Err(ParseError::AgentCount {
            n: doc.n,
            got: doc.utilities.len(),
        });
    }
    Ok((Instance::new(doc.weights, doc.utilities)?, doc.meta))
}
