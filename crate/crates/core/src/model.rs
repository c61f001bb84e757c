//! Core domain types and exact envy predicates.
//!
//! Three fairness concepts are supported for allocations of indivisible
//! resources among weighted agents:
//!
//! - **SEF** (sum-envy-freeness): agent `i` does not envy agent `j` when
//!   `u_i(bundle_i) >= u_i(bundle_j)`.
//! - **AEF** (avg-envy-freeness): agent `i` does not envy agent `j` when
//!   `u_i(bundle_i) / w_i >= u_i(bundle_j) / w_j`.
//! - **SAEF** (sum-avg-envy-freeness): agent `i` does not envy agent `j`
//!   when at least one of the SEF and AEF conditions holds.
//!
//! All ratio comparisons are carried out with exact integer
//! cross-multiplication in 128-bit arithmetic; no floating point is used
//! anywhere in the predicates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Agent index, dense and 0-based. User-facing output renders ids 1-based.
pub type AgentId = usize;
/// Resource index, dense and 0-based. User-facing output renders ids 1-based.
pub type ResourceId = usize;

/// Upper bound on a single agent weight accepted by [`Instance::new`].
pub const MAX_WEIGHT: u64 = 1_000_000_000;
/// Upper bound on the total utility any single agent assigns to all
/// resources combined.
///
/// Together with [`MAX_WEIGHT`] this guarantees that every cross-multiplied
/// envy comparison (at most total-utility x weight x weight, i.e. 1e33)
/// stays well inside `u128`.
pub const MAX_TOTAL_UTILITY: u64 = 1_000_000_000_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("agent {agent} has non-positive weight")]
    NonPositiveWeight { agent: usize },
    #[error("agent {agent} has weight {weight} exceeding the supported maximum {max}")]
    WeightTooLarge { agent: usize, weight: u64, max: u64 },
    #[error("agent {agent} has total utility exceeding the supported maximum {max}")]
    TotalUtilityTooLarge { agent: usize, max: u64 },
    #[error("utility row {agent} has {got} entries, expected {expected}")]
    RowLengthMismatch {
        agent: usize,
        got: usize,
        expected: usize,
    },
    #[error("instance must have at least one agent")]
    NoAgents,
    #[error("resource index {resource} out of range (m = {num_resources})")]
    ResourceOutOfRange {
        resource: usize,
        num_resources: usize,
    },
    #[error("resource {resource} appears in more than one bundle")]
    DuplicateResource { resource: usize },
    #[error("allocation has {got} bundles, instance has {expected} agents")]
    AgentCountMismatch { got: usize, expected: usize },
}

/// A weighted fair-allocation instance: `n` agents with positive integer
/// weights and an `n x m` matrix of non-negative integer utilities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    weights: Vec<u64>,
    utilities: Vec<Vec<u64>>,
}

impl Instance {
    /// Validates weights (positive, bounded), utility row lengths and the
    /// per-agent total-utility bound, then builds the instance.
    pub fn new(weights: Vec<u64>, utilities: Vec<Vec<u64>>) -> Result<Self, ModelError> {
        if weights.is_empty() {
            return Err(ModelError::NoAgents);
        }
        let n = weights.len();
        for (agent, &w) in weights.iter().enumerate() {
            if w == 0 {
                return Err(ModelError::NonPositiveWeight { agent });
            }
            if w > MAX_WEIGHT {
                return Err(ModelError::WeightTooLarge {
                    agent,
                    weight: w,
                    max: MAX_WEIGHT,
                });
            }
        }
        if utilities.len() != n {
            return Err(ModelError::RowLengthMismatch {
                agent: utilities.len().min(n),
                got: utilities.len(),
                expected: n,
            });
        }
        let m = utilities.first().map_or(0, Vec::len);
        for (agent, row) in utilities.iter().enumerate() {
            if row.len() != m {
                return Err(ModelError::RowLengthMismatch {
                    agent,
                    got: row.len(),
                    expected: m,
                });
            }
            let mut total: u64 = 0;
            for &u in row {
                total = total.checked_add(u).filter(|&t| t <= MAX_TOTAL_UTILITY).ok_or(
                    ModelError::TotalUtilityTooLarge {
                        agent,
                        max: MAX_TOTAL_UTILITY,
                    },
                )?;
            }
        }
        Ok(Self { weights, utilities })
    }

    pub fn num_agents(&self) -> usize {
        self.weights.len()
    }

    pub fn num_resources(&self) -> usize {
        self.utilities[0].len()
    }

    pub fn weight(&self, agent: AgentId) -> u64 {
        self.weights[agent]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn utility(&self, agent: AgentId, resource: ResourceId) -> u64 {
        self.utilities[agent][resource]
    }

    pub fn utility_row(&self, agent: AgentId) -> &[u64] {
        &self.utilities[agent]
    }

    /// Additive bundle value: sum of `u_agent(r)` over the bundle.
    pub fn bundle_utility(&self, agent: AgentId, bundle: &[ResourceId]) -> Result<u64, ModelError> {
        let m = self.num_resources();
        let mut total = 0u64;
        for &r in bundle {
            if r >= m {
                return Err(ModelError::ResourceOutOfRange {
                    resource: r,
                    num_resources: m,
                });
            }
            total += self.utilities[agent][r];
        }
        Ok(total)
    }

    /// Checks that an allocation has one bundle per agent of this instance.
    pub fn check_allocation(&self, allocation: &Allocation) -> Result<(), ModelError> {
        if allocation.num_agents() != self.num_agents() {
            return Err(ModelError::AgentCountMismatch {
                got: allocation.num_agents(),
                expected: self.num_agents(),
            });
        }
        if let Some(&r) = allocation
            .bundles()
            .iter()
            .flatten()
            .find(|&&r| r >= self.num_resources())
        {
            return Err(ModelError::ResourceOutOfRange {
                resource: r,
                num_resources: self.num_resources(),
            });
        }
        Ok(())
    }
}

/// An allocation: one bundle of resource indices per agent, bundles pairwise
/// disjoint. Empty bundles are legal; completeness is a separate predicate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    bundles: Vec<Vec<ResourceId>>,
}

impl Allocation {
    /// Validates disjointness and index range, then builds the allocation.
    /// Bundles are stored sorted by resource index.
    pub fn new(bundles: Vec<Vec<ResourceId>>, num_resources: usize) -> Result<Self, ModelError> {
        let mut seen = vec![false; num_resources];
        for bundle in &bundles {
            for &r in bundle {
                if r >= num_resources {
                    return Err(ModelError::ResourceOutOfRange {
                        resource: r,
                        num_resources,
                    });
                }
                if seen[r] {
                    return Err(ModelError::DuplicateResource { resource: r });
                }
                seen[r] = true;
            }
        }
        let mut bundles = bundles;
        for bundle in &mut bundles {
            bundle.sort_unstable();
        }
        Ok(Self { bundles })
    }

    /// Builds the allocation mapping each resource to the agent given by
    /// `assignment[resource]`. Always complete by construction.
    pub fn from_assignment(assignment: &[AgentId], num_agents: usize) -> Self {
        let mut bundles = vec![Vec::new(); num_agents];
        for (r, &a) in assignment.iter().enumerate() {
            bundles[a].push(r);
        }
        Self { bundles }
    }

    pub fn num_agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: AgentId) -> &[ResourceId] {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[Vec<ResourceId>] {
        &self.bundles
    }
}

/// Which envy predicate to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FairnessConcept {
    Sef,
    Aef,
    Saef,
}

impl FairnessConcept {
    pub const ALL: [FairnessConcept; 3] =
        [FairnessConcept::Sef, FairnessConcept::Aef, FairnessConcept::Saef];

    pub fn name(self) -> &'static str {
        match self {
            FairnessConcept::Sef => "sef",
            FairnessConcept::Aef => "aef",
            FairnessConcept::Saef => "saef",
        }
    }
}

impl std::fmt::Display for FairnessConcept {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FairnessConcept {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sef" | "sum" => Ok(FairnessConcept::Sef),
            "aef" | "avg" => Ok(FairnessConcept::Aef),
            "saef" | "sumavg" => Ok(FairnessConcept::Saef),
            other => Err(format!("unknown fairness concept: {other}")),
        }
    }
}

/// One envious ordered pair together with which of the two underlying
/// conditions held (both must fail for SAEF envy).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvyPair {
    pub envious: AgentId,
    pub envied: AgentId,
    /// `u_i(bundle_i) >= u_i(bundle_j)` held.
    pub sum_held: bool,
    /// `u_i(bundle_i) * w_j >= u_i(bundle_j) * w_i` held.
    pub avg_held: bool,
}

/// All envious ordered pairs under a concept; empty iff the allocation is fair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvyReport {
    pub concept: FairnessConcept,
    pub pairs: Vec<EnvyPair>,
}

impl EnvyReport {
    pub fn is_fair(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// The SEF condition for ordered pair (i, j): own bundle worth at least as
/// much as j's bundle in i's eyes.
fn sum_condition(own: u64, other: u64) -> bool {
    own >= other
}

/// The AEF condition for ordered pair (i, j), cross-multiplied:
/// `u_i(bundle_i) * w_j >= u_i(bundle_j) * w_i`.
fn avg_condition(own: u64, other: u64, w_own: u64, w_other: u64) -> bool {
    own as u128 * w_other as u128 >= other as u128 * w_own as u128
}

fn envies_values(own: u64, other: u64, w_own: u64, w_other: u64, concept: FairnessConcept) -> bool {
    match concept {
        FairnessConcept::Sef => !sum_condition(own, other),
        FairnessConcept::Aef => !avg_condition(own, other, w_own, w_other),
        FairnessConcept::Saef => {
            !sum_condition(own, other) && !avg_condition(own, other, w_own, w_other)
        }
    }
}

/// Whether agent `i` envies agent `j` under `concept`. Self-comparison is
/// vacuous and returns false.
pub fn envies(
    instance: &Instance,
    allocation: &Allocation,
    i: AgentId,
    j: AgentId,
    concept: FairnessConcept,
) -> bool {
    if i == j {
        return false;
    }
    let own = instance
        .bundle_utility(i, allocation.bundle(i))
        .expect("allocation validated against instance");
    let other = instance
        .bundle_utility(i, allocation.bundle(j))
        .expect("allocation validated against instance");
    envies_values(own, other, instance.weight(i), instance.weight(j), concept)
}

/// True iff no ordered pair is envious under `concept`.
pub fn is_fair(instance: &Instance, allocation: &Allocation, concept: FairnessConcept) -> bool {
    let n = instance.num_agents();
    // Bundle values u_i(bundle_j) for all pairs, computed once.
    let values: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    instance
                        .bundle_utility(i, allocation.bundle(j))
                        .expect("allocation validated against instance")
                })
                .collect()
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            if i != j
                && envies_values(
                    values[i][i],
                    values[i][j],
                    instance.weight(i),
                    instance.weight(j),
                    concept,
                )
            {
                return false;
            }
        }
    }
    true
}

/// True iff every resource is assigned to some agent.
pub fn is_complete(instance: &Instance, allocation: &Allocation) -> bool {
    let assigned: usize = allocation.bundles().iter().map(Vec::len).sum();
    assigned == instance.num_resources()
}

/// True iff every bundle holds exactly one resource.
pub fn is_house(_instance: &Instance, allocation: &Allocation) -> bool {
    allocation.bundles().iter().all(|b| b.len() == 1)
}

/// Enumerates every envious ordered pair with per-pair condition diagnostics.
pub fn envy_report(
    instance: &Instance,
    allocation: &Allocation,
    concept: FairnessConcept,
) -> EnvyReport {
    let n = instance.num_agents();
    let mut pairs = Vec::new();
    for i in 0..n {
        let own = instance
            .bundle_utility(i, allocation.bundle(i))
            .expect("allocation validated against instance");
        for j in 0..n {
            if i == j {
                continue;
            }
            let other = instance
                .bundle_utility(i, allocation.bundle(j))
                .expect("allocation validated against instance");
            let (w_i, w_j) = (instance.weight(i), instance.weight(j));
            if envies_values(own, other, w_i, w_j, concept) {
                pairs.push(EnvyPair {
                    envious: i,
                    envied: j,
                    sum_held: sum_condition(own, other),
                    avg_held: avg_condition(own, other, w_i, w_j),
                });
            }
        }
    }
    EnvyReport { concept, pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FairnessConcept::{Aef, Saef, Sef};

    /// Two agents, two resources, everyone values every resource at `c`,
    /// weights 1 and 2.
    pub(crate) fn example_1(c: u64) -> Instance {
        Instance::new(vec![1, 2], vec![vec![c, c], vec![c, c]]).unwrap()
    }

    /// Two agents with weights 1 and 10; both value r1 at 5 and r2 at 10.
    pub(crate) fn example_2() -> Instance {
        Instance::new(vec![1, 10], vec![vec![5, 10], vec![5, 10]]).unwrap()
    }

    fn alloc(bundles: Vec<Vec<usize>>, m: usize) -> Allocation {
        Allocation::new(bundles, m).unwrap()
    }

    #[test]
    fn bundle_utility_examples() {
        let inst = example_2();
        assert_eq!(inst.bundle_utility(0, &[0, 1]).unwrap(), 15);
        assert_eq!(inst.bundle_utility(0, &[]).unwrap(), 0);

        let inst = Instance::new(vec![1], vec![vec![3, 4]]).unwrap();
        assert_eq!(inst.bundle_utility(0, &[0, 1]).unwrap(), 7);
    }

    #[test]
    fn bundle_utility_out_of_range() {
        let inst = example_2();
        assert!(matches!(
            inst.bundle_utility(0, &[2]),
            Err(ModelError::ResourceOutOfRange { resource: 2, .. })
        ));
    }

    #[test]
    fn envies_example_2_split() {
        let inst = example_2();
        let pi = alloc(vec![vec![0], vec![1]], 2);
        // Agent 1's sum condition fails (5 < 10) but avg holds (5*10 >= 10*1).
        assert!(!envies(&inst, &pi, 0, 1, Saef));
        assert!(envies(&inst, &pi, 0, 1, Sef));
        // Agent 2: sum holds, avg fails (10*1 < 5*10).
        assert!(envies(&inst, &pi, 1, 0, Aef));
        assert!(!envies(&inst, &pi, 1, 0, Saef));
    }

    #[test]
    fn envies_example_1_unit_utilities() {
        let inst = example_1(1);
        let pi = alloc(vec![vec![0], vec![1]], 2);
        // 1*1 < 1*2: agent 2's avg condition fails against agent 1.
        assert!(envies(&inst, &pi, 1, 0, Aef));
    }

    #[test]
    fn envies_empty_bundles() {
        let inst = example_2();
        let pi = alloc(vec![vec![], vec![]], 2);
        for c in FairnessConcept::ALL {
            assert!(!envies(&inst, &pi, 0, 1, c));
            assert!(!envies(&inst, &pi, 1, 0, c));
        }
    }

    #[test]
    fn is_fair_example_2() {
        let inst = example_2();
        let pi = alloc(vec![vec![0], vec![1]], 2);
        assert!(is_fair(&inst, &pi, Saef));
        assert!(!is_fair(&inst, &pi, Sef));
        assert!(!is_fair(&inst, &pi, Aef));
    }

    #[test]
    fn completeness_and_house_shapes() {
        let inst = example_2();
        assert!(is_complete(&inst, &alloc(vec![vec![0], vec![1]], 2)));
        assert!(!is_complete(&inst, &alloc(vec![vec![0], vec![]], 2)));

        let inst3 = Instance::new(vec![1, 1], vec![vec![1, 1, 1], vec![1, 1, 1]]).unwrap();
        assert!(is_house(&inst3, &alloc(vec![vec![0], vec![2]], 3)));
        assert!(!is_house(&inst3, &alloc(vec![vec![0, 1], vec![2]], 3)));
        assert!(!is_house(&inst3, &alloc(vec![vec![0], vec![]], 3)));
    }

    #[test]
    fn empty_resource_set_is_complete() {
        let inst = Instance::new(vec![1, 1], vec![vec![], vec![]]).unwrap();
        let pi = alloc(vec![vec![], vec![]], 0);
        assert!(is_complete(&inst, &pi));
        for c in FairnessConcept::ALL {
            assert!(is_fair(&inst, &pi, c));
        }
    }

    #[test]
    fn envy_report_examples() {
        let inst = example_1(1);
        let pi = alloc(vec![vec![0], vec![1]], 2);
        let report = envy_report(&inst, &pi, Aef);
        assert_eq!(report.pairs.len(), 1);
        assert_eq!((report.pairs[0].envious, report.pairs[0].envied), (1, 0));
        assert!(report.pairs[0].sum_held);
        assert!(!report.pairs[0].avg_held);

        let inst = example_2();
        let fair = alloc(vec![vec![0], vec![1]], 2);
        assert!(envy_report(&inst, &fair, Saef).is_fair());

        let lopsided = alloc(vec![vec![], vec![0, 1]], 2);
        let report = envy_report(&inst, &lopsided, Saef);
        assert_eq!(report.pairs.len(), 1);
        assert_eq!((report.pairs[0].envious, report.pairs[0].envied), (0, 1));
    }

    #[test]
    fn allocation_validation() {
        assert!(matches!(
            Allocation::new(vec![vec![0], vec![0]], 2),
            Err(ModelError::DuplicateResource { resource: 0 })
        ));
        assert!(matches!(
            Allocation::new(vec![vec![3]], 2),
            Err(ModelError::ResourceOutOfRange { resource: 3, .. })
        ));
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            Instance::new(vec![1, 0], vec![vec![1], vec![1]]),
            Err(ModelError::NonPositiveWeight { agent: 1 })
        ));
        assert!(matches!(
            Instance::new(vec![1], vec![vec![1, 2], vec![3]]),
            Err(ModelError::RowLengthMismatch { .. })
        ));
        assert!(Instance::new(vec![MAX_WEIGHT + 1], vec![vec![1]]).is_err());
        assert!(Instance::new(vec![1], vec![vec![MAX_TOTAL_UTILITY, 1]]).is_err());
    }

    /// Any positive common utility value gives the same verdicts in the
    /// all-equal-utilities instance.
    #[test]
    fn example_1_verdicts_independent_of_common_value() {
        for c in [1, 7, 100] {
            let inst = example_1(c);
            let split = alloc(vec![vec![0], vec![1]], 2);
            assert!(is_fair(&inst, &split, Sef));
            assert!(is_fair(&inst, &split, Saef));
            assert!(!is_fair(&inst, &split, Aef));
        }
    }

    #[test]
    fn saef_envy_requires_both_failures() {
        // Inheritability at the pair level: no SEF envy or no AEF envy
        // implies no SAEF envy.
        let inst = example_2();
        for bundles in [
            vec![vec![0], vec![1]],
            vec![vec![1], vec![0]],
            vec![vec![0, 1], vec![]],
            vec![vec![], vec![0, 1]],
        ] {
            let pi = alloc(bundles, 2);
            for i in 0..2 {
                for j in 0..2 {
                    if i != j && (!envies(&inst, &pi, i, j, Sef) || !envies(&inst, &pi, i, j, Aef))
                    {
                        assert!(!envies(&inst, &pi, i, j, Saef));
                    }
                }
            }
        }
    }
}
