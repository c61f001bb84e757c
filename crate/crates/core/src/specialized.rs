//! Polynomial-time solvers for restricted preference classes.
//!
//! - [`aef_identical01`]: AEF complete allocations under identical 0/1
//!   preferences reduce to a divisibility check on weight shares.
//! - [`saef_identical01_dp`]: SAEF complete allocations under identical 0/1
//!   preferences, an `O(n m^3)` dynamic program over weight-sorted agents.
//! - [`saef_house_01`]: SAEF house allocations under 0/1 preferences, which
//!   coincide with SEF house allocations there; solved by an iterative
//!   maximum-matching fixpoint.
//! - [`saef_house_identical_dp`]: SAEF house allocations under identical
//!   preferences, an `O(n m^2)` dynamic program over weight-sorted agents
//!   and utility-sorted resources.
//!
//! Every returned witness is re-verified against the envy predicates before
//! it leaves this module.

use crate::exact::{find_house_exact, ExactError, SearchOptions};
use crate::model::{is_complete, is_fair, is_house, Allocation, FairnessConcept, Instance};
use thiserror::Error;

/// Which restricted preference classes an instance belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreferenceClass {
    /// All agents share one utility function (equal matrix rows).
    pub identical: bool,
    /// Every utility value is 0 or 1.
    pub zero_one: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecializedError {
    #[error("solver requires {required} preferences")]
    WrongPreferenceClass { required: &'static str },
    #[error("no house allocation shape possible: {agents} agents but only {resources} resources")]
    ShapeInfeasible { agents: usize, resources: usize },
    #[error("oracle fallback failed: {0}")]
    Fallback(#[from] ExactError),
}

pub fn classify_preferences(instance: &Instance) -> PreferenceClass {
    let first = instance.utility_row(0);
    let identical = (1..instance.num_agents()).all(|i| instance.utility_row(i) == first);
    let zero_one = (0..instance.num_agents())
        .all(|i| instance.utility_row(i).iter().all(|&u| u <= 1));
    PreferenceClass {
        identical,
        zero_one,
    }
}

fn require_identical01(instance: &Instance) -> Result<(), SpecializedError> {
    let class = classify_preferences(instance);
    if !(class.identical && class.zero_one) {
        return Err(SpecializedError::WrongPreferenceClass {
            required: "identical 0/1",
        });
    }
    Ok(())
}

/// Indices of resources valued 1 (resp. 0) by the shared utility function.
fn split_by_value(instance: &Instance) -> (Vec<usize>, Vec<usize>) {
    let row = instance.utility_row(0);
    let ones = (0..row.len()).filter(|&r| row[r] == 1).collect();
    let zeros = (0..row.len()).filter(|&r| row[r] == 0).collect();
    (ones, zeros)
}

/// AEF complete allocation under identical 0/1 preferences.
///
/// Any AEF allocation equalizes `u(bundle_i) / w_i` across agents, so agent
/// i must receive exactly `w_i * m1 / sum(w)` of the `m1` one-valued
/// resources; an allocation exists iff that share is an integer for every
/// agent. Zero-valued resources carry no utility and go to agent 1.
pub fn aef_identical01(instance: &Instance) -> Result<Option<Allocation>, SpecializedError> {
    require_identical01(instance)?;
    let n = instance.num_agents();
    let (ones, zeros) = split_by_value(instance);
    let m1 = ones.len() as u128;
    let total_weight: u128 = instance.weights().iter().map(|&w| w as u128).sum();
    let mut shares = Vec::with_capacity(n);
    for i in 0..n {
        let numerator = instance.weight(i) as u128 * m1;
        if numerator % total_weight != 0 {
            return Ok(None);
        }
        shares.push((numerator / total_weight) as usize);
    }
    let mut bundles = vec![Vec::new(); n];
    let mut next = ones.into_iter();
    for (i, &share) in shares.iter().enumerate() {
        bundles[i].extend(next.by_ref().take(share));
    }
    bundles[0].extend(zeros);
    let allocation =
        Allocation::new(bundles, instance.num_resources()).expect("shares partition the resources");
    debug_assert!(is_fair(instance, &allocation, FairnessConcept::Aef));
    debug_assert!(is_complete(instance, &allocation));
    Ok(Some(allocation))
}

/// SAEF complete allocation under identical 0/1 preferences.
///
/// With agents sorted by weight ascending, an allocation is SAEF-fair iff
/// the one-valued counts `k_1 <= k_2 <= ...` are non-decreasing while the
/// per-weight ratios `k_i / w_i` are non-increasing. The table cell
/// `(i, j, k)` records whether the first `i` agents can absorb `j`
/// one-valued resources with agent `i` taking exactly `k >= 1` of them.
pub fn saef_identical01_dp(instance: &Instance) -> Result<Option<Allocation>, SpecializedError> {
    require_identical01(instance)?;
    let n = instance.num_agents();
    let (ones, zeros) = split_by_value(instance);
    let m1 = ones.len();

    // All-zero utilities: every allocation is fair; dump everything on
    // agent 1.
    if m1 == 0 {
        let mut bundles = vec![Vec::new(); n];
        bundles[0] = (0..instance.num_resources()).collect();
        let allocation = Allocation::new(bundles, instance.num_resources()).unwrap();
        debug_assert!(is_fair(instance, &allocation, FairnessConcept::Saef));
        return Ok(Some(allocation));
    }
    // Someone holds a one-valued resource, so every agent needs one.
    if m1 < n {
        return Ok(None);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (instance.weight(i), i));
    let w: Vec<u64> = order.iter().map(|&i| instance.weight(i)).collect();

    // back[i][j][k] = chosen k' for agent i-1, or EMPTY. Cell (i, j, k) is
    // reachable iff back != EMPTY (k' = k marks the base row).
    const EMPTY: u32 = u32::MAX;
    let width = m1 + 1;
    let idx = |i: usize, j: usize, k: usize| (i * width + j) * width + k;
    let mut back = vec![EMPTY; n * width * width];
    for k in 1..=m1 {
        back[idx(0, k, k)] = k as u32;
    }
    for i in 1..n {
        for j in 1..=m1 {
            for k in 1..=j {
                let rest = j - k;
                // Feasible predecessor: k' <= k (sum condition) and
                // k' * w_i >= k * w_{i-1} (cross-multiplied avg condition).
                for kp in 1..=k.min(rest) {
                    if back[idx(i - 1, rest, kp)] != EMPTY
                        && kp as u128 * w[i] as u128 >= k as u128 * w[i - 1] as u128
                    {
                        back[idx(i, j, k)] = kp as u32;
                        break;
                    }
                }
            }
        }
    }

    let last_k = (1..=m1).find(|&k| back[idx(n - 1, m1, k)] != EMPTY);
    let Some(mut k) = last_k else {
        return Ok(None);
    };

    // Walk the back-pointers to the per-agent one-valued counts (in weight
    // order), then hand out one-valued resources in index order.
    let mut counts = vec![0usize; n];
    let mut j = m1;
    for i in (0..n).rev() {
        counts[i] = k;
        let kp = back[idx(i, j, k)] as usize;
        j -= k;
        k = kp;
    }
    let mut bundles = vec![Vec::new(); n];
    let mut next = ones.into_iter();
    for (pos, &count) in counts.iter().enumerate() {
        bundles[order[pos]].extend(next.by_ref().take(count));
    }
    bundles[order[0]].extend(zeros);
    let allocation =
        Allocation::new(bundles, instance.num_resources()).expect("counts partition the resources");
    debug_assert!(is_fair(instance, &allocation, FairnessConcept::Saef));
    debug_assert!(is_complete(instance, &allocation));
    Ok(Some(allocation))
}

/// Deterministic augmenting-path maximum matching; `adj[i]` lists the
/// houses agent `i` values at 1 within the current pool.
fn max_matching(n: usize, m: usize, adj: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    const FREE: usize = usize::MAX;
    let mut agent_of = vec![FREE; m];
    let mut house_of = vec![FREE; n];

    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        agent_of: &mut [usize],
        house_of: &mut [usize],
        visited: &mut [bool],
    ) -> bool {
        for &h in &adj[i] {
            if visited[h] {
                continue;
            }
            visited[h] = true;
            if agent_of[h] == FREE
                || augment(agent_of[h], adj, agent_of, house_of, visited)
            {
                agent_of[h] = i;
                house_of[i] = h;
                return true;
            }
        }
        false
    }

    for i in 0..n {
        let mut visited = vec![false; m];
        augment(i, adj, &mut agent_of, &mut house_of, &mut visited);
    }
    (house_of, agent_of)
}

/// SAEF house allocation under 0/1 preferences.
///
/// With singleton bundles and 0/1 values, SAEF envy collapses to SEF envy,
/// so this solves the SEF house problem: agents matched to one-valued
/// houses never envy; every other agent must receive a zero-valued house
/// while no house it values is allocated at all. The loop keeps a candidate
/// pool, matches agents into it, and removes the valued houses of any agent
/// a maximum matching leaves unmatched — such houses cannot be allocated in
/// any fair outcome. It ends when the matching saturates, the unmatched
/// agents value nothing left in the pool, or the pool is exhausted.
pub fn saef_house_01(instance: &Instance) -> Result<Option<Allocation>, SpecializedError> {
    let class = classify_preferences(instance);
    if !class.zero_one {
        return Err(SpecializedError::WrongPreferenceClass { required: "0/1" });
    }
    let n = instance.num_agents();
    let m = instance.num_resources();
    if n > m {
        return Err(SpecializedError::ShapeInfeasible {
            agents: n,
            resources: m,
        });
    }

    let mut in_pool = vec![true; m];
    let outcome = loop {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..m)
                    .filter(|&h| in_pool[h] && instance.utility(i, h) == 1)
                    .collect()
            })
            .collect();
        let (house_of, _) = max_matching(n, m, &adj);
        let unmatched: Vec<usize> = (0..n).filter(|&i| house_of[i] == usize::MAX).collect();
        if unmatched.is_empty() {
            break Some(house_of);
        }
        let mut removed = false;
        for &i in &unmatched {
            for h in 0..m {
                if in_pool[h] && instance.utility(i, h) == 1 {
                    in_pool[h] = false;
                    removed = true;
                }
            }
        }
        let pool_size = in_pool.iter().filter(|&&p| p).count();
        if pool_size < n {
            break None;
        }
        if !removed {
            // Fixpoint: unmatched agents value nothing in the pool, so any
            // leftover pool houses satisfy them.
            let mut house_of = house_of;
            let free: Vec<usize> = (0..m)
                .filter(|&h| in_pool[h] && !house_of.contains(&h))
                .collect();
            let mut free = free.into_iter();
            for i in unmatched {
                house_of[i] = free.next().expect("pool holds at least n houses");
            }
            break Some(house_of);
        }
    };

    let Some(house_of) = outcome else {
        return Ok(None);
    };
    let bundles: Vec<Vec<usize>> = house_of.into_iter().map(|h| vec![h]).collect();
    let allocation = Allocation::new(bundles, m).expect("matched houses are distinct");
    if is_house(instance, &allocation)
        && is_fair(instance, &allocation, FairnessConcept::Saef)
        && is_fair(instance, &allocation, FairnessConcept::Sef)
    {
        Ok(Some(allocation))
    } else {
        // Construction failed verification; defer to the exhaustive oracle
        // rather than return an unverified answer.
        Ok(find_house_exact(
            instance,
            FairnessConcept::Saef,
            &SearchOptions::default(),
        )?)
    }
}

/// SAEF house allocation under identical preferences.
///
/// Agents sorted by weight ascending, resources by utility ascending; cell
/// `(i, j)` records whether agents `1..=i` can take houses among the first
/// `j` resources with agent `i` holding resource `j`, respecting the
/// non-decreasing-value / non-increasing-ratio characterization.
pub fn saef_house_identical_dp(
    instance: &Instance,
) -> Result<Option<Allocation>, SpecializedError> {
    let class = classify_preferences(instance);
    if !class.identical {
        return Err(SpecializedError::WrongPreferenceClass {
            required: "identical",
        });
    }
    let n = instance.num_agents();
    let m = instance.num_resources();
    if n > m {
        return Err(SpecializedError::ShapeInfeasible {
            agents: n,
            resources: m,
        });
    }

    let mut agent_order: Vec<usize> = (0..n).collect();
    agent_order.sort_by_key(|&i| (instance.weight(i), i));
    let w: Vec<u64> = agent_order.iter().map(|&i| instance.weight(i)).collect();
    let mut resource_order: Vec<usize> = (0..m).collect();
    resource_order.sort_by_key(|&r| (instance.utility(0, r), r));
    let value: Vec<u64> = resource_order
        .iter()
        .map(|&r| instance.utility(0, r))
        .collect();

    // back[i][j] = predecessor resource position for agent i-1, EMPTY if
    // unreachable; the base row marks itself.
    const EMPTY: u32 = u32::MAX;
    let idx = |i: usize, j: usize| i * m + j;
    let mut back = vec![EMPTY; n * m];
    for j in 0..m {
        back[idx(0, j)] = j as u32;
    }
    for i in 1..n {
        for j in 0..m {
            // Sorted resources make the sum condition automatic for j' < j;
            // the cross-multiplied ratio condition remains.
            for jp in 0..j {
                if back[idx(i - 1, jp)] != EMPTY
                    && value[jp] as u128 * w[i] as u128 >= value[j] as u128 * w[i - 1] as u128
                {
                    back[idx(i, j)] = jp as u32;
                    break;
                }
            }
        }
    }

    let Some(mut j) = (0..m).find(|&j| back[idx(n - 1, j)] != EMPTY) else {
        return Ok(None);
    };
    let mut bundles = vec![Vec::new(); n];
    for i in (0..n).rev() {
        bundles[agent_order[i]] = vec![resource_order[j]];
        j = back[idx(i, j)] as usize;
    }
    let allocation = Allocation::new(bundles, m).expect("distinct sorted positions");
    debug_assert!(is_house(instance, &allocation));
    debug_assert!(is_fair(instance, &allocation, FairnessConcept::Saef));
    Ok(Some(allocation))
}
