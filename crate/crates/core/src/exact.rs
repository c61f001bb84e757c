//! Brute-force existence oracles for complete allocations and house
//! allocations under each fairness concept.
//!
//! These are the ground truth every other solver is checked against. The
//! search is exhaustive over all `n^m` resource-to-agent assignments
//! (respectively all injective house assignments), optionally with provably
//! sound pruning: a partial assignment is abandoned only when some ordered
//! pair is already envious in *every* completion. Verdicts are identical
//! with pruning on or off; pruning only skips subtrees that contain no fair
//! leaf, so the first witness in enumeration order is unchanged.

use crate::model::{Allocation, FairnessConcept, Instance};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Search budget and pruning switches for the exact oracles.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Upper bound on the worst-case leaf count; instances whose full
    /// enumeration tree exceeds it are refused up front.
    pub leaf_budget: u64,
    /// Sound early-exit pruning. Disabling forces plain exhaustive
    /// enumeration with per-leaf fairness checks.
    pub pruning: bool,
}

pub const DEFAULT_LEAF_BUDGET: u64 = 200_000_000;

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            leaf_budget: DEFAULT_LEAF_BUDGET,
            pruning: true,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance too large for exhaustive search: {leaves} leaves exceed budget {budget}")]
    TooLarge { leaves: u128, budget: u64 },
    #[error("no house allocation shape possible: {agents} agents but only {resources} resources")]
    ShapeInfeasible { agents: usize, resources: usize },
}

/// Existence verdict for one (concept, problem-kind) cell, with a witness
/// when one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceEntry {
    pub exists: bool,
    pub witness: Option<Allocation>,
}

/// One value per fairness concept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerConcept<T> {
    pub sef: T,
    pub aef: T,
    pub saef: T,
}

impl<T> PerConcept<T> {
    pub fn get(&self, concept: FairnessConcept) -> &T {
        match concept {
            FairnessConcept::Sef => &self.sef,
            FairnessConcept::Aef => &self.aef,
            FairnessConcept::Saef => &self.saef,
        }
    }
}

/// The six existence booleans of an instance (three concepts, complete
/// allocations and house allocations), with optional witnesses.
///
/// House entries are `false` when `n > m`: no injective assignment exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceProfile {
    pub allocation: PerConcept<ExistenceEntry>,
    pub house: PerConcept<ExistenceEntry>,
}

const SEF: usize = 0;
const AEF: usize = 1;
const SAEF: usize = 2;

fn concept_index(c: FairnessConcept) -> usize {
    match c {
        FairnessConcept::Sef => SEF,
        FairnessConcept::Aef => AEF,
        FairnessConcept::Saef => SAEF,
    }
}

fn allocation_leaf_count(n: usize, m: usize) -> u128 {
    let mut leaves: u128 = 1;
    for _ in 0..m {
        leaves = leaves.saturating_mul(n as u128);
    }
    leaves
}

fn house_leaf_count(n: usize, m: usize) -> u128 {
    let mut leaves: u128 = 1;
    for k in 0..n {
        leaves = leaves.saturating_mul((m - k) as u128);
    }
    leaves
}

fn check_budget(leaves: u128, opts: &SearchOptions) -> Result<(), ExactError> {
    if leaves > opts.leaf_budget as u128 {
        return Err(ExactError::TooLarge {
            leaves,
            budget: opts.leaf_budget,
        });
    }
    Ok(())
}

/// Saved per-depth pruning state so backtracking can restore the envy
/// maxima in O(n).
#[derive(Default, Clone)]
struct SaveFrame {
    sum_max: Vec<u64>,
    avg_val: Vec<u64>,
    avg_w: Vec<u64>,
    both_num: Vec<u128>,
    both_w: Vec<u64>,
}

/// Exhaustive search over complete allocations, resources assigned in index
/// order and agents tried in index order. Tracks up to three concepts in a
/// single walk.
struct AllocSearch<'a> {
    inst: &'a Instance,
    n: usize,
    m: usize,
    pruning: bool,
    /// Utility columns, `cols[r * n + i] = u_i(r)`.
    cols: Vec<u64>,
    /// `bundle_val[i * n + j] = u_i(bundle_j)` for the current prefix.
    bundle_val: Vec<u64>,
    /// `rem[i]`: total utility agent i assigns to the not-yet-assigned
    /// resources. `bundle_val[i*n+i] + rem[i]` bounds i's final own value.
    rem: Vec<u64>,
    assign: Vec<usize>,
    // Per-agent envy maxima driving the sound cuts. For agent i:
    // - sum_max[i] = max over j != i of u_i(bundle_j);
    // - (avg_val, avg_w)[i] realizes max over j != i of u_i(bundle_j) / w_j;
    // - (both_num, both_w)[i] realizes max of
    //   u_i(bundle_j) * min(w_i, w_j) / w_j, which is exactly the SAEF
    //   unavoidable-envy threshold (the harder of the two conditions).
    sum_max: Vec<u64>,
    avg_val: Vec<u64>,
    avg_w: Vec<u64>,
    both_num: Vec<u128>,
    both_w: Vec<u64>,
    saves: Vec<SaveFrame>,
    wanted: [bool; 3],
    resolved: [bool; 3],
    exists: [bool; 3],
    witness: [Option<Allocation>; 3],
}

impl<'a> AllocSearch<'a> {
    fn new(inst: &'a Instance, wanted: [bool; 3], pruning: bool) -> Self {
        let n = inst.num_agents();
        let m = inst.num_resources();
        let mut cols = vec![0u64; m * n];
        for r in 0..m {
            for i in 0..n {
                cols[r * n + i] = inst.utility(i, r);
            }
        }
        let rem: Vec<u64> = (0..n)
            .map(|i| inst.utility_row(i).iter().sum())
            .collect();
        let frame = SaveFrame {
            sum_max: vec![0; n],
            avg_val: vec![0; n],
            avg_w: vec![1; n],
            both_num: vec![0; n],
            both_w: vec![1; n],
        };
        Self {
            inst,
            n,
            m,
            pruning,
            cols,
            bundle_val: vec![0; n * n],
            rem,
            assign: vec![0; m],
            sum_max: vec![0; n],
            avg_val: vec![0; n],
            avg_w: vec![1; n],
            both_num: vec![0; n],
            both_w: vec![1; n],
            saves: vec![frame; m],
            wanted,
            resolved: [false; 3],
            exists: [false; 3],
            witness: [None; 3].map(|_: Option<()>| None),
        }
    }

    fn all_resolved(&self) -> bool {
        (0..3).all(|c| !self.wanted[c] || self.resolved[c])
    }

    fn resolve_true(&mut self, c: usize) {
        if self.wanted[c] && !self.resolved[c] {
            self.resolved[c] = true;
            self.exists[c] = true;
            self.witness[c] = Some(Allocation::from_assignment(&self.assign, self.n));
        }
    }

    /// Pair (i, j) can never become SEF-fair: j's bundle is already worth
    /// more to i than everything i could still obtain.
    fn sum_dead(&self, i: usize) -> bool {
        let slack = self.bundle_val[i * self.n + i] + self.rem[i];
        self.sum_max[i] > slack
    }

    fn avg_dead(&self, i: usize) -> bool {
        let slack = self.bundle_val[i * self.n + i] + self.rem[i];
        (slack as u128) * (self.avg_w[i] as u128)
            < (self.avg_val[i] as u128) * (self.inst.weight(i) as u128)
    }

    fn both_dead(&self, i: usize) -> bool {
        let slack = self.bundle_val[i * self.n + i] + self.rem[i];
        (slack as u128) * (self.both_w[i] as u128) < self.both_num[i]
    }

    fn any_dead(&self, c: usize) -> bool {
        match c {
            SEF => (0..self.n).any(|i| self.sum_dead(i)),
            AEF => (0..self.n).any(|i| self.avg_dead(i)),
            _ => (0..self.n).any(|i| self.both_dead(i)),
        }
    }

    /// Fairness of the complete assignment at a leaf, evaluated directly
    /// from the accumulated bundle values (used when pruning is disabled).
    fn leaf_fair(&self, c: usize) -> bool {
        let n = self.n;
        for i in 0..n {
            let own = self.bundle_val[i * n + i];
            let w_i = self.inst.weight(i);
            for j in 0..n {
                if i == j {
                    continue;
                }
                let other = self.bundle_val[i * n + j];
                let w_j = self.inst.weight(j);
                let sum_ok = own >= other;
                let avg_ok = own as u128 * w_j as u128 >= other as u128 * w_i as u128;
                let envies = match c {
                    SEF => !sum_ok,
                    AEF => !avg_ok,
                    _ => !sum_ok && !avg_ok,
                };
                if envies {
                    return false;
                }
            }
        }
        true
    }

    fn assign_resource(&mut self, r: usize, k: usize) {
        let n = self.n;
        if self.pruning {
            let frame = &mut self.saves[r];
            frame.sum_max.copy_from_slice(&self.sum_max);
            frame.avg_val.copy_from_slice(&self.avg_val);
            frame.avg_w.copy_from_slice(&self.avg_w);
            frame.both_num.copy_from_slice(&self.both_num);
            frame.both_w.copy_from_slice(&self.both_w);
        }
        let w_k = self.inst.weight(k);
        for i in 0..n {
            let u = self.cols[r * n + i];
            self.rem[i] -= u;
            self.bundle_val[i * n + k] += u;
            if self.pruning && i != k {
                let bv = self.bundle_val[i * n + k];
                if bv > self.sum_max[i] {
                    self.sum_max[i] = bv;
                }
                if (bv as u128) * (self.avg_w[i] as u128)
                    > (self.avg_val[i] as u128) * (w_k as u128)
                {
                    self.avg_val[i] = bv;
                    self.avg_w[i] = w_k;
                }
                let num = bv as u128 * self.inst.weight(i).min(w_k) as u128;
                if num * (self.both_w[i] as u128) > self.both_num[i] * (w_k as u128) {
                    self.both_num[i] = num;
                    self.both_w[i] = w_k;
                }
            }
        }
        self.assign[r] = k;
    }

    fn unassign_resource(&mut self, r: usize, k: usize) {
        let n = self.n;
        for i in 0..n {
            let u = self.cols[r * n + i];
            self.rem[i] += u;
            self.bundle_val[i * n + k] -= u;
        }
        if self.pruning {
            let frame = &self.saves[r];
            self.sum_max.copy_from_slice(&frame.sum_max);
            self.avg_val.copy_from_slice(&frame.avg_val);
            self.avg_w.copy_from_slice(&frame.avg_w);
            self.both_num.copy_from_slice(&frame.both_num);
            self.both_w.copy_from_slice(&frame.both_w);
        }
    }

    fn dfs(&mut self, depth: usize, alive: [bool; 3]) {
        if depth == self.m {
            for c in 0..3 {
                if alive[c] && self.wanted[c] && !self.resolved[c] {
                    let fair = if self.pruning { true } else { self.leaf_fair(c) };
                    if fair {
                        self.resolve_true(c);
                        // Inheritability: a SEF- or AEF-fair allocation is
                        // SAEF-fair as well.
                        if c != SAEF {
                            self.resolve_true(SAEF);
                        }
                    }
                }
            }
            return;
        }
        for k in 0..self.n {
            self.assign_resource(depth, k);
            let mut child = [false; 3];
            let mut any = false;
            for c in 0..3 {
                if alive[c] && self.wanted[c] && !self.resolved[c] {
                    let dead = self.pruning && self.any_dead(c);
                    child[c] = !dead;
                    any |= child[c];
                }
            }
            if any {
                self.dfs(depth + 1, child);
            }
            self.unassign_resource(depth, k);
            if self.all_resolved() {
                return;
            }
        }
    }

    fn run(mut self) -> ([bool; 3], [Option<Allocation>; 3]) {
        self.dfs(0, [true; 3]);
        (self.exists, self.witness)
    }
}

/// Exhaustive search over house allocations: agents take houses in index
/// order, houses tried in index order, one house each, all distinct.
struct HouseSearch<'a> {
    inst: &'a Instance,
    n: usize,
    m: usize,
    pruning: bool,
    chosen: Vec<usize>,
    used: Vec<bool>,
    wanted: [bool; 3],
    resolved: [bool; 3],
    exists: [bool; 3],
    witness: [Option<Allocation>; 3],
}

impl<'a> HouseSearch<'a> {
    fn new(inst: &'a Instance, wanted: [bool; 3], pruning: bool) -> Self {
        let n = inst.num_agents();
        let m = inst.num_resources();
        Self {
            inst,
            n,
            m,
            pruning,
            chosen: vec![usize::MAX; n],
            used: vec![false; m],
            wanted,
            resolved: [false; 3],
            exists: [false; 3],
            witness: [None; 3].map(|_: Option<()>| None),
        }
    }

    fn all_resolved(&self) -> bool {
        (0..3).all(|c| !self.wanted[c] || self.resolved[c])
    }

    fn resolve_true(&mut self, c: usize) {
        if self.wanted[c] && !self.resolved[c] {
            self.resolved[c] = true;
            self.exists[c] = true;
            let bundles: Vec<Vec<usize>> = self.chosen.iter().map(|&h| vec![h]).collect();
            self.witness[c] = Some(
                Allocation::new(bundles, self.m).expect("house choices are distinct and in range"),
            );
        }
    }

    fn pair_envies(&self, i: usize, j: usize, c: usize) -> bool {
        let own = self.inst.utility(i, self.chosen[i]);
        let other = self.inst.utility(i, self.chosen[j]);
        let (w_i, w_j) = (self.inst.weight(i), self.inst.weight(j));
        let sum_ok = own >= other;
        let avg_ok = own as u128 * w_j as u128 >= other as u128 * w_i as u128;
        match c {
            SEF => !sum_ok,
            AEF => !avg_ok,
            _ => !sum_ok && !avg_ok,
        }
    }

    /// Envy created by the newest agent `i` against or from earlier agents.
    /// House bundles are final once assigned, so this is an exact cut.
    fn new_envy(&self, i: usize, c: usize) -> bool {
        (0..i).any(|j| self.pair_envies(i, j, c) || self.pair_envies(j, i, c))
    }

    fn leaf_fair(&self, c: usize) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.pair_envies(i, j, c) {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&mut self, agent: usize, alive: [bool; 3]) {
        if agent == self.n {
            for c in 0..3 {
                if alive[c] && self.wanted[c] && !self.resolved[c] {
                    let fair = if self.pruning { true } else { self.leaf_fair(c) };
                    if fair {
                        self.resolve_true(c);
                        if c != SAEF {
                            self.resolve_true(SAEF);
                        }
                    }
                }
            }
            return;
        }
        for h in 0..self.m {
            if self.used[h] {
                continue;
            }
            self.used[h] = true;
            self.chosen[agent] = h;
            let mut child = [false; 3];
            let mut any = false;
            for c in 0..3 {
                if alive[c] && self.wanted[c] && !self.resolved[c] {
                    let dead = self.pruning && self.new_envy(agent, c);
                    child[c] = !dead;
                    any |= child[c];
                }
            }
            if any {
                self.dfs(agent + 1, child);
            }
            self.chosen[agent] = usize::MAX;
            self.used[h] = false;
            if self.all_resolved() {
                return;
            }
        }
    }

    fn run(mut self) -> ([bool; 3], [Option<Allocation>; 3]) {
        self.dfs(0, [true; 3]);
        (self.exists, self.witness)
    }
}

/// Finds a complete allocation fair under `concept`, or `None` when no such
/// allocation exists. Enumeration assigns resources in index order to agents
/// tried in index order, so the witness is reproducible.
pub fn find_allocation_exact(
    inst: &Instance,
    concept: FairnessConcept,
    opts: &SearchOptions,
) -> Result<Option<Allocation>, ExactError> {
    check_budget(
        allocation_leaf_count(inst.num_agents(), inst.num_resources()),
        opts,
    )?;
    let mut wanted = [false; 3];
    wanted[concept_index(concept)] = true;
    let (_, mut witness) = AllocSearch::new(inst, wanted, opts.pruning).run();
    Ok(witness[concept_index(concept)].take())
}

/// Finds a fair house allocation (each agent exactly one resource), or
/// `None`. Errors when `n > m`: no house allocation has that shape.
pub fn find_house_exact(
    inst: &Instance,
    concept: FairnessConcept,
    opts: &SearchOptions,
) -> Result<Option<Allocation>, ExactError> {
    let (n, m) = (inst.num_agents(), inst.num_resources());
    if n > m {
        return Err(ExactError::ShapeInfeasible {
            agents: n,
            resources: m,
        });
    }
    check_budget(house_leaf_count(n, m), opts)?;
    let mut wanted = [false; 3];
    wanted[concept_index(concept)] = true;
    let (_, mut witness) = HouseSearch::new(inst, wanted, opts.pruning).run();
    Ok(witness[concept_index(concept)].take())
}

fn entries(exists: [bool; 3], witness: [Option<Allocation>; 3]) -> PerConcept<ExistenceEntry> {
    let [sef_w, aef_w, saef_w] = witness;
    PerConcept {
        sef: ExistenceEntry {
            exists: exists[SEF],
            witness: sef_w,
        },
        aef: ExistenceEntry {
            exists: exists[AEF],
            witness: aef_w,
        },
        saef: ExistenceEntry {
            exists: exists[SAEF],
            witness: saef_w,
        },
    }
}

/// Existence of fair complete allocations for all three concepts in one
/// shared enumeration pass.
pub fn allocation_existence(
    inst: &Instance,
    opts: &SearchOptions,
) -> Result<PerConcept<ExistenceEntry>, ExactError> {
    check_budget(
        allocation_leaf_count(inst.num_agents(), inst.num_resources()),
        opts,
    )?;
    let (exists, witness) = AllocSearch::new(inst, [true; 3], opts.pruning).run();
    let per = entries(exists, witness);
    assert_inheritable(&per);
    Ok(per)
}

/// Existence of fair house allocations for all three concepts. All-false
/// when `n > m` (no injective assignment exists).
pub fn house_existence(
    inst: &Instance,
    opts: &SearchOptions,
) -> Result<PerConcept<ExistenceEntry>, ExactError> {
    let (n, m) = (inst.num_agents(), inst.num_resources());
    if n > m {
        return Ok(entries([false; 3], [None, None, None]));
    }
    check_budget(house_leaf_count(n, m), opts)?;
    let (exists, witness) = HouseSearch::new(inst, [true; 3], opts.pruning).run();
    let per = entries(exists, witness);
    assert_inheritable(&per);
    Ok(per)
}

fn assert_inheritable(per: &PerConcept<ExistenceEntry>) {
    assert!(
        per.saef.exists >= per.sef.exists.max(per.aef.exists),
        "inheritability violated: SEF {} AEF {} SAEF {}",
        per.sef.exists,
        per.aef.exists,
        per.saef.exists
    );
}

/// All six existence verdicts of an instance.
pub fn existence_profile(
    inst: &Instance,
    opts: &SearchOptions,
) -> Result<ExistenceProfile, ExactError> {
    Ok(ExistenceProfile {
        allocation: allocation_existence(inst, opts)?,
        house: house_existence(inst, opts)?,
    })
}
