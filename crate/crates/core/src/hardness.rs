//! Polynomial-time reduction from 3-SAT to the SAEF house-allocation
//! problem, with a brute-force SAT oracle and an end-to-end equivalence
//! verifier for small formulas.
//!
//! The reduced instance uses two weight values {1, M} and three utility
//! values {0, 1, M}. Each variable contributes a pair of agents and a pair
//! of resources; in any fair house allocation the weight-1 agent of the pair
//! takes one of the two variable resources, which encodes the truth value.
//! Each clause contributes three weight-1 literal agents, one weight-M
//! collector agent, three literal resources and one reward resource; a fair
//! allocation must hand the reward to a literal agent whose literal is
//! true, which forces satisfiability, and conversely any satisfying
//! assignment extends to a fair allocation.

use crate::exact::{find_house_exact, ExactError, SearchOptions};
use crate::model::{is_fair, is_house, Allocation, FairnessConcept, Instance};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One literal: a variable index (0-based) and whether it is negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

/// A 3-CNF formula: every clause has exactly three literals; repeated
/// literals inside a clause are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HardnessError {
    #[error("literal references variable {var}, formula has {num_vars}")]
    VariableOutOfRange { var: usize, num_vars: usize },
    #[error("formula has {num_vars} variables, brute-force SAT supports at most {max}")]
    FormulaTooLarge { num_vars: usize, max: usize },
    #[error("reduced instance has {agents} agents, exhaustive verification supports at most {max}")]
    TooLargeForExhaustive { agents: usize, max: usize },
    #[error("clause {clause} is not satisfied by the assignment")]
    UnsatisfiedClause { clause: usize },
    #[error("allocation is not a SAEF-fair house allocation for the reduced instance")]
    AllocationNotFair,
    #[error("variable agent {agent} holds neither of its variable resources")]
    MalformedAllocation { agent: usize },
    #[error("extracted assignment fails clause {clause}; allocation was not fair")]
    ExtractionUnsatisfied { clause: usize },
    #[error("big-M must be at least 2, got {0}")]
    BigMTooSmall(u64),
    #[error("DIMACS parse error at line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, HardnessError> {
        for clause in &clauses {
            for literal in clause {
                if literal.var >= num_vars {
                    return Err(HardnessError::VariableOutOfRange {
                        var: literal.var,
                        num_vars,
                    });
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|clause| clause.iter().any(|l| l.holds(assignment)))
    }

    /// Parses DIMACS CNF: a `p cnf <vars> <clauses>` header, `c` comment
    /// lines, then clauses of exactly three non-zero literals each,
    /// terminated by 0.
    pub fn parse_dimacs(text: &str) -> Result<Self, HardnessError> {
        let mut num_vars = None;
        let mut declared_clauses = 0usize;
        let mut clauses: Vec<[Literal; 3]> = Vec::new();
        let mut current: Vec<Literal> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_id = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') {
                continue;
            }
            if trimmed.starts_with('p') {
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                if fields.len() != 4 || fields[1] != "cnf" {
                    return Err(HardnessError::Dimacs {
                        line: line_id,
                        message: format!("bad header '{trimmed}', expected 'p cnf <vars> <clauses>'"),
                    });
                }
                let parse = |s: &str| {
                    s.parse::<usize>().map_err(|_| HardnessError::Dimacs {
                        line: line_id,
                        message: format!("bad header count '{s}'"),
                    })
                };
                num_vars = Some(parse(fields[2])?);
                declared_clauses = parse(fields[3])?;
                continue;
            }
            let Some(n) = num_vars else {
                return Err(HardnessError::Dimacs {
                    line: line_id,
                    message: "clause before 'p cnf' header".into(),
                });
            };
            for token in trimmed.split_whitespace() {
                let value: i64 = token.parse().map_err(|_| HardnessError::Dimacs {
                    line: line_id,
                    message: format!("bad literal '{token}'"),
                })?;
                if value == 0 {
                    let Ok(clause): Result<[Literal; 3], _> = current.as_slice().try_into() else {
                        return Err(HardnessError::Dimacs {
                            line: line_id,
                            message: format!(
                                "clause has {} literals, exactly 3 required",
                                current.len()
                            ),
                        });
                    };
                    clauses.push(clause);
                    current.clear();
                } else {
                    let var = value.unsigned_abs() as usize - 1;
                    if var >= n {
                        return Err(HardnessError::Dimacs {
                            line: line_id,
                            message: format!("variable {} out of range 1..={n}", value.abs()),
                        });
                    }
                    current.push(Literal {
                        var,
                        negated: value < 0,
                    });
                }
            }
        }
        let Some(num_vars) = num_vars else {
            return Err(HardnessError::Dimacs {
                line: 0,
                message: "missing 'p cnf' header".into(),
            });
        };
        if !current.is_empty() {
            return Err(HardnessError::Dimacs {
                line: 0,
                message: "unterminated clause at end of input".into(),
            });
        }
        if clauses.len() != declared_clauses {
            return Err(HardnessError::Dimacs {
                line: 0,
                message: format!(
                    "header declares {declared_clauses} clauses, found {}",
                    clauses.len()
                ),
            });
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn to_dimacs(&self) -> String {
        use std::fmt::Write;
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for literal in clause {
                let v = literal.var as i64 + 1;
                write!(out, "{} ", if literal.negated { -v } else { v }).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Agent/resource ids of one variable gadget. The weight-1 agent's house
/// encodes the truth value; the weight-M guard takes the other resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableGadget {
    pub agent: usize,
    pub guard_agent: usize,
    pub true_resource: usize,
    pub false_resource: usize,
}

/// Agent/resource ids of one clause gadget: three weight-1 literal agents,
/// a weight-M collector that values their private resources, and the reward
/// resource only a true literal's agent can safely hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseGadget {
    pub literal_agents: [usize; 3],
    pub collector_agent: usize,
    pub literal_resources: [usize; 3],
    pub reward_resource: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetMap {
    pub variables: Vec<VariableGadget>,
    pub clauses: Vec<ClauseGadget>,
    pub big_m: u64,
}

/// Resource index of a literal (the house whose possession by the variable
/// agent makes the literal true) and of its complement.
fn literal_resource(map: &GadgetMap, literal: Literal) -> usize {
    let gadget = &map.variables[literal.var];
    if literal.negated {
        gadget.false_resource
    } else {
        gadget.true_resource
    }
}

fn complement_resource(map: &GadgetMap, literal: Literal) -> usize {
    let gadget = &map.variables[literal.var];
    if literal.negated {
        gadget.true_resource
    } else {
        gadget.false_resource
    }
}

/// Builds the reduced house-allocation instance with `M = 2n + 4m + 2`.
pub fn reduce_3sat(formula: &CnfFormula) -> (Instance, GadgetMap) {
    let default_m = (2 * formula.num_vars + 4 * formula.clauses.len() + 2) as u64;
    reduce_3sat_with_m(formula, default_m).expect("default big-M is at least 2")
}

/// Reduction with an explicit big-M; any value >= 2 preserves equivalence.
pub fn reduce_3sat_with_m(
    formula: &CnfFormula,
    big_m: u64,
) -> Result<(Instance, GadgetMap), HardnessError> {
    if big_m < 2 {
        return Err(HardnessError::BigMTooSmall(big_m));
    }
    let n_vars = formula.num_vars;
    let n_clauses = formula.clauses.len();
    let total = 2 * n_vars + 4 * n_clauses;

    let variables: Vec<VariableGadget> = (0..n_vars)
        .map(|i| VariableGadget {
            agent: 2 * i,
            guard_agent: 2 * i + 1,
            true_resource: 2 * i,
            false_resource: 2 * i + 1,
        })
        .collect();
    let clauses: Vec<ClauseGadget> = (0..n_clauses)
        .map(|j| {
            let base = 2 * n_vars + 4 * j;
            ClauseGadget {
                literal_agents: [base, base + 1, base + 2],
                collector_agent: base + 3,
                literal_resources: [base, base + 1, base + 2],
                reward_resource: base + 3,
            }
        })
        .collect();
    let map = GadgetMap {
        variables,
        clauses,
        big_m,
    };

    let mut weights = vec![0u64; total];
    let mut utilities = vec![vec![0u64; total]; total];
    for gadget in &map.variables {
        weights[gadget.agent] = 1;
        weights[gadget.guard_agent] = big_m;
        for r in [gadget.true_resource, gadget.false_resource] {
            utilities[gadget.agent][r] = 1;
            utilities[gadget.guard_agent][r] = big_m;
        }
    }
    for (j, gadget) in map.clauses.iter().enumerate() {
        for k in 0..3 {
            let agent = gadget.literal_agents[k];
            weights[agent] = 1;
            utilities[agent][gadget.literal_resources[k]] = big_m;
            utilities[agent][complement_resource(&map, formula.clauses[j][k])] = big_m;
            utilities[agent][gadget.reward_resource] = 1;
        }
        weights[gadget.collector_agent] = big_m;
        for &r in &gadget.literal_resources {
            utilities[gadget.collector_agent][r] = big_m;
        }
    }
    let instance = Instance::new(weights, utilities).expect("gadget construction is valid");
    Ok((instance, map))
}

/// Brute-force SAT: first satisfying assignment in lexicographic order
/// (variable 1 least significant), or `None`.
pub fn sat_brute_force(formula: &CnfFormula) -> Result<Option<Vec<bool>>, HardnessError> {
    const MAX_VARS: usize = 24;
    if formula.num_vars > MAX_VARS {
        return Err(HardnessError::FormulaTooLarge {
            num_vars: formula.num_vars,
            max: MAX_VARS,
        });
    }
    let n = formula.num_vars;
    for mask in 0u64..1 << n {
        let assignment: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if formula.evaluate(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// The proof's forward construction: true variables route the true resource
/// to the variable agent; in each clause the first true literal's agent
/// takes the reward while the collector takes that agent's private
/// resource; every other literal agent keeps its own.
pub fn assignment_to_house_allocation(
    formula: &CnfFormula,
    map: &GadgetMap,
    assignment: &[bool],
) -> Result<Allocation, HardnessError> {
    let total = 2 * formula.num_vars + 4 * formula.clauses.len();
    let mut bundles = vec![Vec::new(); total];
    for (i, gadget) in map.variables.iter().enumerate() {
        if assignment[i] {
            bundles[gadget.agent] = vec![gadget.true_resource];
            bundles[gadget.guard_agent] = vec![gadget.false_resource];
        } else {
            bundles[gadget.agent] = vec![gadget.false_resource];
            bundles[gadget.guard_agent] = vec![gadget.true_resource];
        }
    }
    for (j, gadget) in map.clauses.iter().enumerate() {
        let clause = &formula.clauses[j];
        let Some(first_true) = (0..3).find(|&k| clause[k].holds(assignment)) else {
            return Err(HardnessError::UnsatisfiedClause { clause: j });
        };
        for k in 0..3 {
            bundles[gadget.literal_agents[k]] = vec![gadget.literal_resources[k]];
        }
        bundles[gadget.literal_agents[first_true]] = vec![gadget.reward_resource];
        bundles[gadget.collector_agent] = vec![gadget.literal_resources[first_true]];
    }
    let allocation = Allocation::new(bundles, total).expect("gadget routing is a permutation");
    Ok(allocation)
}

/// The proof's backward direction: read each variable agent's house as the
/// truth value, checking fairness first and satisfaction afterwards.
pub fn extract_assignment(
    formula: &CnfFormula,
    map: &GadgetMap,
    allocation: &Allocation,
) -> Result<Vec<bool>, HardnessError> {
    let (instance, _) = reduce_3sat_with_m(formula, map.big_m)?;
    if !is_house(&instance, allocation) || !is_fair(&instance, allocation, FairnessConcept::Saef) {
        return Err(HardnessError::AllocationNotFair);
    }
    let mut assignment = Vec::with_capacity(formula.num_vars);
    for gadget in &map.variables {
        let house = allocation.bundle(gadget.agent)[0];
        if house == gadget.true_resource {
            assignment.push(true);
        } else if house == gadget.false_resource {
            assignment.push(false);
        } else {
            return Err(HardnessError::MalformedAllocation {
                agent: gadget.agent,
            });
        }
    }
    if let Some(clause) = (0..formula.clauses.len())
        .find(|&j| !formula.clauses[j].iter().any(|l| l.holds(&assignment)))
    {
        return Err(HardnessError::ExtractionUnsatisfied { clause });
    }
    Ok(assignment)
}

/// Exhaustive equivalence check: the formula is satisfiable iff the reduced
/// instance admits a SAEF house allocation. Guarded to at most 10 agents
/// (10! injective assignments) so both sides stay exhaustive.
pub fn verify_reduction(formula: &CnfFormula) -> Result<bool, HardnessError> {
    const MAX_AGENTS: usize = 10;
    let agents = 2 * formula.num_vars + 4 * formula.clauses.len();
    if agents > MAX_AGENTS {
        return Err(HardnessError::TooLargeForExhaustive {
            agents,
            max: MAX_AGENTS,
        });
    }
    let satisfiable = sat_brute_force(formula)?.is_some();
    let (instance, _) = reduce_3sat(formula);
    let house = find_house_exact(&instance, FairnessConcept::Saef, &SearchOptions::default())?;
    Ok(satisfiable == house.is_some())
}

/// Convenience for tests: the resource each clause literal points at.
pub fn clause_literal_target(map: &GadgetMap, literal: Literal) -> usize {
    literal_resource(map, literal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(v: i64) -> Literal {
        Literal {
            var: v.unsigned_abs() as usize - 1,
            negated: v < 0,
        }
    }

    fn formula(num_vars: usize, clauses: &[[i64; 3]]) -> CnfFormula {
        CnfFormula::new(
            num_vars,
            clauses.iter().map(|c| [lit(c[0]), lit(c[1]), lit(c[2])]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn reduction_counts_and_value_palette() {
        let f = formula(1, &[[1, 1, 1]]);
        let (instance, map) = reduce_3sat(&f);
        assert_eq!(instance.num_agents(), 6);
        assert_eq!(instance.num_resources(), 6);
        assert_eq!(map.big_m, 2 + 4 + 2);

        let mut weight_values: Vec<u64> = instance.weights().to_vec();
        weight_values.sort_unstable();
        weight_values.dedup();
        assert_eq!(weight_values, vec![1, map.big_m]);

        let mut utility_values: Vec<u64> = (0..6)
            .flat_map(|i| instance.utility_row(i).to_vec())
            .collect();
        utility_values.sort_unstable();
        utility_values.dedup();
        assert_eq!(utility_values, vec![0, 1, map.big_m]);
    }

    #[test]
    fn variable_gadget_alone_is_satisfiable() {
        let f = formula(1, &[]);
        let (instance, _) = reduce_3sat(&f);
        assert_eq!(instance.num_agents(), 2);
        let house =
            find_house_exact(&instance, FairnessConcept::Saef, &SearchOptions::default()).unwrap();
        assert!(house.is_some());
    }

    #[test]
    fn sat_brute_force_examples() {
        assert_eq!(
            sat_brute_force(&formula(1, &[[1, 1, 1]])).unwrap(),
            Some(vec![true])
        );
        assert!(sat_brute_force(&formula(1, &[[1, 1, 1], [-1, -1, -1]]))
            .unwrap()
            .is_none());
        assert!(sat_brute_force(&formula(3, &[[1, -2, 3]])).unwrap().is_some());
    }

    #[test]
    fn forward_construction_is_fair() {
        let f = formula(1, &[[1, 1, 1]]);
        let (instance, map) = reduce_3sat(&f);
        let allocation = assignment_to_house_allocation(&f, &map, &[true]).unwrap();
        assert!(is_house(&instance, &allocation));
        assert!(is_fair(&instance, &allocation, FairnessConcept::Saef));
    }

    #[test]
    fn false_variable_takes_false_resource() {
        let f = formula(1, &[]);
        let (_, map) = reduce_3sat(&f);
        let allocation = assignment_to_house_allocation(&f, &map, &[false]).unwrap();
        assert_eq!(
            allocation.bundle(map.variables[0].agent),
            &[map.variables[0].false_resource]
        );
    }

    #[test]
    fn unsatisfied_clause_is_rejected() {
        let f = formula(1, &[[1, 1, 1]]);
        let (_, map) = reduce_3sat(&f);
        assert_eq!(
            assignment_to_house_allocation(&f, &map, &[false]),
            Err(HardnessError::UnsatisfiedClause { clause: 0 })
        );
    }

    #[test]
    fn extraction_round_trips() {
        let f = formula(2, &[[1, -2, -2], [-1, 2, 2]]);
        let assignment = sat_brute_force(&f).unwrap().unwrap();
        let (_, map) = reduce_3sat(&f);
        let allocation = assignment_to_house_allocation(&f, &map, &assignment).unwrap();
        let extracted = extract_assignment(&f, &map, &allocation).unwrap();
        assert!(f.evaluate(&extracted));
    }

    #[test]
    fn extraction_rejects_unfair_allocations() {
        let f = formula(1, &[]);
        let (_, map) = reduce_3sat(&f);
        // Swap: variable agent takes a resource, guard takes the other, but
        // give the guard's favorite to a third party... with no clauses the
        // only unfair permutation swaps nothing; craft the 2-agent swap
        // where the variable agent holds nothing it values. There is none
        // with n = m = 2 (both permutations are fair), so use one clause.
        let f = formula(1, &[[1, 1, 1]]);
        let (_, map2) = reduce_3sat(&f);
        let fair = assignment_to_house_allocation(&f, &map2, &[true]).unwrap();
        // Swap reward and a literal resource between two weight-1 agents to
        // break fairness.
        let mut bundles: Vec<Vec<usize>> =
            fair.bundles().iter().cloned().collect();
        bundles.swap(
            map2.clauses[0].literal_agents[0],
            map2.clauses[0].literal_agents[1],
        );
        let tampered = Allocation::new(bundles, 6).unwrap();
        assert!(matches!(
            extract_assignment(&f, &map2, &tampered),
            Err(HardnessError::AllocationNotFair)
        ));
        let _ = map;
    }

    #[test]
    fn verify_reduction_small_formulas() {
        // Single clause over three distinct variables, all 8 polarities.
        for mask in 0..8u32 {
            let clause = [
                if mask & 1 == 0 { 1 } else { -1 },
                if mask & 2 == 0 { 2 } else { -2 },
                if mask & 4 == 0 { 3 } else { -3 },
            ];
            assert!(verify_reduction(&formula(3, &[clause])).unwrap());
        }
        // Contradiction: both sides answer no.
        assert!(verify_reduction(&formula(1, &[[1, 1, 1], [-1, -1, -1]])).unwrap());
        // No clauses at all.
        assert!(verify_reduction(&formula(1, &[])).unwrap());
    }

    #[test]
    fn verdict_is_invariant_in_big_m() {
        let formulas = [
            formula(1, &[[1, 1, 1]]),
            formula(1, &[[1, 1, 1], [-1, -1, -1]]),
            formula(1, &[[-1, -1, -1]]),
        ];
        for f in &formulas {
            let mut verdicts = Vec::new();
            for m in [3, 10, 1000] {
                let (instance, _) = reduce_3sat_with_m(f, m).unwrap();
                let house = find_house_exact(
                    &instance,
                    FairnessConcept::Saef,
                    &SearchOptions::default(),
                )
                .unwrap();
                verdicts.push(house.is_some());
            }
            assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "{f:?}");
            assert_eq!(verdicts[0], sat_brute_force(f).unwrap().is_some());
        }
    }

    #[test]
    fn reduction_size_guard() {
        let f = formula(4, &[[1, 2, 3], [2, 3, 4]]);
        assert!(matches!(
            verify_reduction(&f),
            Err(HardnessError::TooLargeForExhaustive { agents: 16, .. })
        ));
    }

    #[test]
    fn dimacs_round_trip_and_errors() {
        let text = "c sample\np cnf 3 2\n1 -2 3 0\n-1 2 2 0\n";
        let f = CnfFormula::parse_dimacs(text).unwrap();
        assert_eq!(f.num_vars, 3);
        assert_eq!(f.clauses.len(), 2);
        assert_eq!(f.clauses[0][1], lit(-2));
        let again = CnfFormula::parse_dimacs(&f.to_dimacs()).unwrap();
        assert_eq!(again, f);

        // Two-literal clause.
        assert!(matches!(
            CnfFormula::parse_dimacs("p cnf 2 1\n1 2 0\n"),
            Err(HardnessError::Dimacs { .. })
        ));
        // Variable out of range.
        assert!(CnfFormula::parse_dimacs("p cnf 1 1\n1 1 2 0\n").is_err());
        // Missing header.
        assert!(CnfFormula::parse_dimacs("1 2 3 0\n").is_err());
        // Clause count mismatch.
        assert!(CnfFormula::parse_dimacs("p cnf 3 2\n1 2 3 0\n").is_err());
    }
}
