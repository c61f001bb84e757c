//! C ABI for the fair-allocation solvers.
//!
//! Instances and allocations travel across the boundary as opaque handles;
//! every function returns an [`EfStatus`] code, with the detailed message
//! of the most recent failure available through [`ef_last_error`]. Strings
//! returned by the library are heap-allocated and must be released with
//! [`ef_string_free`]; handles with their matching `_free` function. All
//! functions are safe to call from multiple threads as long as each handle
//! is used from one thread at a time.

use envyfree::cli::{self, SolveError, Strategy};
use envyfree::cli::experiment::ProblemKind;
use envyfree::exact::{existence_profile, ExactError, SearchOptions};
use envyfree::gen::parse_instance;
use envyfree::model::{
    envy_report, is_complete, is_fair, is_house, Allocation, FairnessConcept, Instance,
};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result code of every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input text could not be parsed.
    ParseError = 3,
    /// Input was well-formed but semantically invalid.
    InvalidInput = 4,
    /// The instance exceeds the configured search budget.
    TooLarge = 5,
    /// No house allocation shape exists (more agents than resources).
    ShapeInfeasible = 6,
    /// The requested strategy does not apply to this problem.
    Unsupported = 7,
    /// An internal invariant failed; see ef_last_error.
    Internal = 8,
}

/// Fairness concept selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfConcept {
    Sef = 0,
    Aef = 1,
    Saef = 2,
}

impl From<EfConcept> for FairnessConcept {
    fn from(c: EfConcept) -> Self {
        match c {
            EfConcept::Sef => FairnessConcept::Sef,
            EfConcept::Aef => FairnessConcept::Aef,
            EfConcept::Saef => FairnessConcept::Saef,
        }
    }
}

/// Problem kind selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfKind {
    Allocation = 0,
    House = 1,
}

impl From<EfKind> for ProblemKind {
    fn from(k: EfKind) -> Self {
        match k {
            EfKind::Allocation => ProblemKind::Allocation,
            EfKind::House => ProblemKind::House,
        }
    }
}

/// Solver strategy selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfStrategy {
    Auto = 0,
    Exact = 1,
    Dp = 2,
    Ilp = 3,
    Matching = 4,
}

impl From<EfStrategy> for Strategy {
    fn from(s: EfStrategy) -> Self {
        match s {
            EfStrategy::Auto => Strategy::Auto,
            EfStrategy::Exact => Strategy::Exact,
            EfStrategy::Dp => Strategy::Dp,
            EfStrategy::Ilp => Strategy::Ilp,
            EfStrategy::Matching => Strategy::Matching,
        }
    }
}

/// Opaque instance handle.
pub struct EfInstance(Instance);

/// Opaque allocation handle.
pub struct EfAllocation(Allocation);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<Vec<u8>>) {
    let text = CString::new(message).unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn fail(status: EfStatus, message: impl std::fmt::Display) -> EfStatus {
    set_error(message.to_string());
    status
}

fn solve_error_status(e: &SolveError) -> EfStatus {
    match e {
        SolveError::Unsupported(_) => EfStatus::Unsupported,
        SolveError::Exact(ExactError::TooLarge { .. }) => EfStatus::TooLarge,
        SolveError::Exact(ExactError::ShapeInfeasible { .. }) => EfStatus::ShapeInfeasible,
        SolveError::Specialized(envyfree::specialized::SpecializedError::ShapeInfeasible {
            ..
        }) => EfStatus::ShapeInfeasible,
        SolveError::Specialized(_) => EfStatus::Unsupported,
        SolveError::Ilp(_) => EfStatus::TooLarge,
        SolveError::InvalidWitness { .. } => EfStatus::Internal,
    }
}

/// Runs `body` with panics converted to `EfStatus::Internal`.
fn guarded(body: impl FnOnce() -> EfStatus) -> EfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in library call".to_string());
            fail(EfStatus::Internal, message)
        }
    }
}

/// # Safety
/// `ptr` must be valid for reads of a NUL-terminated C string.
unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, EfStatus> {
    if ptr.is_null() {
        return Err(fail(EfStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| fail(EfStatus::InvalidUtf8, e))
}

fn out_string(text: String, out: *mut *mut c_char) -> EfStatus {
    match CString::new(text) {
        Ok(cstring) => {
            unsafe { *out = cstring.into_raw() };
            EfStatus::Ok
        }
        Err(e) => fail(EfStatus::Internal, e),
    }
}

/// Message of the most recent failure on this thread, or NULL. The caller
/// owns the returned string and must free it with `ef_string_free`.
#[no_mangle]
pub extern "C" fn ef_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null_mut(), |s| s.clone().into_raw())
    })
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn ef_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance from its JSON document (fields `n`, `m`, `weights`,
/// `utilities`, optional `meta`).
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ef_instance_parse_json(
    json: *const c_char,
    out: *mut *mut EfInstance,
) -> EfStatus {
    if out.is_null() {
        return fail(EfStatus::NullArgument, "null output argument");
    }
    let text = match cstr(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| match parse_instance(text) {
        Ok((instance, _)) => {
            *out = Box::into_raw(Box::new(EfInstance(instance)));
            EfStatus::Ok
        }
        Err(e) => fail(EfStatus::ParseError, e),
    })
}

/// Builds an instance from arrays: `weights` has `num_agents` entries and
/// `utilities` is row-major with `num_agents * num_resources` entries.
///
/// # Safety
/// The arrays must be valid for the stated number of reads; `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ef_instance_new(
    num_agents: usize,
    num_resources: usize,
    weights: *const u64,
    utilities: *const u64,
    out: *mut *mut EfInstance,
) -> EfStatus {
    if out.is_null() || weights.is_null() || (utilities.is_null() && num_resources > 0) {
        return fail(EfStatus::NullArgument, "null array argument");
    }
    let weights = std::slice::from_raw_parts(weights, num_agents).to_vec();
    let rows: Vec<Vec<u64>> = (0..num_agents)
        .map(|i| {
            std::slice::from_raw_parts(utilities.add(i * num_resources), num_resources).to_vec()
        })
        .collect();
    guarded(|| match Instance::new(weights, rows) {
        Ok(instance) => {
            *out = Box::into_raw(Box::new(EfInstance(instance)));
            EfStatus::Ok
        }
        Err(e) => fail(EfStatus::InvalidInput, e),
    })
}

/// # Safety
/// `instance` must be a live handle from this library (or NULL).
#[no_mangle]
pub unsafe extern "C" fn ef_instance_free(instance: *mut EfInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// # Safety
/// `instance` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_instance_num_agents(instance: *const EfInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.0.num_agents())
}

/// # Safety
/// `instance` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ef_instance_num_resources(instance: *const EfInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.0.num_resources())
}

/// Parses an allocation document (`{"bundles": [[...], ...]}`, 1-based
/// resource ids) against an instance.
///
/// # Safety
/// `instance` must be a live handle; `json` a valid string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ef_allocation_parse_json(
    instance: *const EfInstance,
    json: *const c_char,
    out: *mut *mut EfAllocation,
) -> EfStatus {
    let Some(instance) = instance.as_ref() else {
        return fail(EfStatus::NullArgument, "null instance");
    };
    if out.is_null() {
        return fail(EfStatus::NullArgument, "null output argument");
    }
    let text = match cstr(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(
        || match cli::parse_allocation_file(text, instance.0.num_resources()) {
            Ok(allocation) => match instance.0.check_allocation(&allocation) {
                Ok(()) => {
                    *out = Box::into_raw(Box::new(EfAllocation(allocation)));
                    EfStatus::Ok
                }
                Err(e) => fail(EfStatus::InvalidInput, e),
            },
            Err(e) => fail(EfStatus::ParseError, e),
        },
    )
}

/// Builds an allocation from a per-resource assignment array of length
/// `num_resources`: entry `r` is the 0-based agent receiving resource `r`,
/// or -1 to leave it unassigned.
///
/// # Safety
/// `instance` must be a live handle; `assignment` valid for
/// `num_resources(instance)` reads; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ef_allocation_from_assignment(
    instance: *const EfInstance,
    assignment: *const i64,
    out: *mut *mut EfAllocation,
) -> EfStatus {
    let Some(instance) = instance.as_ref() else {
        return fail(EfStatus::NullArgument, "null instance");
    };
    if assignment.is_null() || out.is_null() {
        return fail(EfStatus::NullArgument, "null array argument");
    }
    let m = instance.0.num_resources();
    let n = instance.0.num_agents();
    let values = std::slice::from_raw_parts(assignment, m);
    guarded(|| {
        let mut bundles = vec![Vec::new(); n];
        for (r, &a) in values.iter().enumerate() {
            if a < 0 {
                continue;
            }
            let a = a as usize;
            if a >= n {
                return fail(
                    EfStatus::InvalidInput,
                    format!("resource {r} assigned to agent {a}, instance has {n}"),
                );
            }
            bundles[a].push(r);
        }
        match Allocation::new(bundles, m) {
            Ok(allocation) => {
                *out = Box::into_raw(Box::new(EfAllocation(allocation)));
                EfStatus::Ok
            }
            Err(e) => fail(EfStatus::InvalidInput, e),
        }
    })
}

/// # Safety
/// `allocation` must be a live handle (or NULL).
#[no_mangle]
pub unsafe extern "C" fn ef_allocation_free(allocation: *mut EfAllocation) {
    if !allocation.is_null() {
        drop(Box::from_raw(allocation));
    }
}

/// Serializes an allocation to its JSON document (1-based resource ids).
///
/// # Safety
/// `allocation` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ef_allocation_to_json(
    allocation: *const EfAllocation,
    out: *mut *mut c_char,
) -> EfStatus {
    let Some(allocation) = allocation.as_ref() else {
        return fail(EfStatus::NullArgument, "null allocation");
    };
    if out.is_null() {
        return fail(EfStatus::NullArgument, "null output argument");
    }
    guarded(|| out_string(cli::allocation_to_doc_json(&allocation.0), out))
}

unsafe fn pair<'a>(
    instance: *const EfInstance,
    allocation: *const EfAllocation,
) -> Result<(&'a Instance, &'a Allocation), EfStatus> {
    let Some(instance) = instance.as_ref() else {
        return Err(fail(EfStatus::NullArgument, "null instance"));
    };
    let Some(allocation) = allocation.as_ref() else {
        return Err(fail(EfStatus::NullArgument, "null allocation"));
    };
    if let Err(e) = instance.0.check_allocation(&allocation.0) {
        return Err(fail(EfStatus::InvalidInput, e));
    }
    Ok((&instance.0, &allocation.0))
}

/// Whether the allocation is fair under the concept.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ef_is_fair(
    instance: *const EfInstance,
    allocation: *const EfAllocation,
    concept: EfConcept,
    out: *mut bool,
) -> EfStatus {
    if out.is_null() {
        return fail(EfStatus::NullArgument, "null output argument");
    }
    let (instance, allocation) = match pair(instance, allocation) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| {
        *out = is_fair(instance, allocation, concept.into());
        EfStatus::Ok
    })
}

/// Whether every resource is assigned.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ef_is_complete(
    instance: *const EfInstance,
    allocation: *const EfAllocation,
    out: *mut bool,
) -> EfStatus {
    if out.is_null() {
        return fail(EfStatus::NullArgument, "null output argument");
    }
    let (instance, allocation) = match pair(instance, allocation) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| {
        *out = is_complete(instance, allocation);
        EfStatus::Ok
    })
}

/// Whether every agent holds exactly one resource.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ef_is_house(
    instance: *const EfInstance,
    allocation: *const EfAllocation,
    out: *mut bool,
) -> EfStatus {
    if out.is_null() {
        return fail(EfStatus::NullArgument, "null output argument");
    }
    let (instance, allocation) = match pair(instance, allocation) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| {
        *out = is_house(instance, allocation);
        EfStatus::Ok
    })
}

/// Envious ordered pairs with condition diagnostics as a JSON array of
/// `{envious, envied, sum_held, avg_held}` objects, agents 1-based.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ef_envy_report_json(
    instance: *const EfInstance,
    allocation: *const EfAllocation,
    concept: EfConcept,
    out: *mut *mut c_char,
) -> EfStatus {
    if out.is_null() {
        return fail(EfStatus::NullArgument, "null output argument");
    }
    let (instance, allocation) = match pair(instance, allocation) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guarded(|| {
        let report = envy_report(instance, allocation, concept.into());
        let pairs: Vec<serde_json::Value> = report
            .pairs
            .iter()
            .map(|p| {
                serde_json::json!({
                    "envious": p.envious + 1,
                    "envied": p.envied + 1,
                    "sum_held": p.sum_held,
                    "avg_held": p.avg_held,
                })
            })
            .collect();
        out_string(serde_json::to_string(&pairs).expect("report serialization"), out)
    })
}

/// Finds a fair allocation. On success `*out_found` reports whether a
/// witness exists; when true, `*out_allocation` receives a new handle.
/// `leaf_budget` of 0 selects the default search budget.
///
/// # Safety
/// `instance` must be a live handle; `out_allocation` and `out_found`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ef_solve(
    instance: *const EfInstance,
    concept: EfConcept,
    kind: EfKind,
    strategy: EfStrategy,
    leaf_budget: u64,
    out_allocation: *mut *mut EfAllocation,
    out_found: *mut bool,
) -> EfStatus {
    let Some(instance) = instance.as_ref() else {
        return fail(EfStatus::NullArgument, "null instance");
    };
    if out_allocation.is_null() || out_found.is_null() {
        return fail(EfStatus::NullArgument, "null output argument");
    }
    let opts = SearchOptions {
        leaf_budget: if leaf_budget == 0 {
            envyfree::exact::DEFAULT_LEAF_BUDGET
        } else {
            leaf_budget
        },
        pruning: true,
    };
    guarded(|| {
        match cli::solve_instance(
            &instance.0,
            concept.into(),
            kind.into(),
            strategy.into(),
            &opts,
        ) {
            Ok((Some(witness), _)) => {
                *out_allocation = Box::into_raw(Box::new(EfAllocation(witness)));
                *out_found = true;
                EfStatus::Ok
            }
            Ok((None, _)) => {
                *out_allocation = std::ptr::null_mut();
                *out_found = false;
                EfStatus::Ok
            }
            Err(e) => {
                let status = solve_error_status(&e);
                fail(status, e)
            }
        }
    })
}

/// All six existence flags of an instance as JSON:
/// `{"allocation": {"sef": bool, ...}, "house": {...}}`. `leaf_budget` of 0
/// selects the default budget.
///
/// # Safety
/// `instance` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ef_existence_profile_json(
    instance: *const EfInstance,
    leaf_budget: u64,
    out: *mut *mut c_char,
) -> EfStatus {
    let Some(instance) = instance.as_ref() else {
        return fail(EfStatus::NullArgument, "null instance");
    };
    if out.is_null() {
        return fail(EfStatus::NullArgument, "null output argument");
    }
    let opts = SearchOptions {
        leaf_budget: if leaf_budget == 0 {
            envyfree::exact::DEFAULT_LEAF_BUDGET
        } else {
            leaf_budget
        },
        pruning: true,
    };
    guarded(|| match existence_profile(&instance.0, &opts) {
        Ok(profile) => {
            let doc = serde_json::json!({
                "allocation": {
                    "sef": profile.allocation.sef.exists,
                    "aef": profile.allocation.aef.exists,
                    "saef": profile.allocation.saef.exists,
                },
                "house": {
                    "sef": profile.house.sef.exists,
                    "aef": profile.house.aef.exists,
                    "saef": profile.house.saef.exists,
                },
            });
            out_string(doc.to_string(), out)
        }
        Err(e @ ExactError::TooLarge { .. }) => fail(EfStatus::TooLarge, e),
        Err(e) => fail(EfStatus::InvalidInput, e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn c_string(text: &str) -> CString {
        CString::new(text).unwrap()
    }

    unsafe fn make_example_2() -> *mut EfInstance {
        let json = c_string(r#"{"n":2,"m":2,"weights":[1,10],"utilities":[[5,10],[5,10]]}"#);
        let mut handle = ptr::null_mut();
        assert_eq!(
            ef_instance_parse_json(json.as_ptr(), &mut handle),
            EfStatus::Ok
        );
        handle
    }

    #[test]
    fn parse_solve_check_round_trip() {
        unsafe {
            let instance = make_example_2();
            assert_eq!(ef_instance_num_agents(instance), 2);
            assert_eq!(ef_instance_num_resources(instance), 2);

            let mut allocation = ptr::null_mut();
            let mut found = false;
            assert_eq!(
                ef_solve(
                    instance,
                    EfConcept::Saef,
                    EfKind::Allocation,
                    EfStrategy::Auto,
                    0,
                    &mut allocation,
                    &mut found,
                ),
                EfStatus::Ok
            );
            assert!(found);

            let mut fair = false;
            assert_eq!(
                ef_is_fair(instance, allocation, EfConcept::Saef, &mut fair),
                EfStatus::Ok
            );
            assert!(fair);
            let mut complete = false;
            assert_eq!(
                ef_is_complete(instance, allocation, &mut complete),
                EfStatus::Ok
            );
            assert!(complete);

            let mut json = ptr::null_mut();
            assert_eq!(ef_allocation_to_json(allocation, &mut json), EfStatus::Ok);
            let text = CStr::from_ptr(json).to_str().unwrap().to_string();
            assert!(text.contains("bundles"));
            ef_string_free(json);

            ef_allocation_free(allocation);
            ef_instance_free(instance);
        }
    }

    #[test]
    fn solve_reports_absence_without_error() {
        unsafe {
            let instance = make_example_2();
            let mut allocation = ptr::null_mut();
            let mut found = true;
            assert_eq!(
                ef_solve(
                    instance,
                    EfConcept::Aef,
                    EfKind::Allocation,
                    EfStrategy::Exact,
                    0,
                    &mut allocation,
                    &mut found,
                ),
                EfStatus::Ok
            );
            assert!(!found);
            assert!(allocation.is_null());
            ef_instance_free(instance);
        }
    }

    #[test]
    fn envy_report_lists_pairs_one_based() {
        unsafe {
            let instance = make_example_2();
            let doc = c_string(r#"{"bundles": [[1], [2]]}"#);
            let mut allocation = ptr::null_mut();
            assert_eq!(
                ef_allocation_parse_json(instance, doc.as_ptr(), &mut allocation),
                EfStatus::Ok
            );
            let mut json = ptr::null_mut();
            assert_eq!(
                ef_envy_report_json(instance, allocation, EfConcept::Aef, &mut json),
                EfStatus::Ok
            );
            let text = CStr::from_ptr(json).to_str().unwrap();
            let parsed: serde_json::Value = serde_json::from_str(text).unwrap();
            assert_eq!(parsed[0]["envious"], 2);
            assert_eq!(parsed[0]["envied"], 1);
            ef_string_free(json);
            ef_allocation_free(allocation);
            ef_instance_free(instance);
        }
    }

    #[test]
    fn arrays_constructor_and_assignment() {
        unsafe {
            let weights = [1u64, 10];
            let utilities = [5u64, 10, 5, 10];
            let mut instance = ptr::null_mut();
            assert_eq!(
                ef_instance_new(2, 2, weights.as_ptr(), utilities.as_ptr(), &mut instance),
                EfStatus::Ok
            );
            let assignment = [0i64, 1];
            let mut allocation = ptr::null_mut();
            assert_eq!(
                ef_allocation_from_assignment(instance, assignment.as_ptr(), &mut allocation),
                EfStatus::Ok
            );
            let mut fair = false;
            assert_eq!(
                ef_is_fair(instance, allocation, EfConcept::Saef, &mut fair),
                EfStatus::Ok
            );
            assert!(fair);
            ef_allocation_free(allocation);
            ef_instance_free(instance);
        }
    }

    #[test]
    fn error_paths_set_messages() {
        unsafe {
            let mut instance = ptr::null_mut();
            let bad = c_string("{");
            assert_eq!(
                ef_instance_parse_json(bad.as_ptr(), &mut instance),
                EfStatus::ParseError
            );
            let message = ef_last_error();
            assert!(!message.is_null());
            assert!(!CStr::from_ptr(message).to_bytes().is_empty());
            ef_string_free(message);

            assert_eq!(
                ef_instance_parse_json(ptr::null(), &mut instance),
                EfStatus::NullArgument
            );

            // Zero weight: well-formed JSON, invalid instance.
            let invalid = c_string(r#"{"n":1,"m":1,"weights":[0],"utilities":[[1]]}"#);
            assert_eq!(
                ef_instance_parse_json(invalid.as_ptr(), &mut instance),
                EfStatus::ParseError
            );
        }
    }

    #[test]
    fn unsupported_strategy_and_shape_codes() {
        unsafe {
            let instance = make_example_2();
            let mut allocation = ptr::null_mut();
            let mut found = false;
            // ilp cannot encode house problems.
            assert_eq!(
                ef_solve(
                    instance,
                    EfConcept::Saef,
                    EfKind::House,
                    EfStrategy::Ilp,
                    0,
                    &mut allocation,
                    &mut found,
                ),
                EfStatus::Unsupported
            );
            ef_instance_free(instance);

            // Three agents, two houses.
            let weights = [1u64, 1, 1];
            let utilities = [1u64, 2, 1, 2, 1, 2];
            let mut tall = ptr::null_mut();
            assert_eq!(
                ef_instance_new(3, 2, weights.as_ptr(), utilities.as_ptr(), &mut tall),
                EfStatus::Ok
            );
            assert_eq!(
                ef_solve(
                    tall,
                    EfConcept::Saef,
                    EfKind::House,
                    EfStrategy::Exact,
                    0,
                    &mut allocation,
                    &mut found,
                ),
                EfStatus::ShapeInfeasible
            );
            ef_instance_free(tall);
        }
    }

    #[test]
    fn existence_profile_json_flags() {
        unsafe {
            let instance = make_example_2();
            let mut json = ptr::null_mut();
            assert_eq!(
                ef_existence_profile_json(instance, 0, &mut json),
                EfStatus::Ok
            );
            let parsed: serde_json::Value =
                serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
            assert_eq!(parsed["allocation"]["sef"], false);
            assert_eq!(parsed["allocation"]["aef"], false);
            assert_eq!(parsed["allocation"]["saef"], true);
            ef_string_free(json);
            ef_instance_free(instance);
        }
    }

    #[test]
    fn generated_header_exists_with_key_symbols() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("envyfree.h");
        let text = std::fs::read_to_string(header).expect("header generated by build script");
        for symbol in [
            "ef_instance_parse_json",
            "ef_solve",
            "ef_is_fair",
            "ef_last_error",
            "EfStatus",
            "EfConcept",
        ] {
            assert!(text.contains(symbol), "header missing {symbol}");
        }
    }
}
