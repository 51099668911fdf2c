//! C interface to the qhoare optimizer.
//!
//! Circuits cross the boundary as opaque `QhCircuit` handles. Every
//! fallible function returns a `QhStatus`; on failure the message is
//! available from `qh_last_error` on the same thread. Strings returned by
//! the library are released with `qh_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qhoare::circuit::Circuit;
use qhoare::cond::DEFAULT_CONFLICT_BUDGET;
use qhoare::metrics::Metrics;
use qhoare::opt::{optimize, PassConfig, DEFAULT_WINDOW};
use qhoare::Error;

/// Opaque circuit handle.
pub struct QhCircuit(Circuit);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QhStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    Budget = 5,
    Unsupported = 6,
    /// A simulated assertion or deallocation failed.
    Runtime = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QhPassConfig {
    pub window: usize,
    pub enable_peephole: bool,
    pub enable_single: bool,
    pub enable_multi: bool,
    pub solver_budget: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QhMetrics {
    pub width: usize,
    pub dag_depth: usize,
    pub gates: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QhEquivalence {
    pub per_input: bool,
    pub common_phase: bool,
    pub inputs_checked: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QhStatus {
    match e {
        Error::Syntax { .. } | Error::ConditionSyntax { .. } => QhStatus::Parse,
        Error::Invalid(_)
        | Error::DeadQubit(_)
        | Error::Arity { .. }
        | Error::Range(_)
        | Error::Params(_) => QhStatus::Invalid,
        Error::Budget { .. } | Error::VariableBudget { .. } => QhStatus::Budget,
        Error::Unsupported(_) => QhStatus::Unsupported,
        Error::DirtyDealloc { .. } | Error::AssertionViolated { .. } => QhStatus::Runtime,
        Error::Io(_) | Error::Json(_) => QhStatus::Internal,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (QhStatus, String)>) -> QhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QhStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            QhStatus::Internal
        }
    }
}

fn lib(e: Error) -> (QhStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QhStatus, String) {
    (QhStatus::NullArgument, format!("{what} is null"))
}

unsafe fn circuit<'a>(p: *const QhCircuit, what: &str) -> Result<&'a Circuit, (QhStatus, String)> {
    p.as_ref().map(|c| &c.0).ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, v: T) {
    out.write(v);
}

fn boxed(c: Circuit) -> *mut QhCircuit {
    Box::into_raw(Box::new(QhCircuit(c)))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes removed")
        .into_raw()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn qh_pass_config_default() -> QhPassConfig {
    QhPassConfig {
        window: DEFAULT_WINDOW,
        enable_peephole: true,
        enable_single: true,
        enable_multi: true,
        solver_budget: DEFAULT_CONFLICT_BUDGET,
    }
}

/// Parses circuit text into a new handle stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_circuit_parse(
    text: *const c_char,
    out: *mut *mut QhCircuit,
) -> QhStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (QhStatus::InvalidUtf8, e.to_string()))?;
        let c = qhoare::text::parse(s).map_err(lib)?;
        store(out, boxed(c));
        Ok(())
    })
}

/// Serializes a circuit; release the result with `qh_string_free`.
/// Returns null if `c` is null.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qh_circuit_serialize(c: *const QhCircuit) -> *mut c_char {
    match c.as_ref() {
        Some(c) => c_string(qhoare::text::serialize(&c.0)),
        None => {
            set_error("circuit is null".into());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qh_circuit_free(c: *mut QhCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_circuit_metrics(c: *const QhCircuit, out: *mut QhMetrics) -> QhStatus {
    guard(|| {
        let c = circuit(c, "circuit")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = Metrics::of(c).map_err(lib)?;
        store(
            out,
            QhMetrics {
                width: m.width,
                dag_depth: m.dag_depth,
                gates: m.gates(),
            },
        );
        Ok(())
    })
}

/// Optimizes `c` into a new handle. `cfg` may be null for defaults.
/// When `log_out` is non-null it receives the removal log as JSON lines,
/// to be released with `qh_string_free`.
///
/// # Safety
/// Pointers must be valid or null where allowed.
#[no_mangle]
pub unsafe extern "C" fn qh_optimize(
    c: *const QhCircuit,
    cfg: *const QhPassConfig,
    out: *mut *mut QhCircuit,
    log_out: *mut *mut c_char,
) -> QhStatus {
    guard(|| {
        let c = circuit(c, "circuit")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = cfg
            .as_ref()
            .copied()
            .unwrap_or_else(|| qh_pass_config_default());
        let cfg = PassConfig {
            window: cfg.window,
            enable_single: cfg.enable_single,
            enable_multi: cfg.enable_multi,
            enable_peephole: cfg.enable_peephole,
            solver_budget: cfg.solver_budget,
            record_smt2: false,
        };
        let o = optimize(c, &cfg).map_err(lib)?;
        if !log_out.is_null() {
            store(log_out, c_string(o.log.to_json_lines()));
        }
        store(out, boxed(o.circuit));
        Ok(())
    })
}

/// Lowers every gate to CNOT, X, H, S, T and Tdg.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_decompose(c: *const QhCircuit, out: *mut *mut QhCircuit) -> QhStatus {
    guard(|| {
        let c = circuit(c, "circuit")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = qhoare::decompose::decompose(c).map_err(lib)?;
        store(out, boxed(d));
        Ok(())
    })
}

/// Compares two circuits on every basis input by simulation.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_verify(
    a: *const QhCircuit,
    b: *const QhCircuit,
    out: *mut QhEquivalence,
) -> QhStatus {
    guard(|| {
        let a = circuit(a, "first circuit")?;
        let b = circuit(b, "second circuit")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = qhoare::sim::equivalent(a, b, None).map_err(lib)?;
        store(
            out,
            QhEquivalence {
                per_input: e.per_input,
                common_phase: e.common_phase,
                inputs_checked: e.inputs_checked,
            },
        );
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> *mut QhCircuit {
        let text = CString::new(src).unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(
            unsafe { qh_circuit_parse(text.as_ptr(), &mut c) },
            QhStatus::Ok
        );
        c
    }

    #[test]
    fn parse_error_sets_message() {
        let text = CString::new("alloc a\nzap a\n").unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(
            unsafe { qh_circuit_parse(text.as_ptr(), &mut c) },
            QhStatus::Parse
        );
        assert!(c.is_null());
        let msg = unsafe { CStr::from_ptr(qh_last_error()) }.to_str().unwrap();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn null_arguments() {
        let mut c = ptr::null_mut();
        assert_eq!(
            unsafe { qh_circuit_parse(ptr::null(), &mut c) },
            QhStatus::NullArgument
        );
        let mut m = QhMetrics::default();
        assert_eq!(
            unsafe { qh_circuit_metrics(ptr::null(), &mut m) },
            QhStatus::NullArgument
        );
        assert!(unsafe { qh_circuit_serialize(ptr::null()) }.is_null());
        unsafe { qh_circuit_free(ptr::null_mut()) };
        unsafe { qh_string_free(ptr::null_mut()) };
    }

    #[test]
    fn optimize_round_trip() {
        let c = parse("alloc a\nalloc b\nh a\ncx a b\nswap a b\n");
        let mut o = ptr::null_mut();
        let mut log = ptr::null_mut();
        assert_eq!(
            unsafe { qh_optimize(c, ptr::null(), &mut o, &mut log) },
            QhStatus::Ok
        );
        let text = unsafe { qh_circuit_serialize(o) };
        assert_eq!(
            unsafe { CStr::from_ptr(text) }.to_str().unwrap(),
            "alloc a\nalloc b\nh a\ncx a b\n"
        );
        assert!(unsafe { CStr::from_ptr(log) }
            .to_str()
            .unwrap()
            .contains("trivial_single"));
        let mut e = QhEquivalence::default();
        assert_eq!(unsafe { qh_verify(c, o, &mut e) }, QhStatus::Ok);
        assert!(e.common_phase);
        let mut m = QhMetrics::default();
        assert_eq!(unsafe { qh_circuit_metrics(o, &mut m) }, QhStatus::Ok);
        assert_eq!((m.width, m.dag_depth, m.gates), (2, 2, 2));
        unsafe {
            qh_string_free(text);
            qh_string_free(log);
            qh_circuit_free(o);
            qh_circuit_free(c);
        }
    }

    #[test]
    fn peephole_only_config_keeps_swap() {
        let c = parse("alloc a\nalloc b\nh a\ncx a b\nswap a b\n");
        let cfg = QhPassConfig {
            enable_single: false,
            enable_multi: false,
            ..qh_pass_config_default()
        };
        let mut o = ptr::null_mut();
        assert_eq!(
            unsafe { qh_optimize(c, &cfg, &mut o, ptr::null_mut()) },
            QhStatus::Ok
        );
        let mut m = QhMetrics::default();
        unsafe { qh_circuit_metrics(o, &mut m) };
        assert_eq!(m.gates, 3);
        unsafe {
            qh_circuit_free(o);
            qh_circuit_free(c);
        }
    }

    #[test]
    fn unsupported_decomposition() {
        let c = parse("alloc a\nalloc b\nctrl a h b\n");
        let mut d = ptr::null_mut();
        assert_eq!(unsafe { qh_decompose(c, &mut d) }, QhStatus::Unsupported);
        assert!(d.is_null());
        unsafe { qh_circuit_free(c) };
    }
}
