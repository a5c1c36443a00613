//! C interface to `su2ent`.
//!
//! Every fallible function returns a [`Su2entStatus`]; on failure the message is
//! available from [`su2ent_last_error`] on the same thread. Spins are passed as
//! `twice_j` (so spin 3/2 is `3`). Matrices cross the boundary as row-major arrays
//! of interleaved `(re, im)` doubles, `2·dim²` entries in total.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use su2ent::linalg::CMatrix;
use su2ent::measures::{self, MeasureKind};
use su2ent::oracle::{self, OptimizerConfig, PureMeasure};
use su2ent::states::{self, DensityMatrix};
use su2ent::{Error, Spin};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Su2entStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Validation = 3,
    DimensionMismatch = 4,
    Parse = 5,
    NotConverged = 6,
    Io = 7,
    BufferTooSmall = 8,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Su2entMeasure {
    Eof = 0,
    Epsilon = 1,
    IConcurrence = 2,
    Tangle = 3,
    Negativity = 4,
    CrNegativity = 5,
}

impl From<Su2entMeasure> for MeasureKind {
    fn from(m: Su2entMeasure) -> Self {
        match m {
            Su2entMeasure::Eof => MeasureKind::EoF,
            Su2entMeasure::Epsilon => MeasureKind::Epsilon,
            Su2entMeasure::IConcurrence => MeasureKind::IConcurrence,
            Su2entMeasure::Tangle => MeasureKind::Tangle,
            Su2entMeasure::Negativity => MeasureKind::Negativity,
            Su2entMeasure::CrNegativity => MeasureKind::CrNegativity,
        }
    }
}

/// Settings for the numerical oracles. Obtain defaults from [`su2ent_optimizer_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct Su2entOptimizer {
    pub restarts: usize,
    pub max_iterations: usize,
    pub convergence_tol: f64,
    pub seed: u64,
}

impl From<Su2entOptimizer> for OptimizerConfig {
    fn from(o: Su2entOptimizer) -> Self {
        OptimizerConfig {
            restarts: o.restarts,
            max_iterations: o.max_iterations,
            convergence_tol: o.convergence_tol,
            seed: o.seed,
        }
    }
}

/// Value returned by a numerical oracle.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct Su2entOracleValue {
    pub value: f64,
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
}

/// Opaque bipartite density matrix.
pub struct Su2entState(DensityMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> Su2entStatus {
    match e {
        Error::Domain { .. } => Su2entStatus::Domain,
        Error::Validation(_) => Su2entStatus::Validation,
        Error::DimensionMismatch { .. } => Su2entStatus::DimensionMismatch,
        Error::Parse(_) => Su2entStatus::Parse,
        Error::NotConverged { .. } => Su2entStatus::NotConverged,
        Error::Io(_) => Su2entStatus::Io,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Small { needed: usize },
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> Su2entStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Su2entStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("{name} is null"));
            Su2entStatus::NullPointer
        }
        Ok(Err(Fail::Small { needed })) => {
            set_error(format!("buffer too small: {needed} entries needed"));
            Su2entStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("internal panic".into());
            Su2entStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn state_ref<'a>(p: *const Su2entState) -> Result<&'a DensityMatrix, Fail> {
    p.as_ref().map(|s| &s.0).ok_or(Fail::Null("state"))
}

fn boxed(rho: DensityMatrix) -> *mut Su2entState {
    Box::into_raw(Box::new(Su2entState(rho)))
}

/// Message of the last failed call on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn su2ent_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn su2ent_optimizer_default() -> Su2entOptimizer {
    let d = OptimizerConfig::default();
    Su2entOptimizer {
        restarts: d.restarts,
        max_iterations: d.max_iterations,
        convergence_tol: d.convergence_tol,
        seed: d.seed,
    }
}

/// `2j/(2j+1)`, the overlap above which ρ(p) is entangled.
#[no_mangle]
pub extern "C" fn su2ent_threshold(twice_j: u32) -> f64 {
    Spin::from_twice(twice_j).threshold()
}

/// Closed-form value of `measure` on ρ(p). Entropies are in nats.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn su2ent_measure(measure: Su2entMeasure, twice_j: u32, p: f64, out: *mut f64) -> Su2entStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = measures::evaluate(measure.into(), Spin::from_twice(twice_j), p)?;
        Ok(())
    })
}

/// Largest overlap with the lower multiplet reachable by states with Schmidt weight `mu`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn su2ent_p_mu(twice_j: u32, mu: f64, out: *mut f64) -> Su2entStatus {
    guard(|| {
        *out_ref(out, "out")? = measures::p_mu(Spin::from_twice(twice_j), mu)?;
        Ok(())
    })
}

/// Smallest Schmidt weight compatible with overlap `p`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn su2ent_mu_min(twice_j: u32, p: f64, out: *mut f64) -> Su2entStatus {
    guard(|| {
        *out_ref(out, "out")? = measures::mu_min(Spin::from_twice(twice_j), p)?.get();
        Ok(())
    })
}

/// Numerical minimum of the pure-state entanglement at fixed overlap `p`.
///
/// # Safety
/// `cfg` and `out` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn su2ent_min_epsilon_numeric(
    twice_j: u32,
    p: f64,
    cfg: *const Su2entOptimizer,
    out: *mut Su2entOracleValue,
) -> Su2entStatus {
    guard(|| {
        let cfg = *cfg.as_ref().ok_or(Fail::Null("cfg"))?;
        let out = out_ref(out, "out")?;
        let r = oracle::min_epsilon_numeric(Spin::from_twice(twice_j), p, &cfg.into())?;
        *out = Su2entOracleValue {
            value: r.value,
            iterations: r.metadata.iterations,
            restarts: r.metadata.restarts,
            converged: r.metadata.converged,
        };
        Ok(())
    })
}

/// Numerical convex roof of `measure` on `state`. `n_terms = 0` uses rank².
///
/// # Safety
/// `state`, `cfg` and `out` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn su2ent_convex_roof(
    state: *const Su2entState,
    measure: Su2entMeasure,
    n_terms: usize,
    cfg: *const Su2entOptimizer,
    out: *mut Su2entOracleValue,
) -> Su2entStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let cfg = *cfg.as_ref().ok_or(Fail::Null("cfg"))?;
        let out = out_ref(out, "out")?;
        let pm = PureMeasure::from_kind(measure.into())?;
        let n = (n_terms > 0).then_some(n_terms);
        let r = oracle::convex_roof_numeric(rho, pm, n, &cfg.into())?;
        *out = Su2entOracleValue {
            value: r.value,
            iterations: r.metadata.iterations,
            restarts: r.metadata.restarts,
            converged: r.metadata.converged,
        };
        Ok(())
    })
}

/// ρ(p) on spin-j ⊗ spin-½.
///
/// # Safety
/// `out` must be null or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn su2ent_state_rho_p(twice_j: u32, p: f64, out: *mut *mut Su2entState) -> Su2entStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed(states::rho_p(Spin::from_twice(twice_j), p)?);
        Ok(())
    })
}

/// Validated density matrix from `len = 2·(dim_a·dim_b)²` interleaved row-major doubles.
///
/// # Safety
/// `data` must point to `len` readable doubles; `out` to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn su2ent_state_from_parts(
    dim_a: usize,
    dim_b: usize,
    data: *const f64,
    len: usize,
    out: *mut *mut Su2entState,
) -> Su2entStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if data.is_null() {
            return Err(Fail::Null("data"));
        }
        let dim = dim_a * dim_b;
        if len != 2 * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: 2 * dim * dim,
                found: len,
            }
            .into());
        }
        let raw = std::slice::from_raw_parts(data, len);
        let m = CMatrix::from_fn(dim, dim, |r, c| {
            let k = 2 * (r * dim + c);
            Complex64::new(raw[k], raw[k + 1])
        });
        *out = boxed(DensityMatrix::new(dim_a, dim_b, m)?);
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn su2ent_state_free(state: *mut Su2entState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// All pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn su2ent_state_dims(
    state: *const Su2entState,
    dim_a: *mut usize,
    dim_b: *mut usize,
) -> Su2entStatus {
    guard(|| {
        let rho = state_ref(state)?;
        *out_ref(dim_a, "dim_a")? = rho.dim_a();
        *out_ref(dim_b, "dim_b")? = rho.dim_b();
        Ok(())
    })
}

/// Copy the matrix into `buf` in the layout accepted by [`su2ent_state_from_parts`].
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn su2ent_state_copy_data(state: *const Su2entState, buf: *mut f64, len: usize) -> Su2entStatus {
    guard(|| {
        let rho = state_ref(state)?;
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        let dim = rho.dim();
        let needed = 2 * dim * dim;
        if len < needed {
            return Err(Fail::Small { needed });
        }
        let out = std::slice::from_raw_parts_mut(buf, needed);
        let m = rho.matrix();
        for r in 0..dim {
            for c in 0..dim {
                let k = 2 * (r * dim + c);
                out[k] = m[(r, c)].re;
                out[k + 1] = m[(r, c)].im;
            }
        }
        Ok(())
    })
}

/// Negativity from the partial-transpose spectrum.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn su2ent_state_negativity(state: *const Su2entState, out: *mut f64) -> Su2entStatus {
    guard(|| {
        let rho = state_ref(state)?;
        *out_ref(out, "out")? = measures::negativity(rho);
        Ok(())
    })
}

/// Overlap of `state` with the lower multiplet on spin-j ⊗ spin-½.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn su2ent_state_lower_overlap(
    state: *const Su2entState,
    twice_j: u32,
    out: *mut f64,
) -> Su2entStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let j = Spin::from_twice(twice_j);
        if rho.dim_a() != j.dim() || rho.dim_b() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2 * j.dim(),
                found: rho.dim(),
            }
            .into());
        }
        *out_ref(out, "out")? = rho.expectation(&states::lower_projector(j)?);
        Ok(())
    })
}

/// Exact rotational twirl; the result is a new handle.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn su2ent_state_twirl(
    state: *const Su2entState,
    twice_j1: u32,
    twice_j2: u32,
    out: *mut *mut Su2entState,
) -> Su2entStatus {
    guard(|| {
        let rho = state_ref(state)?;
        let out = out_ref(out, "out")?;
        let t = states::twirl_exact(rho, Spin::from_twice(twice_j1), Spin::from_twice(twice_j2))?;
        *out = boxed(t);
        Ok(())
    })
}

/// `½‖a - b‖₁`.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn su2ent_state_trace_distance(
    a: *const Su2entState,
    b: *const Su2entState,
    out: *mut f64,
) -> Su2entStatus {
    guard(|| {
        let (a, b) = (state_ref(a)?, state_ref(b)?);
        if a.dim_a() != b.dim_a() || a.dim_b() != b.dim_b() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            }
            .into());
        }
        *out_ref(out, "out")? = a.trace_distance(b);
        Ok(())
    })
}
