//! C interface. Matrices are row-major with interleaved `(re, im)` doubles, so a `d × d`
//! matrix takes `2·d·d` values. Every call returns a [`RegrichStatus`]; on failure the
//! message is available from [`regrich_last_error`] on the same thread.

use num_complex::Complex64;
use regrich::linalg::ComplexMatrix;
use regrich::richness::{self, Datum};
use regrich::transitivity::VerdictKind;
use regrich::{Error, ToleranceConfig};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegrichStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Singular = 3,
    Construction = 4,
    Unsupported = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegrichVerdict {
    Rich = 0,
    Poor = 1,
    Inconclusive = 2,
}

/// Tolerances and seed.
pub struct RegrichConfig(ToleranceConfig);

/// `(A, B₁, …, B_m)`.
pub struct RegrichDatum(Datum);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> RegrichStatus {
    match e {
        Error::SingularMatrix(_) => RegrichStatus::Singular,
        Error::Construction { .. } => RegrichStatus::Construction,
        Error::UnsupportedClass(_) | Error::Ordering(_) => RegrichStatus::Unsupported,
        Error::Io(_) => RegrichStatus::Io,
        _ => RegrichStatus::InvalidArgument,
    }
}

struct Fail(RegrichStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(RegrichStatus::NullPointer, format!("{} is null", what))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RegrichStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RegrichStatus::Ok
        }
        Ok(Err(Fail(s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            RegrichStatus::Panic
        }
    }
}

fn cfg_or_default(c: *const RegrichConfig) -> ToleranceConfig {
    // SAFETY: caller passes null or a pointer from regrich_config_new
    unsafe { c.as_ref() }.map_or_else(ToleranceConfig::default, |c| c.0.clone())
}

unsafe fn matrix(p: *const f64, rows: usize, cols: usize, what: &str) -> Result<ComplexMatrix, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts(p, 2 * rows * cols);
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        Complex64::new(s[k], s[k + 1])
    }))
}

unsafe fn out<T>(p: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success. Valid until the next call.
#[no_mangle]
pub extern "C" fn regrich_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn regrich_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn regrich_config_new() -> *mut RegrichConfig {
    Box::into_raw(Box::new(RegrichConfig(ToleranceConfig::default())))
}

/// # Safety
/// `c` is null or came from [`regrich_config_new`] and was not freed.
#[no_mangle]
pub unsafe extern "C" fn regrich_config_free(c: *mut RegrichConfig) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` came from [`regrich_config_new`].
#[no_mangle]
pub unsafe extern "C" fn regrich_config_set_seed(c: *mut RegrichConfig, seed: u64) -> RegrichStatus {
    guard(|| {
        let c = c.as_mut().ok_or_else(|| null("config"))?;
        c.0.seed = seed;
        Ok(())
    })
}

/// Relative rank tolerance and absolute zero tolerance; both positive.
///
/// # Safety
/// `c` came from [`regrich_config_new`].
#[no_mangle]
pub unsafe extern "C" fn regrich_config_set_tolerances(c: *mut RegrichConfig, rank_tol_rel: f64, zero_tol_abs: f64) -> RegrichStatus {
    guard(|| {
        let c = c.as_mut().ok_or_else(|| null("config"))?;
        let mut next = c.0.clone();
        next.rank_tol_rel = rank_tol_rel;
        next.zero_tol_abs = zero_tol_abs;
        next.validate()?;
        c.0 = next;
        Ok(())
    })
}

/// `a` holds `2·d·d` doubles, `b` holds `2·m·d·d` (may be null when `m = 0`).
///
/// # Safety
/// Pointers must be valid for the stated lengths; `cfg` may be null.
#[no_mangle]
pub unsafe extern "C" fn regrich_datum_new(
    d: usize,
    m: usize,
    a: *const f64,
    b: *const f64,
    cfg: *const RegrichConfig,
    result: *mut *mut RegrichDatum,
) -> RegrichStatus {
    guard(|| {
        if result.is_null() {
            return Err(null("result"));
        }
        if d == 0 {
            return Err(Fail(RegrichStatus::InvalidArgument, "d must be positive".into()));
        }
        let am = matrix(a, d, d, "a")?;
        let mut bs = Vec::with_capacity(m);
        for k in 0..m {
            if b.is_null() {
                return Err(null("b"));
            }
            bs.push(matrix(b.add(2 * d * d * k), d, d, "b")?);
        }
        let datum = Datum::new(am, bs, &cfg_or_default(cfg))?;
        result.write(Box::into_raw(Box::new(RegrichDatum(datum))));
        Ok(())
    })
}

/// # Safety
/// `p` is null or came from [`regrich_datum_new`] and was not freed.
#[no_mangle]
pub unsafe extern "C" fn regrich_datum_free(p: *mut RegrichDatum) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Richness verdict and its margin.
///
/// # Safety
/// `datum` came from [`regrich_datum_new`]; out pointers are valid; `cfg` may be null.
#[no_mangle]
pub unsafe extern "C" fn regrich_is_rich(
    datum: *const RegrichDatum,
    cfg: *const RegrichConfig,
    verdict: *mut RegrichVerdict,
    margin: *mut f64,
) -> RegrichStatus {
    guard(|| {
        let d = datum.as_ref().ok_or_else(|| null("datum"))?;
        let v = richness::is_rich(&d.0, &cfg_or_default(cfg))?;
        let k = match v.kind {
            VerdictKind::Transitive => RegrichVerdict::Rich,
            VerdictKind::NotTransitive => RegrichVerdict::Poor,
            VerdictKind::Inconclusive => RegrichVerdict::Inconclusive,
        };
        out(verdict, k, "verdict")?;
        if !margin.is_null() {
            margin.write(v.margin);
        }
        Ok(())
    })
}

/// `dim Λ`.
///
/// # Safety
/// As [`regrich_is_rich`].
#[no_mangle]
pub unsafe extern "C" fn regrich_lambda_dim(datum: *const RegrichDatum, cfg: *const RegrichConfig, dim: *mut usize) -> RegrichStatus {
    guard(|| {
        let d = datum.as_ref().ok_or_else(|| null("datum"))?;
        let s = richness::lambda_space(&d.0, None, &cfg_or_default(cfg))?;
        out(dim, s.dim(), "dim")
    })
}

/// `dim(Λ_N · A^N x0) − 1`; `x0` holds `2·d` doubles.
///
/// # Safety
/// As [`regrich_is_rich`]; `x0` is valid for `2·d` doubles.
#[no_mangle]
pub unsafe extern "C" fn regrich_regularity_rank(
    datum: *const RegrichDatum,
    x0: *const f64,
    n: usize,
    cfg: *const RegrichConfig,
    rank: *mut usize,
) -> RegrichStatus {
    guard(|| {
        let d = datum.as_ref().ok_or_else(|| null("datum"))?;
        let x = matrix(x0, d.0.d(), 1, "x0")?.column(0).into_owned();
        let r = richness::regularity_rank(&d.0, &x, n, &cfg_or_default(cfg))?;
        out(rank, r, "rank")
    })
}

/// Class count `c`, acyclicity, and the upper bound on `rig₊ Ad_A`.
///
/// # Safety
/// `a` is valid for `2·d·d` doubles; out pointers are valid; `cfg` may be null.
#[no_mangle]
pub unsafe extern "C" fn regrich_rigidity_bound(
    d: usize,
    a: *const f64,
    cfg: *const RegrichConfig,
    classes: *mut usize,
    acyc: *mut usize,
    bound: *mut usize,
) -> RegrichStatus {
    guard(|| {
        let am = matrix(a, d, d, "a")?;
        let r = regrich::rigidity::rigidity_upper_bound(&am, &cfg_or_default(cfg))?;
        out(classes, r.c, "classes")?;
        out(acyc, r.acyc, "acyc")?;
        out(bound, r.upper_bound, "bound")
    })
}

/// Whether `λ ⌣ μ ≠ 0` in `k × (n−k)`; `l` and `m` hold `k` row lengths each.
///
/// # Safety
/// `l`, `m` valid for `k` values; `nonzero` valid.
#[no_mangle]
pub unsafe extern "C" fn regrich_cup_nonzero(k: usize, n: usize, l: *const usize, m: *const usize, nonzero: *mut bool) -> RegrichStatus {
    use regrich::schubert::{cup_nonzero, YoungDiagram};
    guard(|| {
        if l.is_null() || m.is_null() {
            return Err(null("diagram"));
        }
        let y = |p: *const usize| YoungDiagram::new(k, n, std::slice::from_raw_parts(p, k).to_vec());
        out(nonzero, cup_nonzero(&y(l)?, &y(m)?)?, "nonzero")
    })
}

/// Scan a system given as JSON text; `grid` holds one count or one per parameter.
/// The report JSON is returned in `report`, to be released with [`regrich_string_free`].
///
/// # Safety
/// `system_json` is a NUL-terminated string; `grid` valid for `grid_len` values.
#[no_mangle]
pub unsafe extern "C" fn regrich_scan_json(
    system_json: *const c_char,
    grid: *const usize,
    grid_len: usize,
    cfg: *const RegrichConfig,
    report: *mut *mut c_char,
) -> RegrichStatus {
    guard(|| {
        if system_json.is_null() || grid.is_null() {
            return Err(null("input"));
        }
        if report.is_null() {
            return Err(null("report"));
        }
        let text = CStr::from_ptr(system_json)
            .to_str()
            .map_err(|e| Fail(RegrichStatus::InvalidArgument, e.to_string()))?;
        let sys: regrich::scanner::ParamSystem = serde_json::from_str(text).map_err(Error::from)?;
        let g = std::slice::from_raw_parts(grid, grid_len);
        let rep = regrich::scanner::scan(&sys, g, &cfg_or_default(cfg))?;
        let body = serde_json::to_string(&rep).map_err(Error::from)?;
        report.write(CString::new(body).map_err(|e| Fail(RegrichStatus::Panic, e.to_string()))?.into_raw());
        Ok(())
    })
}

/// # Safety
/// `s` is null or was returned by this library and not freed.
#[no_mangle]
pub unsafe extern "C" fn regrich_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
