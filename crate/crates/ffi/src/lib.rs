//! C ABI for the `ehpcert` engine.
//!
//! Every entry point returns an [`EhpStatus`]. On failure the message is kept
//! per thread and can be read with [`ehp_last_error_message`]. Strings handed
//! out by the library must be released with [`ehp_string_free`], algebras with
//! [`ehp_algebra_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use ehpcert::algebra::{Algebra, Submodule};
use ehpcert::budget::{Budget, Caps};
use ehpcert::cli::{manifest, parse_manifest, run_jobs, Settings};
use ehpcert::nil::{nil_bound, nil_degree, Mode, NilOptions};
use ehpcert::Error;
use serde_json::Value;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EhpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    ResourceCap = 5,
    Engine = 6,
    Panic = 7,
}

/// Opaque algebra handle.
pub struct EhpAlgebra {
    inner: Arc<Algebra>,
}

/// Evaluation mode for the nilpotency entry points. A null pointer means
/// exact arithmetic.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct EhpNilOptions {
    /// Nonzero selects randomized evaluation modulo a large prime.
    pub modular: u8,
    pub trials: u32,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(EhpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::Json(_) => EhpStatus::Parse,
            Error::ResourceCap { .. } => EhpStatus::ResourceCap,
            Error::Soundness(_) | Error::Io(_) => EhpStatus::Engine,
            _ => EhpStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    // Interior NULs would truncate the message; replace them.
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EhpStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EhpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            EhpStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(EhpStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(EhpStatus::InvalidUtf8, e.to_string()))
}

unsafe fn algebra<'a>(p: *const EhpAlgebra) -> Result<&'a Arc<Algebra>, Failure> {
    p.as_ref().map(|h| &h.inner).ok_or_else(null)
}

fn to_c_string(v: &Value) -> Result<*mut c_char, Failure> {
    let text = serde_json::to_string(v).map_err(Error::from)?;
    Ok(CString::new(text).expect("json has no nul").into_raw())
}

/// Writes `value` to `out` unless `out` is null.
unsafe fn put<T>(out: *mut T, value: T) {
    if !out.is_null() {
        *out = value;
    }
}

fn parse_json(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure(EhpStatus::Parse, e.to_string()))
}

fn nil_options(opts: *const EhpNilOptions) -> Result<NilOptions, Failure> {
    let budget = Budget::new(Caps::from_env()?);
    // SAFETY: caller passes null or a valid pointer.
    let mode = match unsafe { opts.as_ref() } {
        Some(o) if o.modular != 0 => Mode::Modular {
            trials: o.trials,
            seed: o.seed,
        },
        _ => Mode::Exact,
    };
    Ok(NilOptions {
        mode,
        budget,
        ..NilOptions::default()
    })
}

/// Parses an algebra from JSON: a structure-constant manifest (with
/// `"basis"`) or a zoo spec such as `{"zoo": "so", "n": 3}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ehp_algebra_from_json(json: *const c_char, out: *mut *mut EhpAlgebra) -> EhpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let v = parse_json(read_str(json)?)?;
        let inner = manifest::parse_algebra_value(&v, "algebra", Path::new("."))?;
        *out = Box::into_raw(Box::new(EhpAlgebra { inner: Arc::new(inner) }));
        Ok(())
    })
}

/// Builds a zoo algebra by name. `params_json` may be null or a JSON object
/// of parameters, e.g. `{"n": 3}`.
///
/// # Safety
/// `name` must be a NUL-terminated string, `params_json` null or one; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ehp_algebra_from_zoo(
    name: *const c_char,
    params_json: *const c_char,
    out: *mut *mut EhpAlgebra,
) -> EhpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let name = read_str(name)?;
        let mut spec = if params_json.is_null() {
            serde_json::Map::new()
        } else {
            match parse_json(read_str(params_json)?)? {
                Value::Object(m) => m,
                _ => return Err(Failure(EhpStatus::Parse, "params must be a JSON object".into())),
            }
        };
        spec.insert("zoo".into(), Value::String(name.to_string()));
        let inner = ehpcert::zoo::from_spec(&Value::Object(spec), "zoo")?;
        *out = Box::into_raw(Box::new(EhpAlgebra { inner: Arc::new(inner) }));
        Ok(())
    })
}

/// # Safety
/// `a` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ehp_algebra_dim(a: *const EhpAlgebra, out: *mut usize) -> EhpStatus {
    guard(|| {
        let a = algebra(a)?;
        if out.is_null() {
            return Err(null());
        }
        *out = a.dim();
        Ok(())
    })
}

/// Flags, grading and fingerprint as JSON. Free with [`ehp_string_free`].
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ehp_algebra_describe_json(a: *const EhpAlgebra, out: *mut *mut c_char) -> EhpStatus {
    guard(|| {
        let a = algebra(a)?;
        if out.is_null() {
            return Err(null());
        }
        *out = to_c_string(&ehpcert::cli::describe(a))?;
        Ok(())
    })
}

/// # Safety
/// `a` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn ehp_algebra_free(a: *mut EhpAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Checks that every product of `s` generic `k`-forms vanishes on the whole
/// algebra. `certified` receives 1 or 0; `cert_json` (nullable) receives the
/// certificate.
///
/// # Safety
/// `a` must be a live handle; `opts` null or valid; outputs null or writable.
#[no_mangle]
pub unsafe extern "C" fn ehp_nil_bound(
    a: *const EhpAlgebra,
    k: u32,
    s: u32,
    opts: *const EhpNilOptions,
    certified: *mut i32,
    cert_json: *mut *mut c_char,
) -> EhpStatus {
    guard(|| {
        let a = algebra(a)?;
        let opts = nil_options(opts)?;
        let c = nil_bound(&Submodule::full(a), k as usize, s as usize, &opts)?;
        put(certified, i32::from(c.is_certified()));
        if !cert_json.is_null() {
            *cert_json = to_c_string(&c.to_json())?;
        }
        Ok(())
    })
}

/// Smallest `s <= s_max` with the whole algebra `(k,s)`-nil; `degree`
/// receives 0 when there is none.
///
/// # Safety
/// As for [`ehp_nil_bound`].
#[no_mangle]
pub unsafe extern "C" fn ehp_nil_degree(
    a: *const EhpAlgebra,
    k: u32,
    s_max: u32,
    opts: *const EhpNilOptions,
    degree: *mut u32,
    cert_json: *mut *mut c_char,
) -> EhpStatus {
    guard(|| {
        let a = algebra(a)?;
        let opts = nil_options(opts)?;
        let c = nil_degree(&Submodule::full(a), k as usize, s_max as usize, &opts)?;
        put(degree, c.degree.map_or(0, |d| d as u32));
        if !cert_json.is_null() {
            *cert_json = to_c_string(&c.to_json())?;
        }
        Ok(())
    })
}

/// Runs a manifest given as JSON text. Relative algebra files resolve
/// against the working directory. When `out_dir` is non-null the bundle is
/// written there. `exit_code` follows the command-line convention.
///
/// # Safety
/// String arguments must be NUL-terminated (or null where allowed); outputs
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn ehp_run_manifest(
    manifest_json: *const c_char,
    out_dir: *const c_char,
    exit_code: *mut i32,
    summary_json: *mut *mut c_char,
) -> EhpStatus {
    guard(|| {
        let v = parse_json(read_str(manifest_json)?)?;
        let out_dir = if out_dir.is_null() {
            None
        } else {
            Some(read_str(out_dir)?)
        };
        let m = parse_manifest(&v, Path::new("."))?;
        let mut caps = Caps::from_env()?;
        m.caps.apply(&mut caps);
        let settings = Settings {
            mode: m.mode.unwrap_or_default(),
            caps,
            ..Settings::default()
        };
        let bundle = run_jobs("ffi", &m.jobs, &settings)?;
        if let Some(dir) = out_dir {
            bundle.write(Path::new(dir))?;
        }
        put(exit_code, bundle.exit_code());
        if !summary_json.is_null() {
            *summary_json = to_c_string(&bundle.summary())?;
        }
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ehp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ehp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Engine version, statically allocated.
#[no_mangle]
pub extern "C" fn ehp_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
