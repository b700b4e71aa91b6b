//! C ABI over `roabp-pit`.
//!
//! Instances live behind an opaque `RoabpInstance` handle created by
//! `roabp_instance_parse` or `roabp_instance_random` and released with
//! `roabp_instance_free`. Every fallible call returns a `RoabpStatus`; on
//! failure the message is kept per thread and read with
//! `roabp_last_error_message`. Output buffers follow one convention: the
//! required size is always written to `*needed`, and a too-small buffer
//! yields `ROABP_STATUS_BUFFER_TOO_SMALL` without writing.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use roabp_pit::algebra::{FieldElem, PrimeField};
use roabp_pit::cli::{parse, serialize, Instance};
use roabp_pit::concentration::{commutative_blackbox_pit, ShiftFamily};
use roabp_pit::known_order::{degree_bound, hitting_set_known_order, pit_roabp, PitOutcome, Verdict};
use roabp_pit::roabp::random_roabp;
use roabp_pit::Error;

/// Opaque instance handle.
pub struct RoabpInstance {
    inner: Instance,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoabpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Shape = 4,
    Characteristic = 5,
    Capacity = 6,
    Precondition = 7,
    InvalidModulus = 8,
    BufferTooSmall = 9,
    Panic = 10,
    Other = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoabpVerdict {
    Zero = 0,
    Nonzero = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoabpKind {
    Roabp = 0,
    Commutative = 1,
    Setml = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoabpInfo {
    pub kind: RoabpKind,
    pub prime: u64,
    pub nvars: usize,
    pub degree: usize,
    pub width: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> RoabpStatus {
    match e {
        Error::Parse { .. } => RoabpStatus::Parse,
        Error::Shape(_) | Error::Partition(_) | Error::Empty(_) => RoabpStatus::Shape,
        Error::Characteristic { .. } => RoabpStatus::Characteristic,
        Error::Capacity { .. } => RoabpStatus::Capacity,
        Error::Precondition(_) => RoabpStatus::Precondition,
        Error::NotPrime(_) | Error::ModulusOutOfRange(_) | Error::FieldMismatch { .. } => RoabpStatus::InvalidModulus,
        Error::Io(_) => RoabpStatus::Other,
    }
}

/// Runs `body`, recording errors and turning panics into `Panic`.
fn guard(body: impl FnOnce() -> Result<(), (RoabpStatus, String)>) -> RoabpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            RoabpStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RoabpStatus::Panic
        }
    }
}

fn lib<T>(r: roabp_pit::Result<T>) -> Result<T, (RoabpStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (RoabpStatus, String) {
    (RoabpStatus::NullPointer, format!("{what} is null"))
}

/// Copies `bytes` plus a NUL terminator into `buf` when it fits.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes; `needed` must be null or valid.
unsafe fn write_str(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), (RoabpStatus, String)> {
    let len = s.len() + 1;
    if !needed.is_null() {
        *needed = len;
    }
    if buf.is_null() || cap < len {
        return Err((
            RoabpStatus::BufferTooSmall,
            format!("buffer of {cap} bytes, {len} needed"),
        ));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

fn finish(out: PitOutcome, verdict: *mut RoabpVerdict, witness: *mut u64) {
    unsafe {
        *verdict = match out.verdict {
            Verdict::Zero => RoabpVerdict::Zero,
            Verdict::Nonzero => RoabpVerdict::Nonzero,
        };
        if let (false, Some(w)) = (witness.is_null(), out.witness) {
            for (i, x) in w.iter().enumerate() {
                *witness.add(i) = x.value();
            }
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn roabp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the calling thread's last error message into `buf`. Returns the
/// buffer size the full message needs, including the terminator; an empty
/// message means the last call succeeded.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn roabp_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let len = msg.len() + 1;
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        len
    })
}

/// Parses an instance file. `prime_override` replaces the header modulus
/// unless it is 0.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn roabp_instance_parse(
    text: *const c_char,
    prime_override: u64,
    out: *mut *mut RoabpInstance,
) -> RoabpStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (RoabpStatus::InvalidUtf8, e.to_string()))?;
        let inst = lib(parse(s, (prime_override != 0).then_some(prime_override)))?;
        *out = Box::into_raw(Box::new(RoabpInstance { inner: inst }));
        Ok(())
    })
}

/// A reproducible random ROABP in identity order.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn roabp_instance_random(
    prime: u64,
    nvars: usize,
    degree: usize,
    width: usize,
    seed: u64,
    nonzero: bool,
    out: *mut *mut RoabpInstance,
) -> RoabpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = lib(PrimeField::new(prime))?;
        if nvars == 0 || width == 0 {
            return Err((RoabpStatus::Precondition, "nvars and width must be at least 1".into()));
        }
        let a = random_roabp(f, nvars, degree, width, seed, nonzero);
        *out = Box::into_raw(Box::new(RoabpInstance {
            inner: Instance::Roabp(a),
        }));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn roabp_instance_free(inst: *mut RoabpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live handle; `info` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn roabp_instance_info(inst: *const RoabpInstance, info: *mut RoabpInfo) -> RoabpStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        if info.is_null() {
            return Err(null("info"));
        }
        let i = &inst.inner;
        *info = RoabpInfo {
            kind: match i {
                Instance::Roabp(_) => RoabpKind::Roabp,
                Instance::Commutative(_) => RoabpKind::Commutative,
                Instance::Setml(_) => RoabpKind::Setml,
            },
            prime: i.field().modulus(),
            nvars: i.nvars(),
            degree: i.degree(),
            width: i.width(),
        };
        Ok(())
    })
}

/// Evaluates at `point[0..len]`; coordinates are reduced mod p.
///
/// # Safety
/// `inst` must be a live handle, `point` valid for `len` reads, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn roabp_instance_eval(
    inst: *const RoabpInstance,
    point: *const u64,
    len: usize,
    out: *mut u64,
) -> RoabpStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        if out.is_null() || (point.is_null() && len > 0) {
            return Err(null("point or out"));
        }
        let f = inst.inner.field();
        let coords: &[u64] = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(point, len)
        };
        let pt: Vec<FieldElem> = coords.iter().map(|&v| f.elem(v % f.modulus())).collect();
        *out = lib(inst.inner.eval(&pt))?.value();
        Ok(())
    })
}

/// Writes the canonical text form.
///
/// # Safety
/// `inst` must be a live handle; `buf` null or valid for `cap` bytes; `needed` null or valid.
#[no_mangle]
pub unsafe extern "C" fn roabp_instance_serialize(
    inst: *const RoabpInstance,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> RoabpStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        write_str(&serialize(&inst.inner), buf, cap, needed)
    })
}

/// `n d w^ceil(log2 n)`; `Capacity` when it does not fit in 64 bits.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn roabp_degree_bound(nvars: usize, degree: usize, width: usize, out: *mut u64) -> RoabpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let b = degree_bound(nvars, degree, width);
        *out = u64::try_from(&b).map_err(|_| (RoabpStatus::Capacity, format!("degree bound {b} exceeds 64 bits")))?;
        Ok(())
    })
}

/// Known-order hitting set for identity order, row-major into
/// `points[0..cap]` (`nvars` values per point). `*needed` receives the
/// number of values required.
///
/// # Safety
/// `points` null or valid for `cap` writes; `needed` null or valid.
#[no_mangle]
pub unsafe extern "C" fn roabp_hitting_set(
    prime: u64,
    nvars: usize,
    degree: usize,
    width: usize,
    points: *mut u64,
    cap: usize,
    needed: *mut usize,
) -> RoabpStatus {
    guard(|| {
        let f = lib(PrimeField::new(prime))?;
        let hs = lib(hitting_set_known_order(f, nvars, degree, width))?;
        let total = hs.len() * nvars;
        if !needed.is_null() {
            *needed = total;
        }
        if points.is_null() || cap < total {
            return Err((
                RoabpStatus::BufferTooSmall,
                format!("buffer of {cap} values, {total} needed"),
            ));
        }
        for (i, v) in hs.points.iter().flatten().enumerate() {
            *points.add(i) = v.value();
        }
        Ok(())
    })
}

/// Known-order PIT; fails with `Characteristic` when p is not above the
/// degree bound. `witness` (null or `nvars` values) receives the first
/// nonzero point.
///
/// # Safety
/// `inst` must be a live handle; `verdict` valid; `witness` null or valid for `nvars` writes.
#[no_mangle]
pub unsafe extern "C" fn roabp_pit_known_order(
    inst: *const RoabpInstance,
    verdict: *mut RoabpVerdict,
    witness: *mut u64,
) -> RoabpStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        let a = lib(inst.inner.to_roabp())?;
        finish(lib(pit_roabp(&a))?, verdict, witness);
        Ok(())
    })
}

/// Commutative PIT with the standard shift family; `k = 0` selects the
/// default algebra dimension.
///
/// # Safety
/// As for `roabp_pit_known_order`.
#[no_mangle]
pub unsafe extern "C" fn roabp_pit_commutative(
    inst: *const RoabpInstance,
    k: usize,
    verdict: *mut RoabpVerdict,
    witness: *mut u64,
) -> RoabpStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        let i = &inst.inner;
        let commutative = match i {
            Instance::Roabp(a) => a.is_commutative(),
            Instance::Commutative(a) => a.is_commutative(),
            Instance::Setml(_) => true,
        };
        if !commutative {
            return Err((RoabpStatus::Precondition, "instance layers do not commute".into()));
        }
        let k = match (k, i) {
            (0, Instance::Setml(c)) => Some(c.k()),
            (0, _) => None,
            (k, _) => Some(k),
        };
        let (n, d, w) = (i.nvars(), i.degree(), i.width());
        let family = lib(ShiftFamily::standard(i.field(), n, d))?;
        let out = lib(commutative_blackbox_pit(
            |x| i.eval(x).expect("point length matches"),
            &family,
            n,
            d,
            w,
            k,
        ))?;
        finish(out, verdict, witness);
        Ok(())
    })
}
