//! C ABI for the `gcifc` library.
//!
//! Every fallible function returns a [`GcifcStatus`] and writes its result
//! through an out-pointer. Channels and regions are opaque handles owned by
//! the caller and released with the matching `_free` function. The message
//! for the most recent failure on the calling thread is available from
//! [`gcifc_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gcifc::optimizer::sum_rate_optimal_lambda;
use gcifc::{
    gap, outer, regime, scheme, ChannelParams, Complex64, RateConstraintSet, RatePair, RateRegion, SchemeParams,
};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcifcStatus {
    Ok = 0,
    NullPointer = 1,
    /// An argument lies outside the domain of the operation.
    Domain = 2,
    /// An index is out of range.
    OutOfRange = 3,
    /// A Rust panic was caught at the boundary.
    Panic = 4,
}

/// Opaque channel handle.
pub struct GcifcChannel(ChannelParams);

/// Opaque region handle: a convex polygon with counterclockwise vertices
/// starting at the origin.
pub struct GcifcRegion(RateRegion);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GcifcRatePair {
    pub r1: f64,
    pub r2: f64,
}

/// Pentagon caps `R1 <= r1_max`, `R2 <= r2_max`, `R1 + R2 <= sum_max`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GcifcConstraints {
    pub r1_max: f64,
    pub r2_max: f64,
    pub sum_max: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GcifcRegime {
    pub weak: bool,
    pub very_strong: bool,
    pub primary_decodes_cognitive: bool,
    pub degraded: bool,
    pub gap_condition_a: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GcifcCorners {
    pub a: GcifcRatePair,
    pub b: GcifcRatePair,
    pub c: GcifcRatePair,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: GcifcStatus, msg: impl Into<String>) -> GcifcStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning library errors into `Domain` and panics into `Panic`.
fn guard(f: impl FnOnce() -> Result<GcifcStatus, gcifc::Error>) -> GcifcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => fail(GcifcStatus::Domain, e.to_string()),
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(GcifcStatus::Panic, msg)
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(GcifcStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

fn pair(p: RatePair) -> GcifcRatePair {
    GcifcRatePair { r1: p.r1(), r2: p.r2() }
}

fn caps(c: &RateConstraintSet) -> GcifcConstraints {
    GcifcConstraints { r1_max: c.r1_max(), r2_max: c.r2_max(), sum_max: c.sum_max() }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn gcifc_status_message(status: GcifcStatus) -> *const c_char {
    let s: &'static CStr = match status {
        GcifcStatus::Ok => c"ok",
        GcifcStatus::NullPointer => c"null pointer argument",
        GcifcStatus::Domain => c"argument outside the domain of the operation",
        GcifcStatus::OutOfRange => c"index out of range",
        GcifcStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message for the last failure on this thread, or null if there was none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gcifc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// `log2(1 + x)` for `x >= 0`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gcifc_cap_c(x: f64, out: *mut f64) -> GcifcStatus {
    non_null!(out);
    guard(|| {
        *out = gcifc::cap_c(x)?;
        Ok(GcifcStatus::Ok)
    })
}

/// Creates a channel with cross gains `a = a_re + i a_im`, `|b|` and powers
/// `P1`, `P2`.
///
/// # Safety
/// `out` must be null or valid for writes. On success `*out` owns a handle
/// that must be released with [`gcifc_channel_free`].
#[no_mangle]
pub unsafe extern "C" fn gcifc_channel_new(
    a_re: f64,
    a_im: f64,
    b_mag: f64,
    p1: f64,
    p2: f64,
    out: *mut *mut GcifcChannel,
) -> GcifcStatus {
    non_null!(out);
    *out = ptr::null_mut();
    guard(|| {
        let ch = ChannelParams::new(Complex64::new(a_re, a_im), b_mag, p1, p2)?;
        *out = Box::into_raw(Box::new(GcifcChannel(ch)));
        Ok(GcifcStatus::Ok)
    })
}

/// # Safety
/// `ch` must be null or a handle from [`gcifc_channel_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcifc_channel_free(ch: *mut GcifcChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Outer bound caps at power split `alpha`.
///
/// # Safety
/// `ch` must be null or a live channel handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gcifc_outer_constraints(
    ch: *const GcifcChannel,
    alpha: f64,
    out: *mut GcifcConstraints,
) -> GcifcStatus {
    non_null!(ch, out);
    guard(|| {
        *out = caps(&outer::outer_constraints(&(*ch).0, alpha)?);
        Ok(GcifcStatus::Ok)
    })
}

/// Caps achieved by the scheme at `(alpha, lambda)`, clamped at zero.
///
/// # Safety
/// `ch` must be null or a live channel handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gcifc_achievable_constraints(
    ch: *const GcifcChannel,
    alpha: f64,
    lambda_re: f64,
    lambda_im: f64,
    out: *mut GcifcConstraints,
) -> GcifcStatus {
    non_null!(ch, out);
    guard(|| {
        let s = SchemeParams::new(alpha, Complex64::new(lambda_re, lambda_im))?;
        *out = caps(&scheme::achievable_constraints(&(*ch).0, &s)?.constraints);
        Ok(GcifcStatus::Ok)
    })
}

unsafe fn region_out(out: *mut *mut GcifcRegion, r: RateRegion) -> GcifcStatus {
    *out = Box::into_raw(Box::new(GcifcRegion(r)));
    GcifcStatus::Ok
}

/// Outer bound region over a uniform grid of `alpha_grid` power splits.
///
/// # Safety
/// `ch` must be null or a live channel handle; `out` null or valid for
/// writes. On success `*out` must be released with [`gcifc_region_free`].
#[no_mangle]
pub unsafe extern "C" fn gcifc_outer_region(
    ch: *const GcifcChannel,
    alpha_grid: usize,
    out: *mut *mut GcifcRegion,
) -> GcifcStatus {
    non_null!(ch, out);
    *out = ptr::null_mut();
    guard(|| Ok(region_out(out, outer::outer_region(&(*ch).0, alpha_grid)?)))
}

/// Achievable region with `lambda` swept over `[0, lambda_span * lambda_Costa1]`.
///
/// # Safety
/// As for [`gcifc_outer_region`].
#[no_mangle]
pub unsafe extern "C" fn gcifc_achievable_region(
    ch: *const GcifcChannel,
    alpha_grid: usize,
    lambda_grid: usize,
    lambda_span: f64,
    out: *mut *mut GcifcRegion,
) -> GcifcStatus {
    non_null!(ch, out);
    *out = ptr::null_mut();
    guard(|| Ok(region_out(out, scheme::achievable_region(&(*ch).0, alpha_grid, lambda_grid, lambda_span)?)))
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live region handle.
#[no_mangle]
pub unsafe extern "C" fn gcifc_region_len(r: *const GcifcRegion) -> usize {
    if r.is_null() {
        0
    } else {
        (*r).0.vertices().len()
    }
}

/// # Safety
/// `r` must be null or a live region handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gcifc_region_vertex(
    r: *const GcifcRegion,
    index: usize,
    out: *mut GcifcRatePair,
) -> GcifcStatus {
    non_null!(r, out);
    match (*r).0.vertices().get(index) {
        Some(&v) => {
            *out = pair(v);
            GcifcStatus::Ok
        }
        None => fail(GcifcStatus::OutOfRange, format!("vertex {index} of {}", (*r).0.vertices().len())),
    }
}

/// # Safety
/// `r` must be null or a region handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcifc_region_free(r: *mut GcifcRegion) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `ch` must be null or a live channel handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gcifc_classify(ch: *const GcifcChannel, out: *mut GcifcRegime) -> GcifcStatus {
    non_null!(ch, out);
    guard(|| {
        let l = regime::classify(&(*ch).0);
        *out = GcifcRegime {
            weak: l.weak,
            very_strong: l.very_strong,
            primary_decodes_cognitive: l.primary_decodes_cognitive,
            degraded: l.degraded,
            gap_condition_a: l.gap_condition_a,
        };
        Ok(GcifcStatus::Ok)
    })
}

/// Corner points `A`, `B`, `C`; requires `|b| > 1`.
///
/// # Safety
/// `ch` must be null or a live channel handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gcifc_corner_points(ch: *const GcifcChannel, out: *mut GcifcCorners) -> GcifcStatus {
    non_null!(ch, out);
    guard(|| {
        let k = gap::corner_points(&(*ch).0)?;
        *out = GcifcCorners { a: pair(k.a), b: pair(k.b), c: pair(k.c) };
        Ok(GcifcStatus::Ok)
    })
}

/// Additive gap in bits; requires `|b| > 1`.
///
/// # Safety
/// `ch` must be null or a live channel handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gcifc_additive_gap(ch: *const GcifcChannel, out: *mut f64) -> GcifcStatus {
    non_null!(ch, out);
    guard(|| {
        *out = gap::additive_gap(&(*ch).0)?;
        Ok(GcifcStatus::Ok)
    })
}

/// Real sum-rate-optimal `lambda` values at `alpha`, in increasing order.
/// Writes at most two roots to `roots` and their number to `count`.
///
/// # Safety
/// `ch` must be null or a live channel handle; `roots` null or valid for
/// two writes; `count` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gcifc_sum_rate_roots(
    ch: *const GcifcChannel,
    alpha: f64,
    roots: *mut f64,
    count: *mut usize,
) -> GcifcStatus {
    non_null!(ch, roots, count);
    *count = 0;
    guard(|| {
        let found = sum_rate_optimal_lambda(&(*ch).0, alpha)?;
        for (i, l) in found.iter().take(2).enumerate() {
            *roots.add(i) = l.re;
        }
        *count = found.len().min(2);
        Ok(GcifcStatus::Ok)
    })
}
