//! C interface to `magiclab`.
//!
//! Objects cross the boundary as opaque heap handles released with the
//! matching `*_free`. Every fallible call returns a status code and writes
//! its result through an out-pointer; on failure `mlab_last_error` describes
//! the problem on the calling thread. Strings returned by the library are
//! owned by the caller and released with `mlab_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use magiclab::families::{AssignmentFile, SFamilyMember, TFamilyMember};
use magiclab::labeling::{is_super_edge_magic, valence_if_edge_magic};
use magiclab::oracle::{self, Guard, Mode, ValenceReport};
use magiclab::product::{induced_spk, induced_tqs};
use magiclab::transforms::Transform;
use magiclab::{cycles, Digraph, Error, ErrorKind, TotalLabeling};

pub const MLAB_OK: i32 = 0;
pub const MLAB_ERR_NULL: i32 = 1;
pub const MLAB_ERR_USAGE: i32 = 2;
pub const MLAB_ERR_SCHEMA: i32 = 3;
pub const MLAB_ERR_PRECONDITION: i32 = 4;
pub const MLAB_ERR_INVARIANT: i32 = 5;
pub const MLAB_ERR_PANIC: i32 = 6;

pub const MLAB_MODE_EM: i32 = 0;
pub const MLAB_MODE_SEM: i32 = 1;

pub struct MlabDigraph(Digraph);
pub struct MlabLabeling(TotalLabeling);
pub struct MlabValenceReport(ValenceReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            MLAB_OK
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            MLAB_ERR_NULL
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            match e.kind() {
                ErrorKind::Usage => MLAB_ERR_USAGE,
                ErrorKind::Schema => MLAB_ERR_SCHEMA,
                ErrorKind::Precondition => MLAB_ERR_PRECONDITION,
                ErrorKind::Invariant => MLAB_ERR_INVARIANT,
            }
        }
        Err(_) => {
            set_error("panic inside magiclab".into());
            MLAB_ERR_PANIC
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn string<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::Usage(format!("{what} is not UTF-8"))))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior NUL").into_raw()
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the most recent failed call on this thread; empty after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mlab_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a digraph on vertices `1..=n` from `arc_count` pairs stored flat in
/// `arcs` (`arcs[2i]` is the tail, `arcs[2i+1]` the head of arc `i`).
///
/// # Safety
/// `arcs` must point to `2 * arc_count` readable values (may be null when
/// `arc_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_digraph_new(
    n: u32,
    arcs: *const u32,
    arc_count: usize,
    out_graph: *mut *mut MlabDigraph,
) -> i32 {
    guarded(|| {
        let slot = out(out_graph, "out_graph")?;
        let flat: &[u32] = if arc_count == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(deref(arcs, "arcs")?, 2 * arc_count)
        };
        let d = Digraph::new(n, flat.chunks_exact(2).map(|c| (c[0], c[1])))?;
        *slot = boxed(MlabDigraph(d));
        Ok(())
    })
}

/// Builds `cycle:N`, `path:N` or `empty:N`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_digraph_builtin(spec: *const c_char, out_graph: *mut *mut MlabDigraph) -> i32 {
    guarded(|| {
        let slot = out(out_graph, "out_graph")?;
        *slot = boxed(MlabDigraph(Digraph::from_spec(string(spec, "spec")?)?));
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mlab_digraph_free(g: *mut MlabDigraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlab_digraph_order(g: *const MlabDigraph) -> u32 {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// Number of arcs, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlab_digraph_size(g: *const MlabDigraph) -> u32 {
    g.as_ref().map_or(0, |g| g.0.size())
}

/// Parses a labeling in the library's JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_labeling_from_json(json: *const c_char, out_labeling: *mut *mut MlabLabeling) -> i32 {
    guarded(|| {
        let slot = out(out_labeling, "out_labeling")?;
        let f: TotalLabeling = serde_json::from_str(string(json, "json")?).map_err(Error::from)?;
        *slot = boxed(MlabLabeling(f));
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle; the string written to `out` is released with
/// `mlab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mlab_labeling_to_json(f: *const MlabLabeling, out_json: *mut *mut c_char) -> i32 {
    guarded(|| {
        let f = deref(f, "labeling")?;
        let slot = out(out_json, "out_json")?;
        *slot = into_c_string(serde_json::to_string(&f.0).map_err(Error::from)?);
        Ok(())
    })
}

/// # Safety
/// `f` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mlab_labeling_free(f: *mut MlabLabeling) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Writes the valence, or fails with `MLAB_ERR_PRECONDITION` when the
/// labeling is not edge-magic.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_labeling_valence(f: *const MlabLabeling, out_valence: *mut u32) -> i32 {
    guarded(|| {
        let f = deref(f, "labeling")?;
        let slot = out(out_valence, "out_valence")?;
        *slot = magiclab::labeling::require_edge_magic(&f.0)?;
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_labeling_is_super(f: *const MlabLabeling, out_super: *mut bool) -> i32 {
    guarded(|| {
        let f = deref(f, "labeling")?;
        *out(out_super, "out_super")? = is_super_edge_magic(&f.0);
        Ok(())
    })
}

/// Applies `complement`, `sem-complement`, `odd` or `even`.
///
/// # Safety
/// `f` must be a live handle, `op` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_labeling_transform(
    f: *const MlabLabeling,
    op: *const c_char,
    out_labeling: *mut *mut MlabLabeling,
) -> i32 {
    guarded(|| {
        let f = deref(f, "labeling")?;
        let op: Transform = string(op, "op")?.parse()?;
        let slot = out(out_labeling, "out_labeling")?;
        *slot = boxed(MlabLabeling(op.apply(&f.0)?));
        Ok(())
    })
}

/// Exhaustive valence search. `mode` is `MLAB_MODE_EM` or `MLAB_MODE_SEM`;
/// `guard` caps `p + q`, with 0 meaning the environment or built-in default.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_oracle_run(
    g: *const MlabDigraph,
    mode: i32,
    guard: u32,
    out_report: *mut *mut MlabValenceReport,
) -> i32 {
    guarded(|| {
        let g = deref(g, "graph")?;
        let slot = out(out_report, "out_report")?;
        let mode = match mode {
            MLAB_MODE_EM => Mode::EdgeMagic,
            MLAB_MODE_SEM => Mode::SuperEdgeMagic,
            other => return Err(Error::Usage(format!("unknown oracle mode {other}")).into()),
        };
        let guard = if guard == 0 { Guard::from_env() } else { Guard(guard) };
        *slot = boxed(MlabValenceReport(oracle::run(&g.0, mode, guard)?));
        Ok(())
    })
}

/// # Safety
/// `r` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mlab_report_free(r: *mut MlabValenceReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of achieved valences, or 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlab_report_len(r: *const MlabValenceReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.valences.len())
}

/// The `i`-th achieved valence in ascending order.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_report_valence(r: *const MlabValenceReport, i: usize, out_valence: *mut u32) -> i32 {
    guarded(|| {
        let r = deref(r, "report")?;
        let slot = out(out_valence, "out_valence")?;
        *slot = *r.0.valences.get(i).ok_or_else(|| Error::Usage(format!("index {i} out of range")))?;
        Ok(())
    })
}

/// A fresh copy of the labeling that realizes the `i`-th valence.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_report_certificate(
    r: *const MlabValenceReport,
    i: usize,
    out_labeling: *mut *mut MlabLabeling,
) -> i32 {
    guarded(|| {
        let r = deref(r, "report")?;
        let slot = out(out_labeling, "out_labeling")?;
        let f = r.0.certificates.get(i).ok_or_else(|| Error::Usage(format!("index {i} out of range")))?;
        *slot = boxed(MlabLabeling(f.clone()));
        Ok(())
    })
}

fn product_json(prod: magiclab::LabeledProduct) -> Result<*mut c_char, Failure> {
    if valence_if_edge_magic(&prod.labeling) != Some(prod.valence) {
        return Err(Error::Invariant("product labeling failed re-verification".into()).into());
    }
    Ok(into_c_string(serde_json::to_string(&prod).map_err(Error::from)?))
}

/// Induced product labeling with inner factors from `S_p^k`. `h_json` is an
/// assignment file (`{"constant": member}` or `{"assignment": [...]}`); the
/// result is the labeled product as JSON.
///
/// # Safety
/// `f` must be a live handle, `h_json` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_product_spk(
    f: *const MlabLabeling,
    h_json: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let f = deref(f, "labeling")?;
        let slot = out(out_json, "out_json")?;
        let h: AssignmentFile<SFamilyMember> = serde_json::from_str(string(h_json, "h_json")?).map_err(Error::from)?;
        *slot = product_json(induced_spk(&f.0, &h.into_assignment(f.0.graph())?)?)?;
        Ok(())
    })
}

/// Induced product labeling of an `S`-family outer factor (`d_json`) with
/// `T`-family inner factors (`h_json`).
///
/// # Safety
/// Both inputs must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_product_tqs(
    d_json: *const c_char,
    h_json: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        let slot = out(out_json, "out_json")?;
        let d: SFamilyMember = serde_json::from_str(string(d_json, "d_json")?).map_err(Error::from)?;
        let h: AssignmentFile<TFamilyMember> = serde_json::from_str(string(h_json, "h_json")?).map_err(Error::from)?;
        *slot = product_json(induced_tqs(&d, &h.into_assignment(d.digraph())?)?)?;
        Ok(())
    })
}

/// Component lengths of the product of `C_m` with copies of `C_n` oriented
/// so that the generator is `g`. Writes at most `capacity` lengths and the
/// true count to `out_len`; a short buffer fails with `MLAB_ERR_USAGE` after
/// setting `out_len`.
///
/// # Safety
/// `lengths` must have room for `capacity` values (may be null when 0);
/// `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mlab_cycle_structure(
    m: u32,
    n: u32,
    g: u32,
    lengths: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> i32 {
    guarded(|| {
        let len_slot = out(out_len, "out_len")?;
        if m < 3 || n < 3 || g >= n {
            return Err(Error::Precondition(format!("need m, n >= 3 and g < n (m={m}, n={n}, g={g})")).into());
        }
        let a = cycles::solve_ng(m, n, g)
            .ok_or_else(|| Error::Precondition(format!("no N with {m} - 2N = {g} (mod {n})")))?;
        let found = cycles::cycle_product_structure(&a)?;
        *len_slot = found.len();
        if found.len() > capacity {
            return Err(Error::Usage(format!("buffer holds {capacity}, need {}", found.len())).into());
        }
        if !found.is_empty() {
            if lengths.is_null() {
                return Err(Failure::Null("lengths"));
            }
            ptr::copy_nonoverlapping(found.as_ptr(), lengths, found.len());
        }
        Ok(())
    })
}
