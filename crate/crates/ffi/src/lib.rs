//! C ABI over `tournament_linkage`.
//!
//! Conventions:
//! - Every fallible function returns a `TlStatus`; results go through out
//!   pointers that are written only on success.
//! - Digraphs and linkages are opaque handles owned by the caller and
//!   released with the matching `*_free` function.
//! - After a non-OK status, `tl_last_error_message` describes the failure.
//!   The message is per thread and stays valid until the next call into
//!   this library on that thread.
//! - Pair lists are passed as two arrays `xs[i] -> ys[i]` of length `k`.
//! - Panics never cross the boundary; they surface as `TL_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use tournament_linkage::certificate::verify_linkage;
use tournament_linkage::counterexample::{build_counterexample, build_unchecked, CounterexampleParams};
use tournament_linkage::flow::vertex_connectivity;
use tournament_linkage::generators::{near_regular_tournament, random_tournament, rotational_tournament};
use tournament_linkage::io::{read_arc_list, write_arc_list};
use tournament_linkage::linker::{link, HypothesisMode, LinkOptions, LinkOutcome};
use tournament_linkage::oracle::{exists_disjoint_linkage, LinkageVerdict, OracleBudget};
use tournament_linkage::{Digraph, Error};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Bad vertex id, bad pair list or other invalid parameter.
    InvalidArgument = 2,
    /// The arc-list text or a C string was malformed.
    Parse = 3,
    /// The operation needs a semicomplete digraph.
    NotSemicomplete = 4,
    /// Fewer disjoint paths exist than were requested.
    Infeasible = 5,
    /// The constructive linker stopped without a certificate.
    LinkFailed = 6,
    /// A supplied linkage does not check out.
    InvalidCertificate = 7,
    Panic = 8,
}

/// Generator families for `tl_generate`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TlGenerator {
    /// `i -> i+1, ..., i+(n-1)/2` mod `n`; `n` odd, seed ignored.
    Rotational = 0,
    /// Uniformly random tournament.
    Random = 1,
    /// Random tournament whose out-degrees differ by at most one.
    NearRegular = 2,
}

/// Answer of the exhaustive linkage oracle.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TlVerdict {
    No = 0,
    Yes = 1,
    /// The node or time budget ran out first.
    Unknown = 2,
}

/// Opaque digraph handle.
pub struct TlDigraph {
    inner: Digraph,
}

/// Opaque list of vertex paths.
pub struct TlLinkage {
    paths: Vec<Vec<usize>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (TlStatus, String);

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn from_core(e: Error) -> Failure {
    let status = match &e {
        Error::Parse { .. } => TlStatus::Parse,
        Error::NotSemicomplete(..) => TlStatus::NotSemicomplete,
        Error::Infeasible { .. } => TlStatus::Infeasible,
        _ => TlStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn null(what: &str) -> Failure {
    (TlStatus::NullArgument, format!("{what} is null"))
}

/// Runs `f`, records any failure as the thread's last error and converts
/// panics into `TlStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TlStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TlStatus::Panic
        }
    }
}

unsafe fn graph<'a>(d: *const TlDigraph) -> Result<&'a Digraph, Failure> {
    d.as_ref().map(|h| &h.inner).ok_or_else(|| null("digraph"))
}

/// Checks `out` before producing the value, so nothing leaks on a null
/// output pointer.
unsafe fn write_out<T>(out: *mut T, value: impl FnOnce() -> T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value());
    Ok(())
}

unsafe fn pairs_from(xs: *const usize, ys: *const usize, k: usize) -> Result<Vec<(usize, usize)>, Failure> {
    if k == 0 {
        return Ok(Vec::new());
    }
    if xs.is_null() || ys.is_null() {
        return Err(null("pair array"));
    }
    let xs = std::slice::from_raw_parts(xs, k);
    let ys = std::slice::from_raw_parts(ys, k);
    Ok(xs.iter().copied().zip(ys.iter().copied()).collect())
}

fn boxed_graph(d: Digraph) -> *mut TlDigraph {
    Box::into_raw(Box::new(TlDigraph { inner: d }))
}

/// Static, NUL-terminated version string.
#[no_mangle]
pub extern "C" fn tl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null.
#[no_mangle]
pub extern "C" fn tl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn tl_status_name(status: TlStatus) -> *const c_char {
    let s: &'static str = match status {
        TlStatus::Ok => "ok\0",
        TlStatus::NullArgument => "null argument\0",
        TlStatus::InvalidArgument => "invalid argument\0",
        TlStatus::Parse => "parse error\0",
        TlStatus::NotSemicomplete => "not semicomplete\0",
        TlStatus::Infeasible => "infeasible\0",
        TlStatus::LinkFailed => "link failed\0",
        TlStatus::InvalidCertificate => "invalid certificate\0",
        TlStatus::Panic => "panic\0",
    };
    s.as_ptr().cast()
}

/// Creates an arcless digraph on `n` vertices.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tl_digraph_new(n: usize, out: *mut *mut TlDigraph) -> TlStatus {
    guard(|| write_out(out, || boxed_graph(Digraph::new(n))))
}

/// Parses the arc-list text format (`n m` header, then `u v` per line).
///
/// # Safety
/// `text` must be null or a NUL-terminated string; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn tl_digraph_parse(text: *const c_char, out: *mut *mut TlDigraph) -> TlStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (TlStatus::Parse, format!("text is not UTF-8: {e}")))?;
        let d = read_arc_list(s).map_err(from_core)?;
        write_out(out, || boxed_graph(d))
    })
}

/// Serializes to the arc-list format. Free the result with `tl_string_free`.
///
/// # Safety
/// `d` must be a live handle or null; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn tl_digraph_to_arc_list(d: *const TlDigraph, out: *mut *mut c_char) -> TlStatus {
    guard(|| {
        let text = write_arc_list(graph(d)?);
        let c = CString::new(text).expect("arc list has no NUL");
        write_out(out, || c.into_raw())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `d` must be null or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn tl_digraph_free(d: *mut TlDigraph) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Adds the arc `u -> v`. Loops, duplicates and bad ids are rejected.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tl_digraph_add_arc(d: *mut TlDigraph, u: usize, v: usize) -> TlStatus {
    guard(|| {
        let h = d.as_mut().ok_or_else(|| null("digraph"))?;
        h.inner.try_add_arc(u, v).map_err(from_core)
    })
}

/// Number of vertices; 0 for a null handle.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tl_digraph_order(d: *const TlDigraph) -> usize {
    d.as_ref().map_or(0, |h| h.inner.n())
}

/// Number of arcs; 0 for a null handle.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tl_digraph_arc_count(d: *const TlDigraph) -> usize {
    d.as_ref().map_or(0, |h| h.inner.arc_count())
}

/// Whether `u -> v` is an arc; false for null handles or bad ids.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tl_digraph_has_arc(d: *const TlDigraph, u: usize, v: usize) -> bool {
    d.as_ref()
        .is_some_and(|h| u < h.inner.n() && v < h.inner.n() && h.inner.has_arc(u, v))
}

/// Builds a tournament from one of the generator families.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tl_generate(kind: TlGenerator, n: usize, seed: u64, out: *mut *mut TlDigraph) -> TlStatus {
    guard(|| {
        let d = match kind {
            TlGenerator::Rotational => rotational_tournament(n).map_err(from_core)?,
            TlGenerator::Random => random_tournament(n, seed),
            TlGenerator::NearRegular => near_regular_tournament(n, seed).map_err(from_core)?,
        };
        write_out(out, || boxed_graph(d))
    })
}

/// Builds the counterexample tournament for `k` on `n` vertices. Unless
/// `unchecked` is set, `k >= 42` and `n >= k^2` are required.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tl_counterexample(k: usize, n: usize, unchecked: bool, out: *mut *mut TlDigraph) -> TlStatus {
    guard(|| {
        let params = CounterexampleParams { k, n, seed: None };
        let built = if unchecked {
            build_unchecked(&params)
        } else {
            build_counterexample(&params)
        };
        let (t, _) = built.map_err(from_core)?;
        write_out(out, || boxed_graph(t))
    })
}

/// Exact vertex connectivity.
///
/// # Safety
/// `d` must be a live handle or null; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn tl_vertex_connectivity(d: *const TlDigraph, out: *mut usize) -> TlStatus {
    guard(|| {
        let kappa = vertex_connectivity(graph(d)?).map_err(from_core)?;
        write_out(out, || kappa)
    })
}

/// Runs the constructive linker on a semicomplete digraph. With
/// `check_hypotheses`, the degree and connectivity bounds are checked
/// exactly first (the run proceeds either way). A run that stops without
/// a certificate returns `TL_STATUS_LINK_FAILED` with the reason.
///
/// # Safety
/// `d` must be a live handle or null; `xs` and `ys` must hold `k` ids;
/// `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn tl_link(
    d: *const TlDigraph,
    xs: *const usize,
    ys: *const usize,
    k: usize,
    check_hypotheses: bool,
    out: *mut *mut TlLinkage,
) -> TlStatus {
    guard(|| {
        let d = graph(d)?;
        let pairs = pairs_from(xs, ys, k)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let opts = LinkOptions {
            hypotheses: check_hypotheses.then_some(HypothesisMode::Exact),
        };
        let run = link(d, &pairs, opts).map_err(from_core)?;
        match run.outcome {
            LinkOutcome::Linked(cert) => write_out(out, || Box::into_raw(Box::new(TlLinkage { paths: cert.paths }))),
            LinkOutcome::Failed(f) => Err((
                TlStatus::LinkFailed,
                format!("{:?} at {:?}: {}", f.kind, f.step, f.message),
            )),
        }
    })
}

/// Exhaustive search for a linkage. `out_paths` may be null; on a `YES`
/// verdict a non-null `out_paths` receives the witness.
///
/// # Safety
/// As for `tl_link`; `out_verdict` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tl_oracle_linkage(
    d: *const TlDigraph,
    xs: *const usize,
    ys: *const usize,
    k: usize,
    node_limit: u64,
    time_limit_ms: u64,
    out_verdict: *mut TlVerdict,
    out_paths: *mut *mut TlLinkage,
) -> TlStatus {
    guard(|| {
        let d = graph(d)?;
        let pairs = pairs_from(xs, ys, k)?;
        if out_verdict.is_null() {
            return Err(null("verdict pointer"));
        }
        let budget = OracleBudget::new(node_limit, Duration::from_millis(time_limit_ms)).map_err(from_core)?;
        let (verdict, paths) = match exists_disjoint_linkage(d, &pairs, budget).map_err(from_core)? {
            LinkageVerdict::Yes { paths } => (TlVerdict::Yes, Some(paths)),
            LinkageVerdict::No => (TlVerdict::No, None),
            LinkageVerdict::Unknown { .. } => (TlVerdict::Unknown, None),
        };
        write_out(out_verdict, || verdict)?;
        if let (Some(paths), false) = (paths, out_paths.is_null()) {
            out_paths.write(Box::into_raw(Box::new(TlLinkage { paths })));
        }
        Ok(())
    })
}

/// Checks that path `i` runs from `xs[i]` to `ys[i]` in `d` and that the
/// paths are pairwise vertex-disjoint.
///
/// # Safety
/// As for `tl_link`; `l` must be a live linkage or null.
#[no_mangle]
pub unsafe extern "C" fn tl_linkage_verify(
    d: *const TlDigraph,
    xs: *const usize,
    ys: *const usize,
    k: usize,
    l: *const TlLinkage,
) -> TlStatus {
    guard(|| {
        let d = graph(d)?;
        let pairs = pairs_from(xs, ys, k)?;
        let l = l.as_ref().ok_or_else(|| null("linkage"))?;
        verify_linkage(d, &pairs, &l.paths).map_err(|e| (TlStatus::InvalidCertificate, e.to_string()))
    })
}

/// Number of paths; 0 for a null handle.
///
/// # Safety
/// `l` must be a live linkage or null.
#[no_mangle]
pub unsafe extern "C" fn tl_linkage_path_count(l: *const TlLinkage) -> usize {
    l.as_ref().map_or(0, |l| l.paths.len())
}

/// Vertex count of path `i`; 0 if the handle is null or `i` is out of range.
///
/// # Safety
/// `l` must be a live linkage or null.
#[no_mangle]
pub unsafe extern "C" fn tl_linkage_path_len(l: *const TlLinkage, i: usize) -> usize {
    l.as_ref().and_then(|l| l.paths.get(i)).map_or(0, Vec::len)
}

/// Copies path `i` into `buf`, which must hold at least
/// `tl_linkage_path_len(l, i)` entries.
///
/// # Safety
/// `l` must be a live linkage or null; `buf` must be valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn tl_linkage_path_copy(l: *const TlLinkage, i: usize, buf: *mut usize, cap: usize) -> TlStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("linkage"))?;
        let p = l
            .paths
            .get(i)
            .ok_or_else(|| (TlStatus::InvalidArgument, format!("path index {i} out of range")))?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        if cap < p.len() {
            return Err((
                TlStatus::InvalidArgument,
                format!("buffer holds {cap} entries, path needs {}", p.len()),
            ));
        }
        ptr::copy_nonoverlapping(p.as_ptr(), buf, p.len());
        Ok(())
    })
}

/// # Safety
/// `l` must be null or a live linkage, freed once.
#[no_mangle]
pub unsafe extern "C" fn tl_linkage_free(l: *mut TlLinkage) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}
