//! C ABI over the graphcut library.
//!
//! Objects are opaque handles created by `gc_*_new`/constructor functions
//! and released with the matching `gc_*_free`. Every fallible call returns
//! a [`GcStatus`]; on failure [`gc_last_error_message`] describes the
//! error. Node and cell indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use graphcut::functionals::{kkt_residual, limit_j};
use graphcut::graphon::{cut_gap, cut_norm, hom_density_graph, hom_density_graphon, CutNormMode};
use graphcut::harness::io::{graph_from_json, graphon_from_json};
use graphcut::solvers::{brute_bisection, minimize_j, ContinuumMethod, MinimizeOptions};
use graphcut::{AnalyticGraphon, Error, Graph, Graphon, LabelModel, Motif, StepGraphon, ThetaField};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    Null = 1,
    Parameter = 2,
    Capacity = 3,
    Infeasible = 4,
    Input = 5,
    Io = 6,
    /// The library panicked; the handle arguments are left untouched.
    Panic = 7,
}

/// Continuum minimization methods.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcMethod {
    Pgd = 0,
    FrankWolfe = 1,
}

pub struct GcGraph(Graph);
pub struct GcGraphon(Graphon);
pub struct GcTheta(ThetaField);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> GcStatus {
    match e {
        Error::Parameter(_) | Error::Structural(_) => GcStatus::Parameter,
        Error::Capacity(_) => GcStatus::Capacity,
        Error::Infeasible(_) => GcStatus::Infeasible,
        Error::Input(_) | Error::Json(_) => GcStatus::Input,
        Error::Io(_) => GcStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> GcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GcStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("{what} is null or invalid"));
            GcStatus::Null
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            GcStatus::Panic
        }
    }
}

unsafe fn nonnull<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_opt<T>(out: *mut T, value: T) {
    if !out.is_null() {
        out.write(value);
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

// ---------------------------------------------------------------- graphs

/// Graph on `n` nodes from `edge_count` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_new(
    n: usize,
    edges: *const u32,
    edge_count: usize,
    out: *mut *mut GcGraph,
) -> GcStatus {
    guard(|| {
        let flat = slice(edges, 2 * edge_count, "edges")?;
        let pairs = flat.chunks(2).map(|p| (p[0] as usize, p[1] as usize));
        let g = Graph::from_edges(n, pairs)?;
        write(out, Box::into_raw(Box::new(GcGraph(g))), "out")
    })
}

/// Graph from the JSON file format (1-based edges).
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_from_json(json: *const c_char, out: *mut *mut GcGraph) -> GcStatus {
    guard(|| {
        let g = graph_from_json(string(json, "json")?)?;
        write(out, Box::into_raw(Box::new(GcGraph(g))), "out")
    })
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_free(g: *mut GcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_node_count(g: *const GcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_edge_count(g: *const GcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

// -------------------------------------------------------------- graphons

unsafe fn emit_graphon(out: *mut *mut GcGraphon, w: impl Into<Graphon>) -> Result<(), Fail> {
    write(out, Box::into_raw(Box::new(GcGraphon(w.into()))), "out")
}

/// Step graphon with `m` blocks; `values` is the `m × m` matrix row-major.
///
/// # Safety
/// `widths` must hold `m` values and `values` `m * m`; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graphon_step(
    widths: *const f64,
    values: *const f64,
    m: usize,
    out: *mut *mut GcGraphon,
) -> GcStatus {
    guard(|| {
        let widths = slice(widths, m, "widths")?.to_vec();
        let flat = slice(values, m * m, "values")?;
        let rows = flat.chunks(m.max(1)).map(|r| r.to_vec()).collect();
        emit_graphon(out, StepGraphon::new(widths, rows)?)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graphon_constant(c: f64, out: *mut *mut GcGraphon) -> GcStatus {
    guard(|| emit_graphon(out, AnalyticGraphon::constant(c)?))
}

/// `W(x, y) = 1` iff `|x - y| ≥ 1/2`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graphon_halfgraph(out: *mut *mut GcGraphon) -> GcStatus {
    guard(|| emit_graphon(out, AnalyticGraphon::halfgraph()))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graphon_bipartite(gamma: f64, out: *mut *mut GcGraphon) -> GcStatus {
    guard(|| emit_graphon(out, AnalyticGraphon::bipartite(gamma)?))
}

/// Disjoint blocks of widths `lambda`, value 1 within a block.
///
/// # Safety
/// `lambda` must hold `len` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graphon_block_family(
    lambda: *const f64,
    len: usize,
    out: *mut *mut GcGraphon,
) -> GcStatus {
    guard(|| {
        let lambda = slice(lambda, len, "lambda")?.to_vec();
        emit_graphon(out, AnalyticGraphon::block_family(lambda)?)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graphon_checkerboard(n: usize, out: *mut *mut GcGraphon) -> GcStatus {
    guard(|| emit_graphon(out, AnalyticGraphon::checkerboard(n)?))
}

/// Step graphon `W_G` of a graph.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graphon_from_graph(g: *const GcGraph, out: *mut *mut GcGraphon) -> GcStatus {
    guard(|| {
        let g = nonnull(g, "graph")?;
        emit_graphon(out, StepGraphon::from_graph(&g.0))
    })
}

/// Graphon (or graph) from the JSON file format.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_graphon_from_json(json: *const c_char, out: *mut *mut GcGraphon) -> GcStatus {
    guard(|| emit_graphon(out, graphon_from_json(string(json, "json")?)?))
}

/// # Safety
/// `w` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gc_graphon_free(w: *mut GcGraphon) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

// ---------------------------------------------------------------- fields

/// Field on `m` cells and `labels` labels; `weights` row-major, rows in the
/// simplex.
///
/// # Safety
/// `weights` must hold `m * labels` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_theta_new(
    m: usize,
    labels: usize,
    weights: *const f64,
    out: *mut *mut GcTheta,
) -> GcStatus {
    guard(|| {
        let w = slice(weights, m * labels, "weights")?.to_vec();
        let t = ThetaField::new(m, labels, w)?;
        write(out, Box::into_raw(Box::new(GcTheta(t))), "out")
    })
}

/// # Safety
/// `t` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gc_theta_free(t: *mut GcTheta) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gc_theta_cells(t: *const GcTheta) -> usize {
    t.as_ref().map_or(0, |t| t.0.cells())
}

/// # Safety
/// `t` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gc_theta_labels(t: *const GcTheta) -> usize {
    t.as_ref().map_or(0, |t| t.0.labels())
}

/// Copies the row-major weights into `buf`, which must have room for
/// `cells * labels` values.
///
/// # Safety
/// `t` must be a live handle and `buf` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn gc_theta_weights(t: *const GcTheta, buf: *mut f64, len: usize) -> GcStatus {
    guard(|| {
        let t = nonnull(t, "theta")?;
        let w = t.0.weights();
        if len < w.len() {
            return Err(Error::Parameter(format!("buffer holds {len} values, need {}", w.len())).into());
        }
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        ptr::copy_nonoverlapping(w.as_ptr(), buf, w.len());
        Ok(())
    })
}

// ------------------------------------------------------------ operations

fn step_of(w: &Graphon) -> Result<StepGraphon, Error> {
    match w {
        Graphon::Step(s) => Ok(s.clone()),
        Graphon::Analytic(a) => {
            a.to_step().ok_or_else(|| Error::Parameter("kernel is not a step function".into()))
        }
    }
}

/// Cut norm of a step-function kernel. `restarts == 0` runs the exact
/// enumeration, otherwise the seeded heuristic. `exact` may be null.
///
/// # Safety
/// `w` must be a live handle; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_cut_norm(
    w: *const GcGraphon,
    restarts: usize,
    seed: u64,
    value: *mut f64,
    exact: *mut bool,
) -> GcStatus {
    guard(|| {
        let w = step_of(&nonnull(w, "graphon")?.0)?;
        let mode = if restarts == 0 { CutNormMode::Exact } else { CutNormMode::Heuristic { restarts, seed } };
        let c = cut_norm(&w, mode)?;
        write(value, c.value, "value")?;
        write_opt(exact, c.exact);
        Ok(())
    })
}

/// `||W_G - W||_□` between a graph and a limit kernel. `exact` is false
/// when the value is a lower bound; it may be null.
///
/// # Safety
/// Handles must be live; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_cut_gap(
    g: *const GcGraph,
    limit: *const GcGraphon,
    restarts: usize,
    seed: u64,
    value: *mut f64,
    exact: *mut bool,
) -> GcStatus {
    guard(|| {
        let g = nonnull(g, "graph")?;
        let limit = nonnull(limit, "limit")?;
        let r = cut_gap(&StepGraphon::from_graph(&g.0), &limit.0, restarts.max(1), seed)?;
        write(value, r.value, "value")?;
        write_opt(exact, r.exact);
        Ok(())
    })
}

/// Exact `t(F, G) = numer / denom` for a motif named `edge`, `path3`,
/// `triangle` or `cycle4`.
///
/// # Safety
/// `motif` nul-terminated; `g` live; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn gc_hom_density_graph(
    motif: *const c_char,
    g: *const GcGraph,
    numer: *mut u64,
    denom: *mut u64,
) -> GcStatus {
    guard(|| {
        let f = Motif::by_name(string(motif, "motif")?)?;
        let r = hom_density_graph(&f, &nonnull(g, "graph")?.0)?;
        write(numer, *r.numer(), "numer")?;
        write(denom, *r.denom(), "denom")
    })
}

/// `t(F, W)` for a step-function kernel.
///
/// # Safety
/// `motif` nul-terminated; `w` live; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_hom_density_graphon(
    motif: *const c_char,
    w: *const GcGraphon,
    value: *mut f64,
) -> GcStatus {
    guard(|| {
        let f = Motif::by_name(string(motif, "motif")?)?;
        let w = step_of(&nonnull(w, "graphon")?.0)?;
        write(value, hom_density_graphon(&f, &w)?, "value")
    })
}

/// Exact minimum bisection. `labels`, when not null, receives one entry
/// per node: 0 for the side holding node 0, 1 for the other.
///
/// # Safety
/// `g` live; `value` writable; `labels` null or writable for `n` values.
#[no_mangle]
pub unsafe extern "C" fn gc_brute_bisection(
    g: *const GcGraph,
    value: *mut f64,
    labels: *mut u32,
) -> GcStatus {
    guard(|| {
        let r = brute_bisection(&nonnull(g, "graph")?.0)?;
        write(value, r.value, "value")?;
        if !labels.is_null() {
            for (i, &l) in r.labels().expect("labels").iter().enumerate() {
                labels.add(i).write(l as u32);
            }
        }
        Ok(())
    })
}

fn model_for(labels: usize) -> Result<LabelModel, Error> {
    if labels == 2 {
        Ok(LabelModel::spin())
    } else {
        LabelModel::potts(labels)
    }
}

/// Limit functional `J(θ)`; the spin model for two labels, Potts
/// otherwise.
///
/// # Safety
/// Handles live; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_limit_j(w: *const GcGraphon, theta: *const GcTheta, value: *mut f64) -> GcStatus {
    guard(|| {
        let t = nonnull(theta, "theta")?;
        let model = model_for(t.0.labels())?;
        write(value, limit_j(&nonnull(w, "graphon")?.0, &t.0, &model)?, "value")
    })
}

/// Stationarity residual of a two-label field; `vacuous` (nullable) is
/// set when no cell is strictly interior.
///
/// # Safety
/// Handles live; `residual` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_kkt_residual(
    w: *const GcGraphon,
    theta: *const GcTheta,
    residual: *mut f64,
    vacuous: *mut bool,
) -> GcStatus {
    guard(|| {
        let r = kkt_residual(&nonnull(w, "graphon")?.0, &nonnull(theta, "theta")?.0)?;
        write(residual, r.residual, "residual")?;
        write_opt(vacuous, r.is_vacuous());
        Ok(())
    })
}

/// Minimizes `J` on an `m`-cell grid with label masses `masses`
/// (`labels` values). `theta_out` (nullable) receives a new field handle.
///
/// # Safety
/// `w` live; `masses` readable for `labels` values; `value` writable;
/// `theta_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn gc_minimize_j(
    w: *const GcGraphon,
    m: usize,
    masses: *const f64,
    labels: usize,
    method: GcMethod,
    seed: u64,
    restarts: usize,
    value: *mut f64,
    theta_out: *mut *mut GcTheta,
) -> GcStatus {
    guard(|| {
        let w = nonnull(w, "graphon")?;
        let masses = slice(masses, labels, "masses")?;
        let opts = MinimizeOptions {
            method: match method {
                GcMethod::Pgd => ContinuumMethod::Pgd,
                GcMethod::FrankWolfe => ContinuumMethod::FrankWolfe,
            },
            seed,
            restarts,
            ..Default::default()
        };
        let r = minimize_j(&w.0, &model_for(labels)?, masses, m, &opts)?;
        write(value, r.value, "value")?;
        if !theta_out.is_null() {
            let t = r.theta().expect("continuum report")?;
            theta_out.write(Box::into_raw(Box::new(GcTheta(t))));
        }
        Ok(())
    })
}
