use std::ffi::{CStr, CString};
use std::ptr;

use graphcut_ffi::*;

fn last_error() -> String {
    let p = gc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn complete(n: u32) -> *mut GcGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.extend([i, j]);
        }
    }
    let mut g = ptr::null_mut();
    let s = unsafe { gc_graph_new(n as usize, edges.as_ptr(), edges.len() / 2, &mut g) };
    assert_eq!(s, GcStatus::Ok);
    g
}

#[test]
fn graph_handles() {
    let g = complete(6);
    unsafe {
        assert_eq!(gc_graph_node_count(g), 6);
        assert_eq!(gc_graph_edge_count(g), 15);
        let mut value = 0.0;
        let mut labels = [9u32; 6];
        assert_eq!(gc_brute_bisection(g, &mut value, labels.as_mut_ptr()), GcStatus::Ok);
        assert_eq!(value, 2.0 * 9.0 / 36.0 * 4.0);
        assert_eq!(labels.iter().filter(|&&l| l == 0).count(), 3);
        assert_eq!(labels[0], 0);

        let tri = CString::new("triangle").unwrap();
        let (mut num, mut den) = (0u64, 0u64);
        assert_eq!(gc_hom_density_graph(tri.as_ptr(), g, &mut num, &mut den), GcStatus::Ok);
        assert_eq!((num, den), (5, 9));
        gc_graph_free(g);
    }
}

#[test]
fn json_input_is_one_based() {
    let ok = CString::new(r#"{"n":3,"edges":[[1,2],[2,3]]}"#).unwrap();
    let bad = CString::new(r#"{"n":3,"edges":[[0,1]]}"#).unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(gc_graph_from_json(ok.as_ptr(), &mut g), GcStatus::Ok);
        assert_eq!(gc_graph_edge_count(g), 2);
        gc_graph_free(g);
        let mut h = ptr::null_mut();
        assert_eq!(gc_graph_from_json(bad.as_ptr(), &mut h), GcStatus::Input);
        assert!(h.is_null());
    }
    assert!(last_error().contains("1-based"));
}

#[test]
fn null_and_parameter_errors() {
    unsafe {
        assert_eq!(gc_graph_new(2, ptr::null(), 1, ptr::null_mut()), GcStatus::Null);
        let mut w = ptr::null_mut();
        assert_eq!(gc_graphon_bipartite(1.5, &mut w), GcStatus::Parameter);
        assert!(w.is_null());
        assert!(!last_error().is_empty());
        gc_graph_free(ptr::null_mut());
        gc_graphon_free(ptr::null_mut());
        gc_theta_free(ptr::null_mut());
    }
}

#[test]
fn spin_field_on_the_half_graph() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(gc_graphon_halfgraph(&mut w), GcStatus::Ok);
        let weights = [0.5; 24];
        let mut t = ptr::null_mut();
        assert_eq!(gc_theta_new(12, 2, weights.as_ptr(), &mut t), GcStatus::Ok);
        assert_eq!((gc_theta_cells(t), gc_theta_labels(t)), (12, 2));

        let mut j = 0.0;
        assert_eq!(gc_limit_j(w, t, &mut j), GcStatus::Ok);
        assert!((j - 0.5).abs() < 1e-12);
        let (mut res, mut vacuous) = (1.0, true);
        assert_eq!(gc_kkt_residual(w, t, &mut res, &mut vacuous), GcStatus::Ok);
        assert!(res.abs() < 1e-12 && !vacuous);

        let mut short = [0.0; 4];
        assert_eq!(gc_theta_weights(t, short.as_mut_ptr(), 4), GcStatus::Parameter);
        gc_theta_free(t);
        gc_graphon_free(w);
    }
}

#[test]
fn minimize_on_bipartite_limit() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(gc_graphon_bipartite(0.5, &mut w), GcStatus::Ok);
        let masses = [0.5, 0.5];
        let (mut value, mut t) = (0.0, ptr::null_mut());
        let s = gc_minimize_j(w, 8, masses.as_ptr(), 2, GcMethod::Pgd, 3, 4, &mut value, &mut t);
        assert_eq!(s, GcStatus::Ok);
        assert!((value - 1.0).abs() < 1e-9);
        let mut buf = [0.0; 16];
        assert_eq!(gc_theta_weights(t, buf.as_mut_ptr(), 16), GcStatus::Ok);
        let mass: f64 = buf.iter().step_by(2).sum::<f64>() / 8.0;
        assert!((mass - 0.5).abs() < 1e-9);
        gc_theta_free(t);

        let bad = [0.9, 0.9];
        let s = gc_minimize_j(w, 8, bad.as_ptr(), 2, GcMethod::FrankWolfe, 0, 1, &mut value, ptr::null_mut());
        assert_eq!(s, GcStatus::Infeasible);
        gc_graphon_free(w);
    }
}

#[test]
fn cut_norms() {
    unsafe {
        let mut cb = ptr::null_mut();
        assert_eq!(gc_graphon_checkerboard(2, &mut cb), GcStatus::Ok);
        let (mut v, mut exact) = (0.0, false);
        assert_eq!(gc_cut_norm(cb, 0, 0, &mut v, &mut exact), GcStatus::Ok);
        assert!(exact && v >= 0.125 - 1e-12);
        gc_graphon_free(cb);

        let g = complete(8);
        let mut one = ptr::null_mut();
        assert_eq!(gc_graphon_constant(1.0, &mut one), GcStatus::Ok);
        assert_eq!(gc_cut_gap(g, one, 4, 0, &mut v, ptr::null_mut()), GcStatus::Ok);
        assert!((v - 0.125).abs() < 1e-12);
        let mut wg = ptr::null_mut();
        assert_eq!(gc_graphon_from_graph(g, &mut wg), GcStatus::Ok);
        let edge = CString::new("edge").unwrap();
        assert_eq!(gc_hom_density_graphon(edge.as_ptr(), wg, &mut v), GcStatus::Ok);
        assert!((v - 56.0 / 64.0).abs() < 1e-12);
        gc_graphon_free(wg);
        gc_graphon_free(one);
        gc_graph_free(g);
    }
}
