use std::ffi::{CStr, CString};
use std::ptr;

use xorprot_ffi::*;

fn last_error() -> String {
    let p = xp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn mesh_round_trip() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(xp_instance_generate_mesh(5, 20.0, &mut inst), XpStatus::Ok);
        assert_eq!(xp_instance_node_count(inst), 5);
        assert_eq!(xp_instance_demand_count(inst), 20);

        let mut analysis = ptr::null_mut();
        assert_eq!(xp_analyze(inst, XpHeuristic::Osh, 8, &mut analysis), XpStatus::Ok);
        let mut report = XpPowerReport::default();
        assert_eq!(xp_analysis_power(analysis, &mut report), XpStatus::Ok);
        assert_eq!(report.p_total, 26825.0);
        assert_eq!(report.p1_conventional, 32190.0);
        assert_eq!(xp_analysis_pair_count(analysis), 10);
        assert_eq!(xp_analysis_shared_hops(analysis), 10);

        let mut bounds = XpBounds::default();
        assert_eq!(xp_analysis_bounds(analysis, &mut bounds), XpStatus::Ok);
        assert!(bounds.nc_lower_pairwise <= report.p_total);
        assert!(bounds.conventional_lower <= report.p1_conventional);
        xp_analysis_free(analysis);

        let mut text = ptr::null_mut();
        assert_eq!(xp_instance_to_text(inst, &mut text), XpStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(xp_instance_parse(text, &mut again), XpStatus::Ok);
        assert_eq!(xp_instance_demand_count(again), 20);
        xp_string_free(text);
        xp_instance_free(again);
        xp_instance_free(inst);
    }
}

#[test]
fn power_override_scales_report() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(xp_instance_generate_ring(5, 20.0, &mut inst), XpStatus::Ok);
        assert_eq!(xp_instance_set_power(inst, 2000.0, 146.0, 40.0), XpStatus::Ok);
        let mut analysis = ptr::null_mut();
        assert_eq!(
            xp_analyze(inst, XpHeuristic::Conventional, 8, &mut analysis),
            XpStatus::Ok
        );
        let mut report = XpPowerReport::default();
        xp_analysis_power(analysis, &mut report);
        assert_eq!(report.p_total, 2.0 * 53650.0);
        xp_analysis_free(analysis);

        assert_eq!(
            xp_instance_set_power(inst, -1.0, 73.0, 40.0),
            XpStatus::Domain
        );
        xp_instance_free(inst);
    }
}

#[test]
fn analytic_has_no_bounds() {
    unsafe {
        let mut inst = ptr::null_mut();
        xp_instance_generate_ring(7, 20.0, &mut inst);
        let mut analysis = ptr::null_mut();
        assert_eq!(xp_analyze(inst, XpHeuristic::Analytic, 8, &mut analysis), XpStatus::Ok);
        let mut bounds = XpBounds::default();
        assert_eq!(xp_analysis_bounds(analysis, &mut bounds), XpStatus::Domain);
        xp_analysis_free(analysis);
        xp_instance_free(inst);
    }
}

#[test]
fn closed_forms() {
    unsafe {
        let mut form = XpClosedForm::default();
        assert_eq!(xp_mesh_power(5, 20.0, 1000.0, 73.0, 40.0, &mut form), XpStatus::Ok);
        assert_eq!(form.p_conventional, 32190.0);
        assert_eq!(form.p_coded, 26825.0);
        assert_eq!(xp_ring_power(5, 20.0, 1000.0, 73.0, 40.0, &mut form), XpStatus::Ok);
        assert_eq!(form.p_coded, 37555.0);

        let mut class = XpRingClass::Odd1;
        assert_eq!(xp_ring_classify(100, &mut class), XpStatus::Ok);
        assert_eq!(class, XpRingClass::Even1);
        assert_eq!(xp_ring_classify(5, &mut class), XpStatus::Ok);
        assert_eq!(class, XpRingClass::Odd2);

        let mut hops = 0u64;
        assert_eq!(xp_ring_shared_hops(5, &mut hops), XpStatus::Ok);
        assert_eq!(hops, 30);

        let mut eps = 0.0;
        assert_eq!(xp_mesh_fluctuation(5, &mut eps), XpStatus::Ok);
        assert_eq!(eps, 1.0 / 24.0);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(xp_instance_generate_ring(2, 20.0, &mut inst), XpStatus::Instance);
        assert!(last_error().contains("at least 3 nodes"));
        assert!(inst.is_null());

        assert_eq!(xp_instance_generate_mesh(4, 20.0, ptr::null_mut()), XpStatus::NullArgument);
        assert_eq!(xp_instance_parse(ptr::null(), &mut inst), XpStatus::NullArgument);

        let bad = CString::new("nodes x\n").unwrap();
        assert_eq!(xp_instance_parse(bad.as_ptr(), &mut inst), XpStatus::Parse);

        let mut mesh = ptr::null_mut();
        xp_instance_generate_mesh(8, 20.0, &mut mesh);
        let mut analysis = ptr::null_mut();
        assert_eq!(
            xp_analyze(mesh, XpHeuristic::Oracle, 8, &mut analysis),
            XpStatus::OracleGuard
        );
        assert!(analysis.is_null());
        xp_instance_free(mesh);

        let mut ok = ptr::null_mut();
        assert_eq!(xp_instance_generate_mesh(3, 20.0, &mut ok), XpStatus::Ok);
        assert!(xp_last_error().is_null());
        xp_instance_free(ok);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        assert_eq!(xp_instance_node_count(ptr::null()), 0);
        assert_eq!(xp_analysis_pair_count(ptr::null()), 0);
        xp_instance_free(ptr::null_mut());
        xp_analysis_free(ptr::null_mut());
        xp_string_free(ptr::null_mut());
        let v = CStr::from_ptr(xp_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/xorprot.h");
    for name in [
        "xp_last_error",
        "xp_version",
        "xp_instance_generate_mesh",
        "xp_instance_generate_ring",
        "xp_instance_parse",
        "xp_instance_to_text",
        "xp_instance_set_power",
        "xp_instance_free",
        "xp_string_free",
        "xp_analyze",
        "xp_analysis_power",
        "xp_analysis_bounds",
        "xp_analysis_free",
        "xp_mesh_power",
        "xp_ring_power",
        "xp_ring_classify",
        "xp_ring_shared_hops",
        "xp_mesh_fluctuation",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}
