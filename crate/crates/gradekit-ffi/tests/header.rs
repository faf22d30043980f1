//! The generated header declares every exported symbol.

#[test]
fn header_lists_exports() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gradekit.h")).unwrap();
    for sym in [
        "gk_last_error",
        "gk_document_parse",
        "gk_document_free",
        "gk_run",
        "gk_report_status",
        "gk_report_render",
        "gk_report_free",
        "gk_string_free",
        "gk_field_new",
        "gk_field_free",
        "gk_field_order",
        "gk_field_add",
        "gk_field_mul",
        "gk_field_div",
        "GK_STATUS_REFUTED = 2",
    ] {
        assert!(h.contains(sym), "missing {sym}");
    }
}
