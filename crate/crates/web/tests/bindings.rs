use folichar_web::{bott_json, delta_rows, dump_text};

#[test]
fn delta_rows_track_the_path_integral() {
    let rows = delta_rows(0.3, 0.1, 2, 16, 200).unwrap();
    assert_eq!(rows.len(), 48);
    for r in rows.chunks(3) {
        assert!((r[1] - r[2]).abs() < 1e-8 * r[1].abs().max(1.0), "{r:?}");
    }
}

#[test]
fn delta_rows_reject_bad_input() {
    assert!(delta_rows(1.2, 0.0, 1, 16, 200).unwrap_err().contains("diffeomorphism"));
    assert!(delta_rows(0.3, 0.0, 1, 0, 200).is_err());
    assert!(delta_rows(0.3, 0.0, 1, 16, 201).is_err());
}

#[test]
fn dump_and_bott() {
    assert_eq!(dump_text("h1", 1).unwrap(), "1 * 1 * w[1,1]\n");
    assert!(dump_text("c4", 2).is_err());
    let v: serde_json::Value = serde_json::from_str(&bott_json(1, "c1^2", 1).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["truncated_zero"], true);
    assert!(bott_json(1, "c2", 1).is_err());
}
