use qmzv_web::{dims_json, product_text, zbar_samples};

#[test]
fn products() {
    assert_eq!(product_text("harmonic", "xi", "xi").unwrap(), "2*xi xi + z2 - h*xi");
    assert_eq!(product_text("star", "xi", "xi").unwrap(), "xi xi + xi z1");
    assert_eq!(product_text("shuffle", "x", "y").unwrap(), "x y + y x");
    assert!(product_text("cross", "xi", "xi").is_err());
    assert!(product_text("star", "z1", "xi").is_err());
}

#[test]
fn curve() {
    let v = zbar_samples("z3 - z2 z1", 0.1, 0.9, 5).unwrap();
    assert_eq!(v.len(), 10);
    assert!((v[0] - 0.1).abs() < 1e-15 && (v[8] - 0.9).abs() < 1e-15);
    assert!(v.chunks(2).all(|p| p[1].abs() < 1e-8));
    let z2 = zbar_samples("z2", 0.2, 0.8, 4).unwrap();
    for p in z2.chunks(2) {
        let q = p[0];
        let direct: f64 = (1..2000).map(|n| q.powi(n) / (1.0 - q.powi(n)).powi(2)).sum();
        assert!((p[1] - direct).abs() < 1e-10, "q = {q}");
    }
    assert!(zbar_samples("z2 + xi", 0.2, 0.8, 4).is_err());
    assert!(zbar_samples("z2", 0.8, 0.2, 4).is_err());
}

#[test]
fn table() {
    let json = dims_json(4, true).unwrap();
    let rows: serde_json::Value = serde_json::from_str(&json).unwrap();
    let dims: Vec<u64> = rows.as_array().unwrap().iter().map(|r| r["relations"].as_u64().unwrap()).collect();
    assert_eq!(dims, [0, 1, 3]);
    assert!(dims_json(7, true).is_err());
}
