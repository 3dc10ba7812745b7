use opgeom_web::*;
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn stability_series_is_flat() {
    let r = parse(stability_series_json(1, 0.2, 5, 16).unwrap());
    assert_eq!(r["points"].as_array().unwrap().len(), 5);
    assert_eq!(r["verdict"], "PASS");
    assert!(r["max_tau_deviation"].as_f64().unwrap() < 1e-6);
    assert!(stability_series_json(1, 0.9, 5, 16).is_err());
    assert!(stability_series_json(1, 0.2, 5, 2).is_err());
}

#[test]
fn two_ring_orbits_close() {
    let r = parse(limit_cycles_json("-y + x*(1 - x^2 - y^2)*(4 - x^2 - y^2)", "x + y*(1 - x^2 - y^2)*(4 - x^2 - y^2)", 0.2, 3.0, 80).unwrap());
    assert_eq!(r["isolated_count"], 2);
    for (c, radius) in r["cycles"].as_array().unwrap().iter().zip([1.0, 2.0]) {
        let orbit = c["orbit"].as_array().unwrap();
        assert!(orbit.len() <= 402);
        for p in orbit {
            let (x, y) = (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
            assert!((x.hypot(y) - radius).abs() < 1e-3);
        }
    }
    assert!(r["displacement"].as_array().unwrap().iter().all(|d| d[1].is_f64()));
    assert!(limit_cycles_json("x^", "y", 0.2, 3.0, 10).is_err());
}

#[test]
fn ellipticity_grid_cells() {
    let r = parse(ellipticity_grid_json(&[1, 0, 1, 0, 0, 1], 2, 5).unwrap());
    assert_eq!(r["discriminant"], "-4*x^2 - 4*x*y");
    let cells = r["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 25);
    let at = |x: f64, y: f64| cells.iter().find(|c| c["x"] == x && c["y"] == y).unwrap()["verdict"].clone();
    assert_eq!(at(1.0, 0.0), "elliptic");
    assert_eq!(at(0.0, 1.0), "degenerate");
    assert!(ellipticity_grid_json(&[1, 2], 2, 5).is_err());
    assert!(ellipticity_grid_json(&[1, 0, 1, 0, 0, 1], 0, 5).is_err());
}
