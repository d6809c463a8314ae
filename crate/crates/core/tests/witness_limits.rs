use paracalc::limits::*;
use paracalc::TorusGrid;

#[test]
fn limit_report_on_default_grid() {
    let g = TorusGrid::default_1d();
    let r = limit_demos(&g).unwrap();
    assert!(r.theta_pair < 1e-10, "{}", r.theta_pair);
    assert!(r.omega_square < 1e-10, "{}", r.omega_square);
    assert!(r.omega_average_improves());
    assert!(r.rho_square_decreasing());
}
