use clifgeo::catalog;
use clifgeo::clifford::Multivector;
use clifgeo::energy::stress_components;
use clifgeo::expr::{eval_f64, eval_jet, parse, SymbolTable};

fn eval_const(src: &str) -> f64 {
    let table = SymbolTable::new(["t", "x", "y", "z"], Vec::<String>::new());
    eval_f64(&parse(src, &table).unwrap(), &[0.0; 4], &Default::default()).unwrap()
}

#[test]
fn operator_associativity() {
    assert_eq!(eval_const("1-2-3"), -4.0);
    assert_eq!(eval_const("2^3^2"), 512.0);
    assert_eq!(eval_const("-2^2"), -4.0);
    assert_eq!(eval_const("8/4/2"), 1.0);
}

#[test]
fn schwarzschild_zeta_at_r4() {
    let st = catalog::builtin("schwarzschild").unwrap().compile().unwrap();
    let zeta = st.parse_expr("test", "zeta").unwrap();
    let j = eval_jet(&zeta, &[0.0, 4.0, 1.0, 0.0], st.params()).unwrap();
    assert!((j.value - 0.5f64.sqrt()).abs() < 1e-15);
    // dζ/dr = k/(2r²ζ) with k = 2.
    assert!((j.grad[1] - 0.088388347648318).abs() < 1e-12, "{}", j.grad[1]);
    assert_eq!(j.grad[0], 0.0);
}

#[test]
fn hodge_spot_values() {
    let t0 = Multivector::<f64>::theta(0);
    assert_eq!(t0.hodge(), Multivector::from_labels(&[1, 2, 3]));
    let vol = Multivector::<f64>::from_labels(&[0, 1, 2, 3]);
    assert_eq!(vol.hodge(), Multivector::scalar(-1.0));
    assert_eq!(Multivector::<f64>::scalar(1.0).hodge(), vol);
}

#[test]
fn unit_field_energy_component() {
    let f = Multivector::<f64>::from_labels(&[0, 1]);
    let t = stress_components(&f);
    assert_eq!(t[0][0], -0.5);
    assert_eq!(t[1][1], 0.5);
    assert_eq!(t[2][2], -0.5);
}
