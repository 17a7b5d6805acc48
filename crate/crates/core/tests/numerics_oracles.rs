//! Reference checks for the special-function and quadrature layer.
//!
//! The Airy constants and integrals are pinned two independent ways: once
//! against closed forms whose ingredients (Gamma values) are computed here
//! from scratch by quadrature, and once against frozen high-precision values.

use windisc_core::numerics::{
    airy_ai, airy_ai_prime, airy_ai_with_prime, airy_zero, find_root, integrate,
    integrate_to_infinity, Quadrature,
};
use windisc_core::numerics::airy::{AIRY_AI_AT_ZERO, AIRY_AI_PRIME_AT_ZERO};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Gamma(1/3) and Gamma(2/3) from the substituted Euler integrals
/// 3 * int_0^inf exp(-s^3) ds and 3 * int_0^inf s exp(-s^3) ds. These feed
/// the closed forms Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3).
#[test]
fn series_constants_match_gamma_oracle() {
    let q = Quadrature::default();
    let gamma_third = 3.0 * integrate_to_infinity(|s| (-s * s * s).exp(), 0.0, &q)
        .unwrap()
        .value;
    let gamma_two_thirds = 3.0 * integrate_to_infinity(|s| s * (-s * s * s).exp(), 0.0, &q)
        .unwrap()
        .value;

    // Reflection identity Gamma(1/3) Gamma(2/3) = 2 pi / sqrt(3) validates
    // the oracle itself before it is used.
    let product = gamma_third * gamma_two_thirds;
    let expected = 2.0 * core::f64::consts::PI / 3f64.sqrt();
    assert!(rel(product, expected) < 1e-10, "oracle self-check: {product} vs {expected}");

    let ai0 = 3f64.powf(-2.0 / 3.0) / gamma_two_thirds;
    let aip0 = -(3f64.powf(-1.0 / 3.0)) / gamma_third;
    assert!(rel(AIRY_AI_AT_ZERO, ai0) < 1e-11, "Ai(0): {AIRY_AI_AT_ZERO} vs {ai0}");
    assert!(
        rel(AIRY_AI_PRIME_AT_ZERO, aip0) < 1e-11,
        "Ai'(0): {AIRY_AI_PRIME_AT_ZERO} vs {aip0}"
    );
    assert_eq!(airy_ai(0.0), AIRY_AI_AT_ZERO);
    assert_eq!(airy_ai_prime(0.0), AIRY_AI_PRIME_AT_ZERO);
}

/// Spot values across all four evaluation regimes, frozen from a 30-digit
/// arbitrary-precision computation.
#[test]
fn frozen_reference_values() {
    let table: &[(f64, f64, f64)] = &[
        (-20.0, -0.17640612707798469, 0.89286285673647124),
        (-15.0, 0.27821749087082893, 0.27237420430864202),
        (-10.0, 0.040241238486443191, 0.99626504413279006),
        (-8.0, -0.052705050356386203, 0.93556093819830655),
        (-7.5, 0.32177571638064788, 0.31880950669855460),
        (-7.0, 0.18428083525050564, -0.77100816841012655),
        (-6.5, -0.23802030199711580, -0.67495249251320217),
        (-6.0, -0.32914517362982311, 0.34593548728134289),
        (-4.0, -0.070265532949289515, -0.79062857536858138),
        (-2.0, 0.22740742820168558, 0.61825902074169104),
        (-1.0, 0.53556088329235212, -0.010160567116645209),
        (-0.5, 0.47572809161053959, -0.20408167033954739),
        (0.5, 0.23169360648083349, -0.22491053266468389),
        (1.0, 0.13529241631288142, -0.15914744129679321),
        (2.0, 0.034924130423274379, -0.053090384433653632),
        (3.0, 0.0065911393574607191, -0.011912976705951318),
        (5.0, 0.00010834442813607442, -0.00024741389086846248),
        (5.5, 3.3685311908599814e-5, -8.0463391305565143e-5),
        (5.8, 1.6301750585877260e-5, -3.9933952437098975e-5),
        (6.0, 9.9476943602528896e-6, -2.4765200397034955e-5),
        (7.0, 7.4921288639971671e-7, -2.0081508947387920e-6),
        (8.0, 4.6922076160992316e-8, -1.3414392979067866e-7),
        (10.0, 1.1047532552898686e-10, -3.5206336767389236e-10),
        (12.0, 1.3931846888753608e-13, -4.8547365549853085e-13),
        (15.0, 2.1649625207379923e-18, -8.4205679540177728e-18),
        (20.0, 1.6916728686705403e-27, -7.5863916257483550e-27),
    ];
    for &(x, ai_ref, aip_ref) in table {
        let (ai, aip) = airy_ai_with_prime(x);
        assert!(
            (ai - ai_ref).abs() < 1e-12,
            "Ai({x}) = {ai:e}, expected {ai_ref:e}"
        );
        assert!(
            (aip - aip_ref).abs() < 4e-12,
            "Ai'({x}) = {aip:e}, expected {aip_ref:e}"
        );
    }
}

/// Ai'' = x Ai, checked with a 5-point stencil on a sweep through every
/// branch of the implementation.
#[test]
fn satisfies_airy_ode() {
    let h = 0.01;
    let mut x = -19.0;
    while x <= 19.0 {
        let d2 = (-airy_ai(x - 2.0 * h) + 16.0 * airy_ai(x - h) - 30.0 * airy_ai(x)
            + 16.0 * airy_ai(x + h)
            - airy_ai(x + 2.0 * h))
            / (12.0 * h * h);
        let rhs = x * airy_ai(x);
        assert!(
            (d2 - rhs).abs() < 1e-5 * (1.0 + rhs.abs()),
            "ODE residual at {x}: {d2} vs {rhs}"
        );
        x += 0.5;
    }
}

/// The derivative returned alongside the value must match a central
/// difference of the value itself.
#[test]
fn prime_matches_finite_difference() {
    let h = 1e-4;
    let mut x = -18.0;
    while x <= 18.0 {
        let (_, aip) = airy_ai_with_prime(x);
        let fd = (airy_ai(x + h) - airy_ai(x - h)) / (2.0 * h);
        assert!((aip - fd).abs() < 1e-6, "Ai'({x}): {aip} vs {fd}");
        x += 0.37;
    }
}

#[test]
fn zeros_match_frozen_references() {
    let zeros = [
        -2.3381074104597670385,
        -4.0879494441309706166,
        -5.5205598280955510591,
        -6.7867080900717589988,
        -7.9441335871208531231,
        -9.0226508533409803802,
        -10.040174341558085931,
        -11.008524303733262893,
    ];
    for (i, &z_ref) in zeros.iter().enumerate() {
        let k = (i + 1) as u32;
        let z = airy_zero(k);
        assert!(rel(z, z_ref) < 1e-14, "zero {k}: {z} vs {z_ref}");
        // The function itself must vanish there, and the derivative must
        // alternate in sign from one zero to the next.
        let (ai, aip) = airy_ai_with_prime(z);
        assert!(ai.abs() < 1e-13, "Ai at zero {k}: {ai:e}");
        let expected_sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        assert!(aip * expected_sign > 0.1, "Ai' sign at zero {k}: {aip}");
        if i > 0 {
            assert!(z < zeros[i - 1], "zeros must decrease");
        }
    }
}

/// Shifted-Airy integrals used throughout the solvers, checked against their
/// closed forms in Ai'(a) where a is the first zero:
/// int_0^inf Ai(x+a)^2 dx        = Ai'(a)^2
/// int_0^inf x Ai(x+a)^2 dx      = (2/3) |a| Ai'(a)^2
/// int_0^inf Ai'(x+a)^2 dx       = (1/3) |a| Ai'(a)^2
/// The first is the normalization of the hard-wall ground mode, the other two
/// arise from the virial relations for y'' = (x+a) y.
#[test]
fn shifted_airy_integral_identities() {
    let q = Quadrature::default();
    let a = airy_zero(1);
    let apz = airy_ai_prime(a);

    let i0 = integrate_to_infinity(|x| airy_ai(x + a).powi(2), 0.0, &q)
        .unwrap()
        .value;
    let i1 = integrate_to_infinity(|x| x * airy_ai(x + a).powi(2), 0.0, &q)
        .unwrap()
        .value;
    let i2 = integrate_to_infinity(|x| airy_ai_prime(x + a).powi(2), 0.0, &q)
        .unwrap()
        .value;

    assert!(rel(i0, apz * apz) < 1e-10, "norm integral: {i0} vs {}", apz * apz);
    assert!(
        rel(i1, 2.0 / 3.0 * a.abs() * apz * apz) < 1e-10,
        "first moment: {i1}"
    );
    assert!(
        rel(i2, a.abs() * apz * apz / 3.0) < 1e-10,
        "derivative norm: {i2}"
    );

    // Same numbers, frozen from the 30-digit computation.
    assert!(rel(i0, 0.49169661790062885) < 1e-11);
    assert!(rel(i1, 0.76642633734097657) < 1e-11);
    assert!(rel(i2, 0.38321316867048829) < 1e-11);
}

#[test]
fn quadrature_reproduces_known_integrals() {
    let q = Quadrature::default();
    let third = integrate(|x| x * x, 0.0, 1.0, &q).unwrap();
    assert!((third.value - 1.0 / 3.0).abs() < 1e-14);
    assert!(third.error_bound >= (third.value - 1.0 / 3.0).abs());

    let two = integrate(f64::sin, 0.0, core::f64::consts::PI, &q).unwrap();
    assert!((two.value - 2.0).abs() < 1e-13);

    // Damped oscillation over the half line: int e^{-x} cos(3x) = 1/10.
    let osc = integrate_to_infinity(|x| (-x).exp() * (3.0 * x).cos(), 0.0, &q).unwrap();
    assert!((osc.value - 0.1).abs() < 1e-12, "{}", osc.value);

    // Gaussian-type tail: int x e^{-x^2/2} = 1.
    let gauss = integrate_to_infinity(|x| x * (-0.5 * x * x).exp(), 0.0, &q).unwrap();
    assert!((gauss.value - 1.0).abs() < 1e-12, "{}", gauss.value);
}

#[test]
fn root_finder_agrees_with_zero_expansion() {
    let root = find_root(airy_ai, -2.5, -2.2, 1e-14).unwrap();
    assert!((root - airy_zero(1)).abs() < 1e-12);
}
