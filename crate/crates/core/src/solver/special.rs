//! Integer-order Bessel and Hankel functions (f64).

use num_complex::Complex64;

/// `(J_m, Y_m, J_m', Y_m')` at `x > 0` for any integer order.
pub fn bessel_jy(m: i64, x: f64) -> (f64, f64, f64, f64) {
    assert!(x > 0.0 && x.is_finite(), "bessel argument must be positive, got {x}");
    let (j, y, jp, yp) = puruspe::besseljy(m.unsigned_abs() as f64, x);
    if m < 0 && m % 2 != 0 {
        (-j, -y, -jp, -yp)
    } else {
        (j, y, jp, yp)
    }
}

/// `H¹_m(x)`.
pub fn hankel1(m: i64, x: f64) -> Complex64 {
    let (j, y, _, _) = bessel_jy(m, x);
    Complex64::new(j, y)
}

/// `(H¹_m(x), H¹_m'(x))`.
pub fn hankel1_with_derivative(m: i64, x: f64) -> (Complex64, Complex64) {
    let (j, y, jp, yp) = bessel_jy(m, x);
    (Complex64::new(j, y), Complex64::new(jp, yp))
}
