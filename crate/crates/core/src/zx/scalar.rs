use num_complex::Complex64;
use std::ops::{Mul, MulAssign};

/// A complex number `value * sqrt(2)^sqrt2_power`.
///
/// Powers of sqrt(2) produced by rewrites are tracked exactly; the floating
/// part is renormalised into the exponent when it drifts far from 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalar {
    pub value: Complex64,
    pub sqrt2_power: i32,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::ONE
    }
}

impl Scalar {
    pub const ONE: Scalar = Scalar {
        value: Complex64 { re: 1.0, im: 0.0 },
        sqrt2_power: 0,
    };

    pub fn new(value: Complex64, sqrt2_power: i32) -> Self {
        let mut s = Scalar { value, sqrt2_power };
        s.renormalise();
        s
    }

    pub fn from_complex(value: Complex64) -> Self {
        Scalar::new(value, 0)
    }

    pub fn sqrt2_pow(k: i32) -> Self {
        Scalar {
            value: Complex64::new(1.0, 0.0),
            sqrt2_power: k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == Complex64::new(0.0, 0.0)
    }

    pub fn mul_sqrt2_pow(&mut self, k: i32) {
        self.sqrt2_power += k;
    }

    pub fn mul_complex(&mut self, z: Complex64) {
        self.value *= z;
        self.renormalise();
    }

    fn renormalise(&mut self) {
        let n = self.value.norm();
        if n == 0.0 || !n.is_finite() {
            return;
        }
        // keep |value| within [2^-32, 2^32] by shifting whole powers of two
        let e = n.log2();
        if e.abs() > 32.0 {
            let shift = e.trunc() as i32;
            self.value *= 2f64.powi(-shift);
            self.sqrt2_power += 2 * shift;
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let half = self.sqrt2_power.div_euclid(2);
        let odd = self.sqrt2_power.rem_euclid(2) == 1;
        let mut v = self.value * 2f64.powi(half);
        if odd {
            v *= std::f64::consts::SQRT_2;
        }
        v
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.value * rhs.value, self.sqrt2_power + rhs.sqrt2_power)
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = *self * rhs;
    }
}
