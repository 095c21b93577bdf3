use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg, Sub};

const FOLD_TOL: f64 = 1e-12;

/// A spider phase: an exact multiple of pi/4 plus an optional generic angle.
///
/// The exact part is kept modulo 8. The generic part lives in `[0, 2pi)` and is
/// folded back into the exact part whenever it lands on a multiple of pi/4.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Phase {
    eighths: u8,
    generic: f64,
}

impl Phase {
    pub const ZERO: Phase = Phase {
        eighths: 0,
        generic: 0.0,
    };
    pub const PI: Phase = Phase {
        eighths: 4,
        generic: 0.0,
    };

    /// `k * pi / 4`.
    pub fn pi4(k: i64) -> Phase {
        Phase {
            eighths: k.rem_euclid(8) as u8,
            generic: 0.0,
        }
    }

    /// Phase from an angle in radians. Multiples of pi/4 (to 1e-12) become exact.
    pub fn from_radians(theta: f64) -> Phase {
        Phase::ZERO.with_generic(theta)
    }

    /// Exact part and generic part as stored.
    pub fn from_parts(eighths: i64, generic: f64) -> Phase {
        Phase::pi4(eighths).with_generic(generic)
    }

    fn with_generic(mut self, extra: f64) -> Phase {
        let total = (self.generic + extra).rem_euclid(TAU);
        let k = (total / (PI / 4.0)).round();
        if (total - k * PI / 4.0).abs() < FOLD_TOL {
            self.eighths = ((self.eighths as i64 + k as i64).rem_euclid(8)) as u8;
            self.generic = 0.0;
        } else {
            self.generic = total;
        }
        self
    }

    /// Exact numerator in units of pi/4, in `0..8`.
    pub fn eighths(&self) -> u8 {
        self.eighths
    }

    pub fn generic(&self) -> Option<f64> {
        (self.generic != 0.0).then_some(self.generic)
    }

    pub fn is_exact(&self) -> bool {
        self.generic == 0.0
    }

    pub fn is_zero(&self) -> bool {
        self.eighths == 0 && self.is_exact()
    }

    pub fn is_clifford(&self) -> bool {
        self.is_exact() && self.eighths.is_multiple_of(2)
    }

    pub fn is_pauli(&self) -> bool {
        self.is_exact() && self.eighths.is_multiple_of(4)
    }

    /// Clifford but not Pauli: +-pi/2.
    pub fn is_proper_clifford(&self) -> bool {
        self.is_exact() && self.eighths % 4 == 2
    }

    pub fn radians(&self) -> f64 {
        (self.eighths as f64 * PI / 4.0 + self.generic).rem_euclid(TAU)
    }

    /// `e^{i theta}`. Exact multiples of pi/4 use tabulated values.
    pub fn exp_i(&self) -> num_complex::Complex64 {
        if self.is_exact() {
            unit_eighth(self.eighths as i64)
        } else {
            num_complex::Complex64::from_polar(1.0, self.radians())
        }
    }
}

/// `e^{i k pi / 4}` with exact components.
pub fn unit_eighth(k: i64) -> num_complex::Complex64 {
    use num_complex::Complex64 as C;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match k.rem_euclid(8) {
        0 => C::new(1.0, 0.0),
        1 => C::new(h, h),
        2 => C::new(0.0, 1.0),
        3 => C::new(-h, h),
        4 => C::new(-1.0, 0.0),
        5 => C::new(-h, -h),
        6 => C::new(0.0, -1.0),
        _ => C::new(h, -h),
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::pi4(self.eighths as i64 + rhs.eighths as i64)
            .with_generic(self.generic + rhs.generic)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::pi4(-(self.eighths as i64)).with_generic(-self.generic)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generic() {
            None => write!(f, "{}pi/4", self.eighths),
            Some(g) => write!(f, "{}pi/4+{g}", self.eighths),
        }
    }
}
