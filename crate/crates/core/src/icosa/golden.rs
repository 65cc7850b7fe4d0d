//! Exact arithmetic in `Z[φ]`, φ = (1+√5)/2.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `a + b·φ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct GoldenNumber {
    pub a: i64,
    pub b: i64,
}

impl GoldenNumber {
    pub const ZERO: GoldenNumber = GoldenNumber { a: 0, b: 0 };
    pub const ONE: GoldenNumber = GoldenNumber { a: 1, b: 0 };
    pub const PHI: GoldenNumber = GoldenNumber { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        GoldenNumber { a, b }
    }

    pub const fn int(a: i64) -> Self {
        GoldenNumber { a, b: 0 }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    /// Galois conjugate: φ ↦ 1 - φ.
    pub fn conj(self) -> Self {
        GoldenNumber::new(self.a + self.b, -self.b)
    }

    /// `x * conj(x)`, an ordinary integer.
    pub fn norm(self) -> i64 {
        self.a * self.a + self.a * self.b - self.b * self.b
    }

    /// Exact sign. Writes the value as `(p + q√5)/2` and compares.
    pub fn signum(self) -> i64 {
        let p = 2 * self.a + self.b;
        let q = self.b;
        let sign = |x: i64| x.signum();
        match (sign(p), sign(q)) {
            (0, s) | (s, 0) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            (1, -1) => sign(p * p - 5 * q * q),
            _ => sign(5 * q * q - p * p),
        }
    }

    pub fn is_positive(self) -> bool {
        self.signum() > 0
    }

    /// Exact quotient when it lies in `Z[φ]`.
    pub fn checked_div(self, d: GoldenNumber) -> Option<GoldenNumber> {
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let t = self * d.conj();
        (t.a % n == 0 && t.b % n == 0).then(|| GoldenNumber::new(t.a / n, t.b / n))
    }

    /// Half of the value when both coefficients are even.
    pub fn halve(self) -> Option<GoldenNumber> {
        (self.a % 2 == 0 && self.b % 2 == 0).then(|| GoldenNumber::new(self.a / 2, self.b / 2))
    }

    pub fn to_f64(self) -> f64 {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        self.a as f64 + self.b as f64 * phi
    }
}

impl Add for GoldenNumber {
    type Output = GoldenNumber;
    fn add(self, o: GoldenNumber) -> GoldenNumber {
        GoldenNumber::new(self.a + o.a, self.b + o.b)
    }
}

impl AddAssign for GoldenNumber {
    fn add_assign(&mut self, o: GoldenNumber) {
        *self = *self + o;
    }
}

impl Sub for GoldenNumber {
    type Output = GoldenNumber;
    fn sub(self, o: GoldenNumber) -> GoldenNumber {
        GoldenNumber::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber::new(-self.a, -self.b)
    }
}

impl Mul for GoldenNumber {
    type Output = GoldenNumber;
    // (a + bφ)(c + dφ) = ac + bd + (ad + bc + bd)φ, using φ² = φ + 1
    fn mul(self, o: GoldenNumber) -> GoldenNumber {
        GoldenNumber::new(
            self.a * o.a + self.b * o.b,
            self.a * o.b + self.b * o.a + self.b * o.b,
        )
    }
}

impl PartialOrd for GoldenNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "φ"),
            (0, -1) => write!(f, "-φ"),
            (0, b) => write!(f, "{b}φ"),
            (a, 1) => write!(f, "{a}+φ"),
            (a, -1) => write!(f, "{a}-φ"),
            (a, b) if b < 0 => write!(f, "{a}{b}φ"),
            (a, b) => write!(f, "{a}+{b}φ"),
        }
    }
}

/// A 3-vector over `Z[φ]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct GoldenVector {
    pub x: GoldenNumber,
    pub y: GoldenNumber,
    pub z: GoldenNumber,
}

impl GoldenVector {
    pub const fn new(x: GoldenNumber, y: GoldenNumber, z: GoldenNumber) -> Self {
        GoldenVector { x, y, z }
    }

    pub fn coords(self) -> [GoldenNumber; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_coords(c: [GoldenNumber; 3]) -> Self {
        GoldenVector::new(c[0], c[1], c[2])
    }

    pub fn dot(self, o: GoldenVector) -> GoldenNumber {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: GoldenVector) -> GoldenVector {
        GoldenVector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm2(self) -> GoldenNumber {
        self.dot(self)
    }

    pub fn scale(self, k: GoldenNumber) -> GoldenVector {
        GoldenVector::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn halve(self) -> Option<GoldenVector> {
        Some(GoldenVector::new(
            self.x.halve()?,
            self.y.halve()?,
            self.z.halve()?,
        ))
    }

    pub fn is_zero(self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn to_f64(self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }
}

impl Add for GoldenVector {
    type Output = GoldenVector;
    fn add(self, o: GoldenVector) -> GoldenVector {
        GoldenVector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for GoldenVector {
    type Output = GoldenVector;
    fn sub(self, o: GoldenVector) -> GoldenVector {
        GoldenVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for GoldenVector {
    type Output = GoldenVector;
    fn neg(self) -> GoldenVector {
        GoldenVector::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for GoldenVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}
