use crate::uniform::UniformState;

/// tan(π/12) = 2 − √3.
pub const TAN_HALF_MIN: f64 = 0.267_949_192_431_122_7;
/// tan(π/6) = 1/√3.
pub const TAN_HALF_MAX: f64 = 0.577_350_269_189_625_8;

/// Which of the three admissible angle bands a rotation falls in, given the
/// base angle φ ∈ [π/6, π/3].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleBand {
    /// θ = φ
    Positive,
    /// θ = −φ
    Negative,
    /// θ = π − φ
    Obtuse,
}

impl AngleBand {
    fn from_index(i: u32) -> Self {
        match i {
            0 => AngleBand::Positive,
            1 => AngleBand::Negative,
            _ => AngleBand::Obtuse,
        }
    }
}

/// The rotation `[[c, s], [-s, c]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation2 {
    pub c: f64,
    pub s: f64,
}

impl Rotation2 {
    pub const IDENTITY: Rotation2 = Rotation2 { c: 1.0, s: 0.0 };

    pub fn new(c: f64, s: f64) -> Self {
        Rotation2 { c, s }
    }

    /// Builds the rotation from `t = tan(φ/2)` without evaluating any
    /// trigonometric function.
    pub fn from_half_angle_tan(t: f64, band: AngleBand) -> Self {
        let t2 = t * t;
        let denom = 1.0 + t2;
        let c = (1.0 - t2) / denom;
        let s = 2.0 * t / denom;
        match band {
            AngleBand::Positive => Rotation2 { c, s },
            AngleBand::Negative => Rotation2 { c, s: -s },
            AngleBand::Obtuse => Rotation2 { c: -c, s },
        }
    }

    /// Random rotation with `min(|cos θ|, |sin θ|) >= 1/2`: draws `t` uniform
    /// on `[tan(π/12), tan(π/6)]`, then one of the three bands.
    pub fn from_uniform(ustate: &mut UniformState) -> Self {
        let t = TAN_HALF_MIN + (TAN_HALF_MAX - TAN_HALF_MIN) * ustate.next_uniform();
        let band = AngleBand::from_index(ustate.int_below_unchecked(3));
        Rotation2::from_half_angle_tan(t, band)
    }

    /// Applies the rotation to `(x, y)`.
    #[inline]
    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (self.c * x + self.s * y, -self.s * x + self.c * y)
    }
}
