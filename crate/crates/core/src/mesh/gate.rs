use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{cis, cos, sin};
use crate::statevec::StateVector;

/// One two-mode gate acting on modes `k` and `k + 1`.
///
/// `theta` is the beam-splitter rotation and `alpha` the phase shift on mode
/// `k`. Values are unconstrained during training; see
/// [`export_physical`](crate::training::export_physical) for folding into the
/// hardware ranges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateParam {
    pub k: usize,
    pub theta: f64,
    pub alpha: f64,
}

impl GateParam {
    pub fn new(k: usize, theta: f64, alpha: f64) -> Self {
        Self { k, theta, alpha }
    }
}

/// A 2×2 block `[[m00, m01], [m10, m11]]` acting on an adjacent mode pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateMatrix(pub [Complex64; 4]);

impl GateMatrix {
    /// U|k⟩ = e^{iα}(cosθ|k⟩ + sinθ|k+1⟩), U|k+1⟩ = −sinθ|k⟩ + cosθ|k+1⟩
    pub fn direct(theta: f64, alpha: f64) -> Self {
        let (c, s) = (cos(theta), sin(theta));
        let e = cis(alpha);
        Self([e * c, Complex64::new(-s, 0.0), e * s, Complex64::new(c, 0.0)])
    }

    /// Conjugate transpose of [`GateMatrix::direct`].
    pub fn adjoint(theta: f64, alpha: f64) -> Self {
        Self::direct(theta, alpha).dagger()
    }

    pub fn new(theta: f64, alpha: f64, adjoint: bool) -> Self {
        if adjoint {
            Self::adjoint(theta, alpha)
        } else {
            Self::direct(theta, alpha)
        }
    }

    /// Derivative with respect to θ of [`GateMatrix::new`].
    pub fn d_theta(theta: f64, alpha: f64, adjoint: bool) -> Self {
        let (c, s) = (cos(theta), sin(theta));
        let e = cis(alpha);
        let d = Self([-e * s, Complex64::new(-c, 0.0), e * c, Complex64::new(-s, 0.0)]);
        if adjoint {
            d.dagger()
        } else {
            d
        }
    }

    /// Derivative with respect to α of [`GateMatrix::new`].
    pub fn d_alpha(theta: f64, alpha: f64, adjoint: bool) -> Self {
        let (c, s) = (cos(theta), sin(theta));
        let ie = Complex64::i() * cis(alpha);
        let zero = Complex64::new(0.0, 0.0);
        let d = Self([ie * c, zero, ie * s, zero]);
        if adjoint {
            d.dagger()
        } else {
            d
        }
    }

    pub fn dagger(&self) -> Self {
        let [a, b, c, d] = self.0;
        Self([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    #[inline]
    pub fn mix(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let [a, b, c, d] = self.0;
        (a * x + b * y, c * x + d * y)
    }

    /// Applies the block to `amps[k]`, `amps[k + 1]` in place.
    #[inline]
    pub fn apply(&self, amps: &mut [Complex64], k: usize) {
        let (x, y) = self.mix(amps[k], amps[k + 1]);
        amps[k] = x;
        amps[k + 1] = y;
    }
}

/// Applies a single direct-form gate to a state.
pub fn gate_apply(state: &StateVector, g: &GateParam) -> Result<StateVector> {
    if g.k + 1 >= state.dim() {
        return Err(Error::IndexOutOfRange {
            k: g.k,
            n_modes: state.dim(),
        });
    }
    let mut out = state.clone();
    GateMatrix::direct(g.theta, g.alpha).apply(out.amps_mut(), g.k);
    Ok(out)
}
