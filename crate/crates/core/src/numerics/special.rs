use std::f64::consts::PI;

use crate::C64;

use super::NumericsError;

/// Euler–Mascheroni constant.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal logarithm, imaginary part in `(−π, π]`.
pub fn principal_log(w: C64) -> Result<C64, NumericsError> {
    if w.norm() == 0.0 {
        return Err(NumericsError::ZeroArgument);
    }
    let arg = w.im.atan2(w.re);
    // atan2 returns −π for (negative, −0.0); fold onto +π.
    let arg = if arg == -PI { PI } else { arg };
    Ok(C64::new(w.norm().ln(), arg))
}

/// `ln Γ(z)` for `Re z ≥ 1/2` (Lanczos, g = 7), continued by reflection to
/// `Re z < 1/2`. On the right half-plane the imaginary part is the
/// continuous determination of `arg Γ`.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1 − z) = π / sin(πz)
        let sin = (z * PI).sin();
        return C64::new(PI.ln(), 0.0) - sin.ln() - ln_gamma(C64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    C64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let one = C64::new(1.0, 0.0);
        return PI / ((z * PI).sin() * gamma(one - z));
    }
    ln_gamma(z).exp()
}

/// `arg Γ(iν)` via `Γ(iν) = Γ(1 + iν)/(iν)`, continuous in `ν` on each side
/// of zero and odd in `ν`.
pub fn arg_gamma_imag_axis(nu: f64) -> Result<f64, NumericsError> {
    if nu == 0.0 || !nu.is_finite() {
        return Err(NumericsError::ZeroArgument);
    }
    let lg = ln_gamma(C64::new(1.0, nu));
    Ok(lg.im - nu.signum() * PI / 2.0)
}
