use crate::C64;

use super::NumericsError;

/// Five-point central differences `(f′(s), f″(s))` with step `h`, taken along
/// the radial direction of `s` (along the real axis when `s = 0`). For
/// analytic `f` this is the complex derivative; truncation error is `O(h⁴)`.
pub fn derivative_stencil<F, E>(mut f: F, s: C64, h: f64) -> Result<(C64, C64), NumericsError>
where
    F: FnMut(C64) -> Result<C64, E>,
    E: std::fmt::Display,
{
    if h.is_nan() || h <= 0.0 || !h.is_finite() {
        return Err(NumericsError::StencilOutOfDomain(format!("step h = {h}")));
    }
    let dir = if s.norm() > 0.0 { s / s.norm() } else { C64::new(1.0, 0.0) };
    let step = dir * h;
    let mut eval = |k: f64| {
        let p = s + step * k;
        f(p).map_err(|e| NumericsError::StencilOutOfDomain(format!("at {p}: {e}")))
            .and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(NumericsError::StencilOutOfDomain(format!("non-finite value at {p}")))
                }
            })
    };
    let fm2 = eval(-2.0)?;
    let fm1 = eval(-1.0)?;
    let f0 = eval(0.0)?;
    let fp1 = eval(1.0)?;
    let fp2 = eval(2.0)?;
    let d1 = (fm2 - fm1 * 8.0 + fp1 * 8.0 - fp2) / (step * 12.0);
    let d2 = (-fm2 + fm1 * 16.0 - f0 * 30.0 + fp1 * 16.0 - fp2) / (step * step * 12.0);
    Ok((d1, d2))
}
