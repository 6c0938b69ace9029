//! Adaptive Simpson quadrature with a recursion cap.

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Maximum recursion depth before the result is flagged.
pub const MAX_DEPTH: u32 = 40;
const MIN_DEPTH: u32 = 4;

/// Result of a quadrature together with an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    /// Set when some subinterval hit the depth cap without meeting the tolerance.
    pub capped: bool,
    pub evaluations: usize,
}

struct State<'a> {
    f: &'a mut dyn FnMut(f64) -> f64,
    evals: usize,
    capped: bool,
    error: f64,
    rel: f64,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Quadrature {
    adaptive_simpson_mixed(f, a, b, tol, 0.0)
}

/// Like [`adaptive_simpson`], but a subinterval is also accepted once its
/// error is below `rel` times its own integral. Needed for integrands that
/// blow up, where an absolute tolerance is out of reach.
pub fn adaptive_simpson_mixed<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64, rel: f64) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, error: 0.0, capped: false, evaluations: 0 };
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut st = State { f: &mut f, evals: 3, capped: false, error: 0.0, rel };
    let value = recurse(&mut st, a, b, fa, fm, fb, whole, tol, 0);
    Quadrature { value, error: st.error, capped: st.capped, evaluations: st.evals }
}

#[allow(clippy::too_many_arguments)]
fn recurse(st: &mut State, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = (st.f)(lm);
    let frm = (st.f)(rm);
    st.evals += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol.max(st.rel * (left + right).abs()) {
        st.error += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    if depth >= MAX_DEPTH || !delta.is_finite() {
        st.capped = true;
        st.error += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
        + recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
}
