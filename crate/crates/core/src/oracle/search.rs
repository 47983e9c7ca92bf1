//! Derivative-free maximization of a unimodal scalar function.
//!
//! Golden-section search shrinks the bracket; successive parabolic
//! interpolation through the bracket ends and midpoint then pins the
//! maximizer. Golden section alone cannot resolve a smooth maximum better
//! than about `sqrt(eps)` relative, because function values near the top
//! differ only in the second order.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Golden phase stops once the bracket is this narrow relative to its
    /// location.
    pub rel_width: f64,
    pub max_iter: usize,
    pub refine_passes: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            rel_width: 0.1,
            max_iter: 500,
            refine_passes: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMax {
    pub x: f64,
    pub value: f64,
    /// Final bracket; always contains `x`.
    pub bracket: (f64, f64),
    pub evaluations: usize,
    /// The maximizer sits on the upper end of the search domain, so the true
    /// maximum may lie beyond it.
    pub at_upper_bound: bool,
}

struct Counted<F> {
    f: F,
    calls: usize,
}

impl<F: Fn(f64) -> f64> Counted<F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.calls += 1;
        (self.f)(x)
    }
}

/// Vertex of the parabola through three points, or `None` when the points
/// are not strictly concave.
fn parabola_vertex((x0, f0): (f64, f64), (x1, f1): (f64, f64), (x2, f2): (f64, f64)) -> Option<f64> {
    let left = (f1 - f0) / (x1 - x0);
    let right = (f2 - f1) / (x2 - x1);
    let curvature = (right - left) / (x2 - x0);
    if curvature >= 0.0 || !curvature.is_finite() {
        return None;
    }
    let r = (x1 - x0) * (f1 - f2);
    let s = (x1 - x2) * (f1 - f0);
    let num = (x1 - x0) * r - (x1 - x2) * s;
    let den = 2.0 * (r - s);
    let v = x1 - num / den;
    v.is_finite().then_some(v)
}

/// Maximizes `f` over `[lo, hi]`, assuming it is unimodal there.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, opts: &SearchOptions) -> ScalarMax
where
    F: Fn(f64) -> f64,
{
    assert!(lo < hi, "empty search interval [{lo}, {hi}]");
    let (domain_lo, domain_hi) = (lo, hi);
    let abs_floor = 1e-14 * (domain_hi - domain_lo);
    let mut f = Counted { f, calls: 0 };

    let (mut lo, mut hi) = (lo, hi);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f.eval(x1);
    let mut f2 = f.eval(x2);
    for _ in 0..opts.max_iter {
        let width = hi - lo;
        if width <= opts.rel_width * x1.abs().max(x2.abs()) || width <= abs_floor {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f.eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f.eval(x1);
        }
    }

    let (mut best_x, mut best_f) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    let mut width = hi - lo;
    let mut bracket = (lo, hi);
    for _ in 0..opts.refine_passes {
        let (a, b) = (
            (best_x - 0.5 * width).max(domain_lo),
            (best_x + 0.5 * width).min(domain_hi),
        );
        let mid = 0.5 * (a + b);
        let pts = [(a, f.eval(a)), (mid, f.eval(mid)), (b, f.eval(b))];
        let Some(v) = parabola_vertex(pts[0], pts[1], pts[2]) else {
            // not concave at this scale: keep the best sampled point
            if let Some(&(x, fx)) = pts.iter().max_by(|p, q| p.1.total_cmp(&q.1)) {
                if fx > best_f {
                    best_x = x;
                    best_f = fx;
                }
            }
            bracket = (a, b);
            break;
        };
        if v <= domain_lo || v >= domain_hi {
            let edge = v.clamp(domain_lo, domain_hi);
            best_x = edge;
            best_f = f.eval(edge);
            bracket = if v <= domain_lo {
                (domain_lo, (domain_lo + width).min(domain_hi))
            } else {
                ((domain_hi - width).max(domain_lo), domain_hi)
            };
            break;
        }
        let moved = (v - best_x).abs();
        best_x = v;
        best_f = f.eval(v);
        bracket = ((v - 0.5 * width).max(domain_lo), (v + 0.5 * width).min(domain_hi));
        // Still moving: the parabola is not yet a good local model, so zoom
        // in. Otherwise a narrower bracket would only add rounding noise.
        if moved <= 1e-6 * width {
            break;
        }
        width *= 0.1;
    }

    ScalarMax {
        x: best_x,
        value: best_f,
        bracket,
        evaluations: f.calls,
        at_upper_bound: best_x >= domain_hi,
    }
}
