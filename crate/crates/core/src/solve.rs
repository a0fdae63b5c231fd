//! Safeguarded one-dimensional solvers working in logarithmic coordinates.

/// Approximates `sup{x > 0 : f(x) <= target}` for a nondecreasing `f`.
///
/// The bracket is found by geometric expansion from `x0`; it is then shrunk by
/// Illinois steps on `ln f - ln target` with bisection as a fallback, until its
/// relative width drops below `rel_tol` or `max_iter` steps were spent.
/// Returns 0 or `+inf` when the level set is empty or unbounded.
pub fn increasing_level(f: impl Fn(f64) -> f64, target: f64, x0: f64, rel_tol: f64, max_iter: usize) -> f64 {
    let h = |u: f64| {
        let v = f(u.exp());
        if v.is_nan() {
            f64::INFINITY
        } else if v <= 0.0 {
            if target <= 0.0 {
                -1.0
            } else {
                f64::NEG_INFINITY
            }
        } else if target <= 0.0 {
            f64::INFINITY
        } else {
            v.ln() - target.ln()
        }
    };
    let u0 = if x0 > 0.0 && x0.is_finite() { x0.ln() } else { 0.0 };
    let h0 = h(u0);
    let (mut lo, mut hlo, mut hi, mut hhi);
    let mut step = 1.0;
    if h0 <= 0.0 {
        lo = u0;
        hlo = h0;
        loop {
            let u = lo + step;
            if u > 709.0 {
                return f64::INFINITY;
            }
            let hu = h(u);
            if hu > 0.0 {
                hi = u;
                hhi = hu;
                break;
            }
            lo = u;
            hlo = hu;
            step *= 2.0;
        }
    } else {
        hi = u0;
        hhi = h0;
        loop {
            let u = hi - step;
            if u < -745.0 {
                return 0.0;
            }
            let hu = h(u);
            if hu <= 0.0 {
                lo = u;
                hlo = hu;
                break;
            }
            hi = u;
            hhi = hu;
            step *= 2.0;
        }
    }
    let tol = rel_tol.max(1e-15);
    let mut side = 0i8;
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let width = hi - lo;
        let mut u = if hlo.is_finite() && hhi.is_finite() && hhi > hlo {
            lo - hlo * (hi - lo) / (hhi - hlo)
        } else {
            0.5 * (lo + hi)
        };
        let guard = 0.01 * width;
        if !(u > lo + guard && u < hi - guard) {
            u = 0.5 * (lo + hi);
        }
        let hu = h(u);
        if hu <= 0.0 {
            lo = u;
            hlo = hu;
            if side == -1 {
                hhi *= 0.5;
            }
            side = -1;
        } else {
            hi = u;
            hhi = hu;
            if side == 1 {
                hlo *= 0.5;
            }
            side = 1;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Minimises a quasiconvex `g` over `x > 0`, starting the bracket search at `x0`.
/// Returns `(argmin, min)`.
pub fn minimize_log(g: impl Fn(f64) -> f64, x0: f64, rel_tol: f64) -> (f64, f64) {
    let gu = |u: f64| {
        let v = g(u.exp());
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut a = x0.ln();
    let mut fa = gu(a);
    let mut step = 0.5;
    let mut b = a + step;
    let mut fb = gu(b);
    if fb > fa {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
        step = -step;
    }
    // Walk downhill until the function increases.
    let mut c = b + step;
    let mut fc = gu(c);
    let mut guard = 0;
    while fc <= fb && guard < 200 {
        step *= 1.6;
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        c = b + step;
        fc = gu(c);
        guard += 1;
        if c.abs() > 700.0 {
            break;
        }
    }
    let _ = fa;
    let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
    // Brent: golden section with parabolic steps when they are well behaved.
    let cg = 0.5 * (3.0 - 5f64.sqrt());
    let (mut x, mut w, mut vv) = (b, b, b);
    let (mut fx, mut fw, mut fv) = (fb, fb, fb);
    let (mut d, mut e): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let xm = 0.5 * (lo + hi);
        let tol1 = 0.5 * rel_tol + 1e-15 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 && fx.is_finite() && fw.is_finite() && fv.is_finite() {
            let r1 = (x - w) * (fx - fv);
            let mut q = (x - vv) * (fx - fw);
            let mut p = (x - vv) * q - (x - w) * r1;
            q = 2.0 * (q - r1);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (lo - x) && p < q * (hi - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = if xm >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { lo - x } else { hi - x };
            d = cg * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = gu(u);
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            vv = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                vv = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || vv == x || vv == w {
                vv = u;
                fv = fu;
            }
        }
    }
    let (u, v) = (x, fx);
    let (u, v) = if fb < v { (b, fb) } else { (u, v) };
    (u.exp(), v)
}
