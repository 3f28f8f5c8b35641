//! Adaptive Gauss-Kronrod (7, 15) quadrature.

#![allow(clippy::excessive_precision)]

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Upper limit on the number of subintervals.
pub const MAX_INTERVALS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`, bisecting the worst interval until the summed
/// error estimate is at most `max(abs_tol, rel_tol * |value|)`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quadrature {
    let (v, e) = gk15(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let value: f64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || pieces.len() >= MAX_INTERVALS {
            return Quadrature {
                value,
                error,
                intervals: pieces.len(),
                converged: error <= target,
            };
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("nonempty");
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (lv, le) = gk15(&mut f, lo, mid);
        let (rv, re) = gk15(&mut f, mid, hi);
        pieces.push((lo, mid, lv, le));
        pieces.push((mid, hi, rv, re));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x| x.powi(9) - 3.0 * x * x, 0.0, 2.0, 1e-14, 0.0);
        assert!((q.value - (102.4 - 8.0)).abs() < 1e-12);
        assert!(q.converged);
    }

    #[test]
    fn smooth_functions() {
        let q = integrate(f64::exp, 0.0, 3.0, 1e-12, 0.0);
        assert!((q.value - (3f64.exp() - 1.0)).abs() < 1e-12);
        let q = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-10, 0.0);
        assert!((q.value - 2.0 / 3.0).abs() < 1e-10);
    }
}
