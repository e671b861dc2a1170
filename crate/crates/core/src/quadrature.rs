//! Adaptive Gauss–Kronrod (7/15) quadrature in one and two dimensions.
//!
//! Used as an independent numerical oracle for the closed-form optics.

// Kronrod abscissae on [0, 1]; the odd-indexed ones are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-13,
            abs: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
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

/// Integrates `f` over `[a, b]` by recursive bisection until each panel's
/// Kronrod–Gauss difference meets its share of the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Estimate {
    let (whole, err) = gk15(&f, a, b);
    let target = tol.abs.max(tol.rel * whole.abs());
    let mut evaluations = 15;
    let (value, error) = refine(&f, a, b, whole, err, target, 0, &mut evaluations);
    Estimate {
        value,
        error,
        evaluations,
    }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    target: f64,
    depth: u32,
    evaluations: &mut usize,
) -> (f64, f64) {
    if err <= target || depth >= MAX_DEPTH {
        return (value, err);
    }
    let mid = 0.5 * (a + b);
    let (left, left_err) = gk15(f, a, mid);
    let (right, right_err) = gk15(f, mid, b);
    *evaluations += 30;
    let (lv, le) = refine(
        f,
        a,
        mid,
        left,
        left_err,
        target / 2.0,
        depth + 1,
        evaluations,
    );
    let (rv, re) = refine(
        f,
        mid,
        b,
        right,
        right_err,
        target / 2.0,
        depth + 1,
        evaluations,
    );
    (lv + rv, le + re)
}

/// Iterated integral `∫_{x0}^{x1} ∫_{y0(x)}^{y1(x)} f(x, y) dy dx`.
pub fn integrate_2d<F, Lo, Hi>(f: F, x0: f64, x1: f64, y0: Lo, y1: Hi, tol: Tolerance) -> Estimate
where
    F: Fn(f64, f64) -> f64,
    Lo: Fn(f64) -> f64,
    Hi: Fn(f64) -> f64,
{
    let inner_tol = Tolerance {
        rel: tol.rel * 0.1,
        abs: tol.abs * 0.1,
    };
    let count = std::cell::Cell::new(0usize);
    let outer = integrate(
        |x| {
            let e = integrate(|y| f(x, y), y0(x), y1(x), inner_tol);
            count.set(count.get() + e.evaluations);
            e.value
        },
        x0,
        x1,
        tol,
    );
    Estimate {
        evaluations: count.get(),
        ..outer
    }
}
