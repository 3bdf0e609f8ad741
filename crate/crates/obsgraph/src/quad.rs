//! Composite Simpson quadrature.

/// Integrate `f` over `[a, b]` with `subintervals` panels (must be even and
/// positive). Error is O(h⁴) for smooth integrands.
pub fn composite_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, subintervals: usize) -> f64 {
    assert!(
        subintervals >= 2 && subintervals.is_multiple_of(2),
        "need an even panel count"
    );
    let n = subintervals;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}
