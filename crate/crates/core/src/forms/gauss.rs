//! Gauss-Legendre nodes on [-1, 1] (Newton iteration on the recurrence) and a
//! degree-5 symmetric triangle rule; the fixed rules underneath the adaptive
//! integrators.

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
/// Exact for polynomials of degree `2n - 1`.
pub fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut nodes = vec![(0.0f64, 0.0f64); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..64 {
            let (p, d) = legendre_eval(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = (x, w);
        nodes[n - 1 - i] = (-x, w);
    }
    if n % 2 == 1 {
        // Middle node is exactly zero by symmetry.
        let (_, w) = nodes[n / 2];
        nodes[n / 2] = (0.0, w);
    }
    nodes
}

/// Legendre polynomial `P_n` and its derivative at `x` via the Bonnet
/// recurrence.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Barycentric points and weights of the 7-point degree-5 triangle rule;
/// weights sum to 1 and multiply the triangle area.
pub fn triangle_rule() -> [([f64; 3], f64); 7] {
    let s = 15.0f64.sqrt();
    let a1 = (6.0 - s) / 21.0;
    let w1 = (155.0 - s) / 1200.0;
    let a2 = (6.0 + s) / 21.0;
    let w2 = (155.0 + s) / 1200.0;
    let third = 1.0 / 3.0;
    [
        ([third, third, third], 9.0 / 40.0),
        ([a1, a1, 1.0 - 2.0 * a1], w1),
        ([a1, 1.0 - 2.0 * a1, a1], w1),
        ([1.0 - 2.0 * a1, a1, a1], w1),
        ([a2, a2, 1.0 - 2.0 * a2], w2),
        ([a2, 1.0 - 2.0 * a2, a2], w2),
        ([1.0 - 2.0 * a2, a2, a2], w2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(rule: &[(f64, f64)], f: impl Fn(f64) -> f64) -> f64 {
        rule.iter().map(|&(x, w)| w * f(x)).sum()
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [2, 3, 5, 8, 16, 31] {
            let rule = legendre_rule(n);
            let total: f64 = rule.iter().map(|&(_, w)| w).sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}: {total}");
        }
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        let rule = legendre_rule(16);
        // degree 31 is the highest exactly integrated degree for n = 16
        let got = integrate(&rule, |x| x.powi(30));
        assert!((got - 2.0 / 31.0).abs() < 1e-14);
        let odd = integrate(&rule, |x| x.powi(31));
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn order_two_integrates_cubics() {
        let rule = legendre_rule(2);
        assert!((integrate(&rule, |x| x * x) - 2.0 / 3.0).abs() < 1e-14);
        assert!(integrate(&rule, |x| x * x * x).abs() < 1e-15);
    }

    #[test]
    fn triangle_rule_is_degree_five() {
        // Integrate monomials x^p y^q over the unit triangle (0,0),(1,0),(0,1):
        // exact value p! q! / (p + q + 2)!.
        let rule = triangle_rule();
        let fact = |k: usize| (1..=k).product::<usize>() as f64;
        for p in 0..=5usize {
            for q in 0..=(5 - p) {
                let exact = fact(p) * fact(q) / fact(p + q + 2);
                let approx: f64 = rule
                    .iter()
                    .map(|&([l0, l1, l2], w)| {
                        // vertices (0,0), (1,0), (0,1)
                        let x = l1;
                        let y = l2;
                        let _ = l0;
                        w * x.powi(p as i32) * y.powi(q as i32)
                    })
                    .sum::<f64>()
                    * 0.5;
                assert!(
                    (approx - exact).abs() < 1e-15,
                    "x^{p} y^{q}: {approx} vs {exact}"
                );
            }
        }
    }
}
