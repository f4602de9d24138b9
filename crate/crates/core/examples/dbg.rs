use jacobi_chain::polyfam::*;
fn main() {
    for f in [
        Family::hahn(10, 0.5, 0.5).unwrap(),
        Family::hahn(16, 2.0, 0.25).unwrap(),
        Family::hahn(64, 1.0, 3.0).unwrap(),
    ] {
        let size = f.size();
        let mut u = vec![vec![0.0; size]; size];
        for n in 0..size {
            for x in 0..size {
                u[n][x] = orthonormal_value(&f, n, x).unwrap();
            }
        }
        let mut worst: f64 = 0.0;
        let mut at = (0, 0);
        for a in 0..size {
            for b in a..size {
                let dot: f64 = (0..size).map(|x| u[a][x] * u[b][x]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                if (dot - target).abs() > worst {
                    worst = (dot - target).abs();
                    at = (a, b);
                }
            }
        }
        println!("{} N={}: defect={:.3e} at rows {:?}", f.kind_name(), f.order(), worst, at);
        // check worst row pair entries vs series
        let (a, _b) = at;
        let mut worst_entry: f64 = 0.0;
        let mut eat = 0;
        for x in 0..size {
            let s = poly_eval(&f, a, x).unwrap();
            let r = poly_eval_recurrence(&f, a, x).unwrap();
            let rel = (s - r).abs() / s.abs().max(1.0);
            if rel > worst_entry {
                worst_entry = rel;
                eat = x;
            }
        }
        println!("  row {a}: worst series-vs-recur rel={worst_entry:.2e} at x={eat}");
    }
}
