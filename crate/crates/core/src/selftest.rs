//! Invariant checks over the built-in fixtures, run by `simkit selftest`.

use crate::data::{read_embedding_bytes, write_embedding_pairs, EmbeddingPair};
use crate::eval::{evaluate_dataset, spearman_rho};
use crate::fixtures::{f1_pairs, F1_MSE};
use crate::metrics::{DenseVector, Metric, MetricKind};
use crate::stats::{
    bootstrap_mean_diff_ci, exact_wilcoxon_p, wilcoxon_one_sided, PairedDifferences, SplitMix64,
};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, result: Result<(), String>) -> Check {
    match result {
        Ok(()) => Check { name, passed: true, detail: String::new() },
        Err(detail) => Check { name, passed: false, detail },
    }
}

fn random_vector(rng: &mut SplitMix64, dim: usize) -> Vec<f32> {
    // magnitudes spread log-uniformly over 1e-3..1e3
    let scale = 10f64.powf(rng.next_f64() * 6.0 - 3.0);
    (0..dim).map(|_| ((rng.next_f64() * 2.0 - 1.0) * scale) as f32).collect()
}

fn bounds(rng: &mut SplitMix64) -> Result<(), String> {
    let tanh1 = 1f64.tanh();
    for i in 0..2000 {
        let dim = [1, 2, 8, 384][i % 4];
        let x = DenseVector::new(random_vector(rng, dim)).map_err(|e| e.to_string())?;
        let y = DenseVector::new(random_vector(rng, dim)).map_err(|e| e.to_string())?;
        for (m, bound) in [(Metric::Cosine, 1.0), (Metric::OverlapSim, 1.0), (Metric::TanhSim, tanh1 + 1e-12)] {
            let s = MetricKind::with_default_epsilon(m).score(&x, &y).map_err(|e| e.to_string())?;
            if s.abs() > bound {
                return Err(format!("{m} = {s} exceeds {bound}"));
            }
            let t = MetricKind::with_default_epsilon(m).score(&y, &x).map_err(|e| e.to_string())?;
            if s.to_bits() != t.to_bits() {
                return Err(format!("{m} not symmetric: {s} vs {t}"));
            }
        }
    }
    Ok(())
}

fn identities(rng: &mut SplitMix64) -> Result<(), String> {
    for _ in 0..200 {
        let v = random_vector(rng, 16);
        let neg: Vec<f32> = v.iter().map(|a| -a).collect();
        let x = DenseVector::new(v).map_err(|e| e.to_string())?;
        let nx = DenseVector::new(neg).map_err(|e| e.to_string())?;
        let os = MetricKind::new(Metric::OverlapSim, 0.0).unwrap();
        let hts = MetricKind::new(Metric::TanhSim, 0.0).unwrap();
        let cases = [
            (os.score(&x, &x), 1.0),
            (hts.score(&x, &x), 1f64.tanh()),
            (os.score(&x, &nx), -1.0),
        ];
        for (got, want) in cases {
            let got = got.map_err(|e| e.to_string())?;
            if (got - want).abs() > 1e-12 {
                return Err(format!("expected {want}, got {got}"));
            }
        }
    }
    Ok(())
}

fn rank_equivalence(rng: &mut SplitMix64) -> Result<(), String> {
    // Coordinates ±1/16 over 256 dims give norms of exactly 1.
    let pairs: Vec<EmbeddingPair> = (0..300)
        .map(|_| {
            let mut sign = || if rng.next_u64() & 1 == 0 { 0.0625f32 } else { -0.0625 };
            let x: Vec<f32> = (0..256).map(|_| sign()).collect();
            let y: Vec<f32> = (0..256).map(|_| sign()).collect();
            let gold = rng.next_f64();
            EmbeddingPair::new(DenseVector::new(x).unwrap(), DenseVector::new(y).unwrap(), gold).unwrap()
        })
        .collect();
    let metrics: Vec<_> = Metric::ALL.into_iter().map(MetricKind::with_default_epsilon).collect();
    let res = evaluate_dataset(&pairs, &metrics).map_err(|e| e.to_string())?;
    let rhos: Vec<_> = res.values().map(|r| r.spearman_rho).collect();
    if rhos.windows(2).all(|w| w[0] == w[1]) {
        Ok(())
    } else {
        Err(format!("spearman differs across metrics: {rhos:?}"))
    }
}

fn f1_table() -> Result<(), String> {
    let pairs = f1_pairs();
    let metrics: Vec<_> = Metric::ALL.into_iter().map(MetricKind::with_default_epsilon).collect();
    let res = evaluate_dataset(&pairs, &metrics).map_err(|e| e.to_string())?;
    for (m, want) in Metric::ALL.iter().zip(F1_MSE) {
        let got = res[m].mse;
        if (got - want).abs() > 1e-10 * want.max(1.0) {
            return Err(format!("{m} mse {got}, expected {want}"));
        }
    }
    Ok(())
}

fn spearman_worked_example() -> Result<(), String> {
    let rho = spearman_rho(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).map_err(|e| e.to_string())?;
    let want = 4.5 / 22.5f64.sqrt();
    if (rho - want).abs() > 1e-12 {
        return Err(format!("rho {rho}, expected {want}"));
    }
    Ok(())
}

fn wilcoxon_examples() -> Result<(), String> {
    let d = PairedDifferences::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let r = wilcoxon_one_sided(&d).map_err(|e| e.to_string())?;
    if r.w_plus != 15.0 || r.p_value != 0.03125 {
        return Err(format!("got W+ = {}, p = {}", r.w_plus, r.p_value));
    }
    let p = exact_wilcoxon_p(55.0, 10).map_err(|e| e.to_string())?;
    if p != 1.0 / 1024.0 {
        return Err(format!("exact tail at max was {p}"));
    }
    Ok(())
}

fn bootstrap_determinism() -> Result<(), String> {
    let d = PairedDifferences::new((0..50).map(|i| ((i * 37) % 11) as f64 / 7.0 - 0.5).collect()).unwrap();
    let a = bootstrap_mean_diff_ci(&d, 300, 0.95, 11).map_err(|e| e.to_string())?;
    let b = bootstrap_mean_diff_ci(&d, 300, 0.95, 11).map_err(|e| e.to_string())?;
    if a.lower.to_bits() != b.lower.to_bits() || a.upper.to_bits() != b.upper.to_bits() {
        return Err("repeated runs differ".into());
    }
    let c = PairedDifferences::new(vec![0.3; 20]).unwrap();
    let ci = bootstrap_mean_diff_ci(&c, 100, 0.95, 1).map_err(|e| e.to_string())?;
    if ci.lower != 0.3 || ci.upper != 0.3 {
        return Err(format!("constant input gave [{}, {}]", ci.lower, ci.upper));
    }
    Ok(())
}

fn embp_round_trip() -> Result<(), String> {
    let pairs = f1_pairs();
    let mut buf = Vec::new();
    write_embedding_pairs(&pairs, &mut buf).map_err(|e| e.to_string())?;
    let back = read_embedding_bytes(&buf).map_err(|e| e.to_string())?;
    if back != pairs {
        return Err("pairs differ after round trip".into());
    }
    Ok(())
}

/// Runs every check; the generator is seeded so results are reproducible.
pub fn run() -> Vec<Check> {
    let mut rng = SplitMix64(0x5eed);
    vec![
        check("metric bounds and symmetry", bounds(&mut rng)),
        check("identity and antipodal values", identities(&mut rng)),
        check("rank equivalence at unit norm", rank_equivalence(&mut rng)),
        check("F1 fixture MSE table", f1_table()),
        check("tie-aware spearman", spearman_worked_example()),
        check("wilcoxon exact examples", wilcoxon_examples()),
        check("bootstrap determinism", bootstrap_determinism()),
        check("EMBP round trip", embp_round_trip()),
    ]
}
