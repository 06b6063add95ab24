//! Train the fusion SVM on a toy score set, audit the KKT conditions and
//! show the effect of folding dependent support vectors.
//!
//! Run: `cargo run --example svm_fusion`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigfuse::fusion::{kkt_audit, prune_dependent_svs, train_with_duals, FusionSample, SvmParams};

fn main() -> sigfuse::Result<()> {
    // genuine comparisons score high on all three matchers, impostors low
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut samples = Vec::new();
    for _ in 0..40 {
        let g = [rng.random_range(0.55..1.0), rng.random_range(0.5..1.0), rng.random_range(0.6..1.0)];
        let i = [rng.random_range(0.0..0.5), rng.random_range(0.0..0.6), rng.random_range(0.0..0.55)];
        samples.push(FusionSample::new(g, 1));
        samples.push(FusionSample::new(i, -1));
    }

    let params = SvmParams::default();
    let trained = train_with_duals(&samples, &params)?;
    let model = &trained.model;
    let audit = kkt_audit(model, &samples, &trained.duals);
    println!(
        "{} support vectors after {} passes, converged = {}",
        model.n_support(),
        model.meta.iterations,
        model.meta.converged
    );
    println!("w = {:?}, b = {:.4}", model.weight_vector(), model.bias);
    println!("KKT audit: {audit:?} -> passes at tol {}: {}", params.tol, audit.passes(params.tol));

    let pruned = prune_dependent_svs(model, 1e-8);
    println!("pruned to {} support vectors, w = {:?}", pruned.n_support(), pruned.weight_vector());
    for m in [[0.9, 0.8, 0.95], [0.3, 0.2, 0.4], [0.55, 0.5, 0.6]] {
        println!(
            "FS({m:?}) = {:+.4} (pruned {:+.4}) -> {}",
            model.decision_value(&m),
            pruned.decision_value(&m),
            if model.decide(&m) > 0 { "genuine" } else { "impostor" }
        );
    }
    Ok(())
}
