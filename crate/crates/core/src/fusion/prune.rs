use nalgebra::{DMatrix, DVector};

use super::svm::{Kernel, SvmModel};

/// Feature-space residual of the best least-squares reconstruction of SV `k`
/// from the others, with the reconstruction coefficients.
fn reconstruct(model: &SvmModel, k: usize) -> (f64, Vec<f64>) {
    let kern = |a: usize, b: usize| model.kernel.eval(&model.support_vectors[a], &model.support_vectors[b]);
    let others: Vec<usize> = (0..model.n_support()).filter(|&i| i != k).collect();
    let kkk = kern(k, k);
    if others.is_empty() {
        return (kkk.max(0.0).sqrt(), Vec::new());
    }
    let m = others.len();
    let gram = DMatrix::from_fn(m, m, |r, c| kern(others[r], others[c]));
    let g = DVector::from_fn(m, |r, _| kern(others[r], k));
    let svd = gram.clone().svd(true, true);
    let cutoff = 1e-12 * svd.singular_values.max().max(f64::MIN_POSITIVE);
    let coeffs = match svd.solve(&g, cutoff) {
        Ok(c) => c,
        Err(_) => return (f64::INFINITY, Vec::new()),
    };
    let resid = match model.kernel {
        // explicit feature map: measure the residual vector itself, which
        // avoids the cancellation in k(x,x) - 2c.g + c'Gc
        Kernel::Linear => {
            let mut r = model.support_vectors[k];
            for (&i, &c) in others.iter().zip(coeffs.iter()) {
                for (d, v) in r.iter_mut().enumerate() {
                    *v -= c * model.support_vectors[i][d];
                }
            }
            r.iter().map(|v| v * v).sum::<f64>().sqrt()
        }
    };
    (resid, coeffs.iter().copied().collect())
}

/// Remove support vectors whose kernel image is (within `eps`) a linear
/// combination of the remaining ones, folding their weight into the
/// survivors. Repeats until nothing is removable.
///
/// Folding can flip the sign of a coefficient; the stored label then flips
/// and `alpha` holds the magnitude, so the decision function is preserved
/// but the dual constraints are not.
pub fn prune_dependent_svs(model: &SvmModel, eps: f64) -> SvmModel {
    let mut out = model.clone();
    loop {
        let n = out.n_support();
        let hit = (0..n).rev().find_map(|k| {
            let (resid, coeffs) = reconstruct(&out, k);
            (resid <= eps).then_some((k, coeffs))
        });
        let Some((k, coeffs)) = hit else { break };

        let beta_k = out.alphas[k] * out.labels[k] as f64;
        let survivors: Vec<usize> = (0..n).filter(|&i| i != k).collect();
        let mut next_sv = Vec::with_capacity(n - 1);
        let mut next_y = Vec::with_capacity(n - 1);
        let mut next_a = Vec::with_capacity(n - 1);
        for (slot, &i) in survivors.iter().enumerate() {
            let beta = out.alphas[i] * out.labels[i] as f64 + beta_k * coeffs.get(slot).copied().unwrap_or(0.0);
            if beta != 0.0 {
                next_sv.push(out.support_vectors[i]);
                next_y.push(if beta > 0.0 { 1 } else { -1 });
                next_a.push(beta.abs());
            }
        }
        out.support_vectors = next_sv;
        out.labels = next_y;
        out.alphas = next_a;
        out.meta.pruned = true;
    }
    out
}
