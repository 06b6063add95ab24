mod common;

use std::collections::BTreeMap;

use common::{fv, random_vector, separable_set};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigfuse::features::FeatureVector;
use sigfuse::fusion::{train, training_samples, SvmModel, SvmParams};
use sigfuse::identification::{
    cmc, cmc_csv, enroll, evaluate, identify, rank_of, rank_scores, render_cmc_svg, LabeledQuery,
};
use sigfuse::matchers::MatcherConfig;
use sigfuse::Error;

type Templates = BTreeMap<String, Vec<FeatureVector>>;

/// `n` subjects, each a cloud of `per` templates around its own centre, plus
/// held-out queries drawn from the same clouds.
fn clouds(rng: &mut ChaCha8Rng, n: usize, per: usize, spread: f64) -> (Templates, Vec<LabeledQuery>) {
    let mut templates = BTreeMap::new();
    let mut queries = Vec::new();
    for s in 0..n {
        let id = format!("s{s:03}");
        let centre = random_vector(rng);
        let mut draw = || fv(centre.iter().map(|c| c + rng.random_range(-spread..spread)).collect());
        let ts: Vec<FeatureVector> = (0..per).map(|_| draw()).collect();
        for _ in 0..3 {
            queries.push(LabeledQuery {
                subject: id.clone(),
                features: draw(),
            });
        }
        templates.insert(id, ts);
    }
    (templates, queries)
}

fn fusion_model(templates: &Templates) -> SvmModel {
    let cfg = MatcherConfig::default();
    let samples = training_samples(templates, &cfg, 5, 1).unwrap();
    train(&samples, &SvmParams::default()).unwrap()
}

/// All-positive weights: increasing in every similarity.
fn monotone_model() -> SvmModel {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut samples = separable_set(&mut rng, 10);
    for s in samples.iter_mut() {
        s.label = if s.m.iter().sum::<f64>() > 1.5 { 1 } else { -1 };
    }
    train(&samples, &SvmParams::default()).unwrap()
}

#[test]
fn enroll_bookkeeping() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let (templates, _) = clouds(&mut rng, 10, 6, 1.0);
    let cfg = MatcherConfig::default();
    let g = enroll(&templates, &cfg).unwrap();
    assert_eq!(g.len(), 10);
    assert!(g.entries.values().all(|s| s.n_templates == 6));
    let again = enroll(&templates, &cfg).unwrap();
    assert_eq!(serde_json::to_string(&g).unwrap(), serde_json::to_string(&again).unwrap());

    let single: Templates = [("solo".to_string(), vec![templates["s000"][0].clone()])].into();
    let g = enroll(&single, &cfg).unwrap();
    assert_eq!(g.entries["solo"].mean, templates["s000"][0].values());

    let mut bad = templates.clone();
    bad.insert("empty".into(), vec![]);
    assert!(matches!(enroll(&bad, &cfg), Err(Error::NoTemplates(id)) if id == "empty"));
}

#[test]
fn query_at_subject_mean_ranks_first() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (templates, _) = clouds(&mut rng, 8, 6, 2.0);
    let g = enroll(&templates, &MatcherConfig::default()).unwrap();
    let model = monotone_model();
    let w = model.weight_vector();
    assert!(w.iter().all(|&x| x > 0.0), "{w:?}");
    for (id, stats) in &g.entries {
        let r = identify(&g, &model, &fv(stats.mean.clone())).unwrap();
        assert_eq!(r.top(), Some(id.as_str()));
        assert_eq!(r.entries.len(), g.len());
    }
}

#[test]
fn identical_stats_tie_by_subject_id() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let ts = vec![fv(random_vector(&mut rng)), fv(random_vector(&mut rng))];
    let templates: Templates = [("b".to_string(), ts.clone()), ("a".to_string(), ts)].into();
    let g = enroll(&templates, &MatcherConfig::default()).unwrap();
    let r = identify(&g, &monotone_model(), &fv(random_vector(&mut rng))).unwrap();
    assert_eq!(r.entries[0].1, r.entries[1].1);
    assert_eq!(r.top(), Some("a"));
}

#[test]
fn rank_of_examples() {
    let r = rank_scores(vec![("x".into(), 0.2), ("y".into(), 0.9), ("z".into(), -1.0)]);
    assert_eq!(rank_of(&r, "y").unwrap(), 1);
    assert_eq!(rank_of(&r, "z").unwrap(), 3);
    assert!(matches!(rank_of(&r, "w"), Err(Error::UnknownSubject(_))));
}

#[test]
fn cmc_examples() {
    let c = cmc(&[1, 1, 2], 2).unwrap();
    assert_eq!(c.probabilities, vec![2.0 / 3.0, 1.0]);
    assert_eq!(cmc(&[1; 5], 4).unwrap().probabilities, vec![1.0; 4]);
    assert!(matches!(cmc(&[], 3), Err(Error::EmptyTrials)));
}

#[test]
fn separated_clouds_identify_perfectly() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let (templates, queries) = clouds(&mut rng, 12, 6, 0.5);
    let g = enroll(&templates, &MatcherConfig::default()).unwrap();
    let model = fusion_model(&templates);
    let report = evaluate(&g, &model, &queries, &[]).unwrap();
    assert!(report.forgery.is_none());
    for s in [&report.fused, &report.euclidean, &report.mahalanobis, &report.empirical] {
        assert_eq!(s.rank1_rate, 1.0);
    }
}

#[test]
fn report_curves_are_well_formed() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let (templates, queries) = clouds(&mut rng, 15, 4, 30.0);
    let g = enroll(&templates, &MatcherConfig::default()).unwrap();
    let model = fusion_model(&templates);
    let forgeries: Vec<LabeledQuery> = queries
        .iter()
        .take(6)
        .map(|q| LabeledQuery {
            subject: "s000".into(),
            features: q.features.clone(),
        })
        .collect();
    let with = evaluate(&g, &model, &queries, &forgeries).unwrap();
    let without = evaluate(&g, &model, &queries, &[]).unwrap();
    assert_eq!(with.fused, without.fused);
    assert_eq!(with.forgery.as_ref().unwrap().n_queries, 6);
    for s in [&with.fused, &with.euclidean, &with.mahalanobis, &with.empirical] {
        assert!(s.cmc.is_monotone());
        assert_eq!(s.cmc.probabilities.len(), 15);
        assert_eq!(*s.cmc.probabilities.last().unwrap(), 1.0);
        assert_eq!(s.rank1_rate, s.cmc.probabilities[0]);
    }
    let csv = cmc_csv(&with);
    assert_eq!(csv.lines().count(), 16);
    assert!(csv.starts_with("rank,p_fused,p_ed,p_md,p_ge\n"));
    let svg = render_cmc_svg(&with);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    // identify is pure
    let q = &queries[0].features;
    assert_eq!(identify(&g, &model, q).unwrap(), identify(&g, &model, q).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cmc_is_cumulative(ranks in prop::collection::vec(1usize..=20, 1..60)) {
        let c = cmc(&ranks, 20).unwrap();
        prop_assert!(c.is_monotone());
        prop_assert_eq!(c.probabilities[19], 1.0);
        for (r, p) in c.probabilities.iter().enumerate() {
            let direct = ranks.iter().filter(|&&x| x <= r + 1).count() as f64 / ranks.len() as f64;
            prop_assert_eq!(*p, direct);
        }
    }

    #[test]
    fn ranking_is_permutation_invariant(scores in prop::collection::vec(0u8..6, 2..20), seed in any::<u64>()) {
        let items: Vec<(String, f64)> = scores.iter().enumerate().map(|(i, &s)| (format!("id{i:02}"), s as f64)).collect();
        let mut shuffled = items.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = rank_scores(items);
        let b = rank_scores(shuffled);
        prop_assert_eq!(&a, &b);
        for w in a.entries.windows(2) {
            prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
        }
    }

    /// Ranking by descending 1/(1+d) equals ranking by ascending d.
    #[test]
    fn similarity_map_preserves_order(dists in prop::collection::vec(0u16..50, 2..20)) {
        let ids: Vec<String> = (0..dists.len()).map(|i| format!("id{i:02}")).collect();
        let by_sim = rank_scores(ids.iter().cloned().zip(dists.iter().map(|&d| 1.0 / (1.0 + d as f64 / 7.0))).collect());
        let mut by_dist: Vec<(String, u16)> = ids.iter().cloned().zip(dists.iter().copied()).collect();
        by_dist.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        let lhs: Vec<&str> = by_sim.entries.iter().map(|e| e.0.as_str()).collect();
        let rhs: Vec<&str> = by_dist.iter().map(|e| e.0.as_str()).collect();
        prop_assert_eq!(lhs, rhs);
    }
}
