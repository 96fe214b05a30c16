mod common;

use forge_core::embedding::{base_success_prob, cosine_similarity, generate_workforce};
use forge_core::env::{ContextVector, N_TAGS};
use forge_core::experiment::build_world;
use forge_core::hybrid::{
    build_physics_prior, pretrain_prior, prior_gram, FusionState, GramState, HybridAllocator,
};
use forge_core::linalg::spd_inverse;
use forge_core::neural::{
    generate_offline_dataset, online_replay_update, train_offline, OfflineDataset, OfflineSample,
    ReplayBuffer, TrainConfig, TwoTowerNet,
};
use forge_core::rng::{stream, Stream};
use forge_core::{Marketplace, SimulationConfig};

fn compact() -> SimulationConfig {
    SimulationConfig {
        query_dim: 32,
        offline_samples: 2000,
        ..SimulationConfig::default()
    }
}

#[test]
fn tag_frequencies_are_balanced() {
    let config = SimulationConfig::default();
    let space = build_world(&config).unwrap();
    let mut rng = stream(0, Stream::Tasks);
    let mut counts = [0usize; N_TAGS];
    for _ in 0..10_000 {
        counts[space.sample_task(&mut rng).tag] += 1;
    }
    for c in counts {
        let f = c as f64 / 10_000.0;
        assert!((0.18..=0.22).contains(&f), "frequency {f}");
    }
}

#[test]
fn best_contractor_usually_shares_the_task_tag() {
    let config = SimulationConfig::default();
    let space = build_world(&config).unwrap();
    let pool = generate_workforce(&config, &space, &mut stream(0, Stream::Workforce)).unwrap();
    let market = Marketplace::new(&config, pool).unwrap();
    let mut rng = stream(1, Stream::Tasks);
    let mut same = 0;
    for _ in 0..1000 {
        let task = space.sample_task(&mut rng);
        let best = (0..market.len())
            .max_by(|&a, &b| market.p_base(&task, a).total_cmp(&market.p_base(&task, b)))
            .unwrap();
        same += usize::from(market.contractors()[best].tag == task.tag);
    }
    assert!(same as f64 / 1000.0 > 0.95, "{same}/1000");
}

#[test]
fn workforce_regeneration_is_bit_identical() {
    let config = SimulationConfig::default();
    let space = build_world(&config).unwrap();
    let a = generate_workforce(&config, &space, &mut stream(4, Stream::Workforce)).unwrap();
    let b = generate_workforce(&config, &space, &mut stream(4, Stream::Workforce)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn id_reinit_respects_kaiming_bound() {
    let bound = (6.0f64 / 109.0).sqrt();
    assert!((TwoTowerNet::kaiming_bound() - bound).abs() < 1e-15);
    let mut net = TwoTowerNet::zeros(8, 64);
    let mut rng = stream(0, Stream::Init);
    let mut draws = 0;
    while draws < 10_000 {
        net.reinit_id_columns(&mut rng);
        for f in 0..64 {
            for input in 5..105 {
                let w = net.params()[net.contractor_weight_index(f, input)];
                assert!(w.abs() <= bound && w != 0.0);
                draws += 1;
            }
        }
    }
}

#[test]
fn offline_training_reduces_loss() {
    let config = compact();
    let space = build_world(&config).unwrap();
    let (_, report) = pretrain_prior(&config, &space).unwrap();
    let l = &report.epoch_losses;
    assert_eq!(l.len(), config.offline_train.epochs);
    for w in l[..5].windows(2) {
        assert!(w[1] < w[0], "{l:?}");
    }
    assert!(l.last().unwrap() < &l[0]);
}

#[test]
fn offline_training_fits_a_learnable_set() {
    // Labels are an exact sigmoid of the similarity between the query and
    // the contractor's tag centre, both of which the network observes.
    let mut config = compact();
    config.offline_train = TrainConfig {
        learning_rate: 0.5,
        epochs: 40,
        ..TrainConfig::offline_default()
    };
    let space = build_world(&config).unwrap();
    let mut rng = stream(0, Stream::Offline);
    let samples: Vec<OfflineSample> = (0..2000)
        .map(|i| {
            let task = space.sample_task(&mut rng);
            let tag = i % N_TAGS;
            let sim = cosine_similarity(&task.query, space.center(tag)).unwrap();
            let mut context = ContextVector::build(&task.query, tag, 0, 0.0, 0.5, 0.5, 1.0);
            context.clear_ids();
            OfflineSample {
                context,
                label: base_success_prob(sim, 6.0, 2.5),
            }
        })
        .collect();
    let dataset = OfflineDataset::new(samples, 0);
    let mut net = TwoTowerNet::random(
        config.query_dim,
        config.feature_dim,
        &mut stream(0, Stream::Init),
    );
    train_offline(&mut net, &dataset, &config.offline_train, &mut rng).unwrap();
    let mae: f64 = dataset
        .samples()
        .iter()
        .map(|s| (net.forward(s.context.as_slice()).unwrap().prob - s.label).abs())
        .sum::<f64>()
        / dataset.len() as f64;
    assert!(mae < 0.1, "mae {mae}");
}

#[test]
fn zero_epochs_leave_weights_unchanged() {
    let config = compact();
    let space = build_world(&config).unwrap();
    let dataset =
        generate_offline_dataset(&config, &space, &mut stream(0, Stream::Offline)).unwrap();
    let mut net = TwoTowerNet::random(
        config.query_dim,
        config.feature_dim,
        &mut stream(0, Stream::Init),
    );
    let before = net.clone();
    let cfg = TrainConfig {
        epochs: 0,
        ..TrainConfig::offline_default()
    };
    train_offline(&mut net, &dataset, &cfg, &mut stream(0, Stream::Offline)).unwrap();
    assert_eq!(net, before);
}

#[test]
fn pretraining_is_deterministic() {
    let config = compact();
    let space = build_world(&config).unwrap();
    let (a, _) = pretrain_prior(&config, &space).unwrap();
    let (b, _) = pretrain_prior(&config, &space).unwrap();
    assert_eq!(a, b);
}

#[test]
fn replay_of_positive_examples_raises_prediction() {
    let config = compact();
    let mut net = TwoTowerNet::random(
        config.query_dim,
        config.feature_dim,
        &mut stream(2, Stream::Init),
    );
    let mut r = common::rng(2);
    let x = ContextVector::from_values(
        config.query_dim,
        common::uniform_vec(&mut r, ContextVector::len_for(config.query_dim), -1.0, 1.0),
    )
    .unwrap();
    let mut buffer = ReplayBuffer::new(100);
    for _ in 0..10 {
        buffer.push(x.clone(), 1.0);
    }
    let before = net.forward(x.as_slice()).unwrap().prob;
    online_replay_update(
        &mut net,
        &buffer,
        &TrainConfig::online_default(),
        &mut stream(0, Stream::Policy),
    )
    .unwrap();
    assert!(net.forward(x.as_slice()).unwrap().prob > before);
}

#[test]
fn prior_scales_every_initial_bonus_by_sqrt_alpha() {
    let config = compact();
    let space = build_world(&config).unwrap();
    let dataset =
        generate_offline_dataset(&config, &space, &mut stream(0, Stream::Offline)).unwrap();
    let net = TwoTowerNet::random(
        config.query_dim,
        config.feature_dim,
        &mut stream(0, Stream::Init),
    );
    let prior = build_physics_prior(&net, &dataset, 1.0, 10.0).unwrap();
    let unscaled = spd_inverse(&prior_gram(&net, &dataset, 1.0).unwrap()).unwrap();
    let (scaled, plain) = (
        GramState::from_inverse(prior.a0_inv.clone(), 100).unwrap(),
        GramState::from_inverse(unscaled, 100).unwrap(),
    );
    let mut r = common::rng(3);
    for _ in 0..200 {
        let phi = common::uniform_vec(&mut r, 64, -1.0, 1.0);
        let ratio = scaled.ucb_bonus(&phi, 0.06) / plain.ucb_bonus(&phi, 0.06);
        assert!((ratio - 10f64.sqrt()).abs() < 1e-9, "{ratio}");
    }
}

#[test]
fn prior_allocator_starts_from_stored_inverse() {
    let config = compact();
    let space = build_world(&config).unwrap();
    let (prior, _) = pretrain_prior(&config, &space).unwrap();
    let hybrid = HybridAllocator::with_prior(
        &config,
        &prior,
        &mut stream(0, Stream::Init),
        stream(0, Stream::Policy),
    )
    .unwrap();
    assert_eq!(hybrid.gram().a_inv(), &prior.a0_inv);
    let mut other = config.clone();
    other.sigmoid_sharpness = 7.0;
    assert!(HybridAllocator::with_prior(
        &other,
        &prior,
        &mut stream(0, Stream::Init),
        stream(0, Stream::Policy)
    )
    .is_err());
}

#[test]
fn width_shrinks_along_updated_direction() {
    let mut gram = GramState::new(64, 1.0, 100);
    let mut r = common::rng(4);
    for _ in 0..150 {
        let phi = common::uniform_vec(&mut r, 64, -1.0, 1.0);
        let before = gram.width(&phi);
        gram.posterior_update(&phi);
        assert!(gram.width(&phi) < before);
        assert!(gram.updates_since_reinvert() < 100);
    }
    // A − λI = Σ φφᵀ is positive semi-definite.
    for _ in 0..50 {
        let x = common::uniform_vec(&mut r, 64, -1.0, 1.0);
        let q: f64 = gram.a().quad_form(&x) - x.iter().map(|v| v * v).sum::<f64>();
        assert!(q >= -1e-9);
    }
}

#[test]
fn eta_decay_matches_closed_form() {
    let mut f = FusionState::new(0.5, 0.9995, 0.06);
    for t in 1..=2000 {
        f.decay();
        assert!((f.eta - 0.5 * 0.9995f64.powi(t)).abs() < 1e-12);
    }
}
