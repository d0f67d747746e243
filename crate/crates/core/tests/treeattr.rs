use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strattr::treeattr::{
    bruteforce_path_attractor, greedy_path_attractor, tree_from_setcover, verify_path_attractor,
    SetCoverInstance,
};

fn random_instance(rng: &mut ChaCha8Rng) -> SetCoverInstance {
    let universe = rng.gen_range(1..=8);
    let t = rng.gen_range(1..=4);
    let mut sets: Vec<Vec<usize>> = (0..t)
        .map(|_| (0..universe).filter(|_| rng.gen_bool(0.4)).collect())
        .collect();
    for x in 0..universe {
        if !sets.iter().any(|s| s.contains(&x)) {
            let i = rng.gen_range(0..t);
            sets[i].push(x);
        }
    }
    SetCoverInstance::new(universe, sets).unwrap()
}

#[test]
fn gadget_optimum_is_t_plus_twice_cover() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..60 {
        let sc = random_instance(&mut rng);
        let (tree, t) = tree_from_setcover(&sc).unwrap();
        let q = sc.padded().min_cover_size().unwrap();
        let best = bruteforce_path_attractor(&tree, 1024).unwrap();
        assert_eq!(best.len(), t + 2 * q, "{}", sc.to_json());
        let greedy = greedy_path_attractor(&tree);
        assert!(verify_path_attractor(&tree, &greedy).unwrap().valid);
    }
}

#[test]
fn two_singletons() {
    let sc = SetCoverInstance::new(2, vec![vec![0], vec![1]]).unwrap();
    let (tree, _) = tree_from_setcover(&sc).unwrap();
    assert_eq!(bruteforce_path_attractor(&tree, 16).unwrap().len(), 6);
}
