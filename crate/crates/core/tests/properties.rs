mod common;

use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    q, random_grid_system, random_similitude, random_vector, transcribed_f, transcribed_maps, Aff,
    Q,
};
use selfsim::chains::{chain_decomposition, chain_level};
use selfsim::embedding::{certify_embedding, in_cover, log_commensurability, SearchBudget};
use selfsim::symmetry::attractor_hull;
use selfsim::{fixtures, io, Similitude, Word};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn fixtures_match_the_transcribed_maps() {
    let e = fixtures::example25();
    let maps = transcribed_maps();
    assert_eq!(e.len(), 9);
    for (i, m) in e.maps().iter().enumerate() {
        assert_eq!(Aff::of(m), maps[i], "map {}", i + 1);
    }
    assert_eq!(Aff::of(&fixtures::example25_f()), transcribed_f());
    let b = e.invariant_box();
    assert_eq!(b.lower().0, vec![q(-3, 1), q(-3, 1)]);
    assert_eq!(b.upper().0, vec![q(3, 1), q(3, 1)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(seed: u64, d in 1usize..=3) {
        let mut r = rng(seed);
        let (f, g, h) = (
            random_similitude(&mut r, d, false),
            random_similitude(&mut r, d, false),
            random_similitude(&mut r, d, false),
        );
        let left = f.compose(&g.compose(&h).unwrap()).unwrap();
        let right = f.compose(&g).unwrap().compose(&h).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(Aff::of(&left), Aff::of(&f).after(&Aff::of(&g)).after(&Aff::of(&h)));
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
    }

    #[test]
    fn powers_agree_with_repeated_composition(seed: u64, d in 1usize..=3, k in 0u64..6) {
        let f = random_similitude(&mut rng(seed), d, false);
        let slow = (0..k).fold(Similitude::identity(d), |acc, _| acc.compose(&f).unwrap());
        prop_assert_eq!(f.power(k), slow);
    }

    #[test]
    fn fixed_points_are_fixed(seed: u64, d in 1usize..=3) {
        let mut r = rng(seed);
        let f = random_similitude(&mut r, d, true);
        let p = f.fixed_point().unwrap();
        prop_assert_eq!(f.apply(&p).unwrap(), p.clone());
        // distances to it shrink by exactly the ratio
        let x = random_vector(&mut r, d);
        let fx = f.apply(&x).unwrap();
        prop_assert_eq!(fx.dist2(&p), x.dist2(&p) * f.ratio() * f.ratio());
    }

    #[test]
    fn ifs_files_round_trip(seed: u64, d in 1usize..=2) {
        let (ifs, _) = random_grid_system(&mut rng(seed), d);
        let back = io::parse_ifs(&io::ifs_to_json(&ifs)).unwrap();
        prop_assert_eq!(back.maps(), ifs.maps());
        prop_assert_eq!(back.invariant_box(), ifs.invariant_box());
    }

    /// Whatever the search certifies must send sampled attractor points into
    /// every cover of the attractor.
    #[test]
    fn certificates_survive_sampling(seed: u64, d in 1usize..=2, shift in 0i64..3) {
        let mut r = rng(seed);
        let (ifs, _) = random_grid_system(&mut r, d);
        let m = ifs.len() as u32;
        let u = Word::new((0..r.gen_range(1..=2)).map(|_| r.gen_range(1..=m)).collect());
        let cyl = ifs.cylinder(&u).unwrap();
        // shift 0 keeps a genuine cylinder; other shifts usually break it
        let mut t = cyl.trans().clone();
        t.0[0] += q(shift, 7);
        let f = Similitude::new(cyl.ratio().clone(), cyl.orth().clone(), t).unwrap();
        let cert = certify_embedding(&f, &ifs, &[], SearchBudget::default());
        if shift == 0 {
            prop_assert!(cert.is_some(), "cylinder {} not certified", u);
        }
        if let Some(cert) = cert {
            prop_assert!(cert.verify(&ifs).is_ok());
            for (_, x) in ifs.attractor_points(2).unwrap() {
                let y = f.apply(&x).unwrap();
                prop_assert!(in_cover(&ifs, &y, 4), "f({:?}) escapes", x);
            }
        }
    }

    #[test]
    fn commensurability_matches_brute_force(a in 1i64..30, b in 2i64..30, c in 1i64..30, e in 2i64..30) {
        prop_assume!(a < b && c < e);
        let (r, rf) = (q(a, b), q(c, e));
        let got = log_commensurability(&r, &rf).unwrap();
        let mut rp = vec![Q::one()];
        for _ in 0..12 {
            let next = rp.last().unwrap() * &r;
            rp.push(next);
        }
        let brute = (1..=12u64).find_map(|k| {
            let lhs = num_traits::pow(rf.clone(), k as usize);
            rp.iter().position(|x| *x == lhs).map(|p| (k, p as u64))
        });
        match got {
            Some(rel) if rel.k <= 12 && rel.p <= 12 => prop_assert_eq!(brute, Some((rel.k, rel.p))),
            Some(rel) => {
                prop_assert_eq!(brute, None);
                prop_assert_eq!(num_traits::pow(rf, rel.k as usize), num_traits::pow(r, rel.p as usize));
            }
            None => prop_assert_eq!(brute, None),
        }
    }

    /// Chains partition the words, cross-chain pairs carry separating bounds,
    /// and deeper refinement only splits chains.
    #[test]
    fn chains_refine_with_depth(seed: u64, d in 1usize..=2) {
        let (ifs, _) = random_grid_system(&mut rng(seed), d);
        let n = chain_level(&ifs, 2).unwrap() + 1;
        let mut prev: Option<Vec<Vec<Word>>> = None;
        for depth in 0..=3 {
            let cs = chain_decomposition(&ifs, n, depth).unwrap();
            prop_assert!(cs.verify(ifs.len()));
            if let Some(coarse) = &prev {
                for chain in &cs.chains {
                    prop_assert!(coarse.iter().any(|c| chain.iter().all(|w| c.contains(w))));
                }
            }
            prev = Some(cs.chains);
        }
    }

    /// The hull is attained: depth-D points stay inside it and come within
    /// `r^(D+1) (B - A)` of both ends.
    #[test]
    fn hull_endpoints_are_approached(seed: u64, depth in 0usize..4) {
        let (ifs, _) = random_grid_system(&mut rng(seed), 1);
        let (a, b) = attractor_hull(&ifs).unwrap();
        let xs: Vec<Q> = ifs.attractor_points(depth).unwrap().into_iter().map(|(_, p)| p.0[0].clone()).collect();
        let slack = num_traits::pow(ifs.common_ratio().unwrap().clone(), depth + 1) * (&b - &a);
        prop_assert!(xs.iter().all(|x| &a <= x && x <= &b));
        prop_assert!(xs.iter().min().unwrap() - &a <= slack);
        prop_assert!(&b - xs.iter().max().unwrap() <= slack);
    }
}
