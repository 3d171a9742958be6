//! Γ and Λ* depend only on the dominance structure, not on the encoding.

use dominion_core::exact::gamma_rangetree;
use dominion_core::fbcsd::lambda_star;
use dominion_core::generate::{generate, ColorMode, GeneratorSpec, ProbMode};
use dominion_core::rangetree::trace::{replay, random_trace};
use dominion_core::{
    Bound, ColoredStochasticDataset, ExactNumber, NaiveStore, Range2D, RangeTree2D, StochasticPoint, WeightedStore,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gamma(ds: &ColoredStochasticDataset) -> ExactNumber {
    gamma_rangetree(ds).unwrap()
}

fn instance(seed: u64, n: usize) -> ColoredStochasticDataset {
    generate(
        &GeneratorSpec::new(n, seed)
            .colors(ColorMode::Colors(1 + seed as u32 % 3))
            .probs(ProbMode::Mixed { max_den: 64 })
            .coord_range((n as i64).max(3)),
    )
    .unwrap()
}

fn with_coords(ds: &ColoredStochasticDataset, f: impl Fn(&[ExactNumber]) -> Vec<ExactNumber>) -> ColoredStochasticDataset {
    ds.map_points(|p| StochasticPoint {
        coords: f(&p.coords),
        ..p.clone()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recoloring(seed in 0u64..10_000, n in 1usize..11, shift in 1u32..50) {
        let ds = instance(seed, n);
        let k = ds.num_colors() as u32 + shift;
        // c ↦ K − c is injective.
        let recolored = ds.map_points(|p| StochasticPoint { color: 1000 + k - p.color, ..p.clone() }).unwrap();
        prop_assert_eq!(gamma(&recolored), gamma(&ds));
    }

    #[test]
    fn monotone_axis_maps(seed in 0u64..10_000, n in 1usize..11, a in 1i64..9, b in -20i64..20) {
        let ds = instance(seed, n);
        let mapped = with_coords(&ds, |c| {
            let x = &c[0];
            let y = &c[1];
            // x ↦ a x + b is increasing; y ↦ y^3 + y is increasing.
            vec![x * &ExactNumber::from_integer(a) + ExactNumber::from_integer(b), y * y * y + y]
        });
        prop_assert_eq!(gamma(&mapped), gamma(&ds));
    }

    #[test]
    fn translations(seed in 0u64..10_000, n in 1usize..11, dx in -100i64..100, dy in -100i64..100, den in 1i64..7) {
        let ds = instance(seed, n);
        let (tx, ty) = (ExactNumber::new(dx, den), ExactNumber::new(dy, den));
        let moved = with_coords(&ds, |c| vec![&c[0] + &tx, &c[1] + &ty]);
        prop_assert_eq!(gamma(&moved), gamma(&ds));
    }

    #[test]
    fn permutations(seed in 0u64..10_000, n in 1usize..11, perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let ds = instance(seed, n);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        prop_assert_eq!(gamma(&ds.reordered(&order)), gamma(&ds));
    }

    #[test]
    fn fbcsd_rotation_and_bound(seed in 0u64..10_000, n in 1usize..8) {
        let ds = generate(
            &GeneratorSpec::new(n, seed)
                .colors(ColorMode::Colors(2 + seed as u32 % 2))
                .probs(ProbMode::Mixed { max_den: 16 })
                .general_position(true),
        )
        .unwrap();
        let star: ExactNumber = lambda_star(&ds).unwrap();
        let (c, s) = (ExactNumber::new(3, 5), ExactNumber::new(4, 5));
        let rotated = with_coords(&ds, |p| vec![&c * &p[0] - &s * &p[1], &s * &p[0] + &c * &p[1]]);
        prop_assert_eq!(lambda_star::<ExactNumber>(&rotated).unwrap(), star.clone());
        prop_assert!(star <= gamma(&ds).complement());
    }
}

/// Multiplying every range back by the inverse factor (zero through
/// `divide_zero`), in reverse order, leaves exactly the updated weights.
/// Updates are absolute writes, so they all precede the multiplies.
#[test]
fn revert_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        use rand::Rng;
        let m = rng.gen_range(1..30);
        let points: Vec<(u32, u32)> = (0..m).map(|_| (rng.gen_range(0..12), rng.gen_range(0..12))).collect();
        let mut tree = RangeTree2D::<u32, ExactNumber>::new(points.clone());
        let mut plain = <NaiveStore<u32, ExactNumber> as WeightedStore<_, _>>::build(points.clone());
        for _ in 0..40 {
            let id = rng.gen_range(0..m);
            let w = ExactNumber::new(rng.gen_range(-5..6), rng.gen_range(1..4));
            tree.update(id, w.clone()).unwrap();
            plain.update(id, w).unwrap();
        }
        let mut applied = Vec::new();
        for _ in 0..40 {
            let r = random_range(&mut rng);
            let f = [ExactNumber::zero(), ExactNumber::new(2, 3), ExactNumber::new(-5, 2)][rng.gen_range(0..3)].clone();
            tree.multiply(&r, &f);
            applied.push((r, f));
        }
        for (r, f) in applied.iter().rev() {
            if f.is_zero() {
                tree.divide_zero(r).unwrap();
            } else {
                tree.multiply(r, &f.recip());
            }
        }
        for _ in 0..20 {
            let r = random_range(&mut rng);
            assert_eq!(tree.query(&r), plain.query(&r));
        }
    }
}

fn random_range(rng: &mut ChaCha8Rng) -> Range2D<u32> {
    use rand::Rng;
    let mut side = || match rng.gen_range(0..3) {
        0 => Bound::Unbounded,
        1 => Bound::Open(rng.gen_range(0..12)),
        _ => Bound::Closed(rng.gen_range(0..12)),
    };
    loop {
        if let Ok(r) = Range2D::new(side(), side(), side(), side()) {
            return r;
        }
    }
}

#[test]
fn differential_fuzz_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let trace = random_trace(&mut rng, 30, 500);
        let report = replay(&trace).unwrap();
        assert!(report.mismatch.is_none(), "{:?}", report.mismatch);
        let reparsed = trace.to_string().parse().unwrap();
        assert_eq!(replay(&reparsed).unwrap(), report);
    }
}
