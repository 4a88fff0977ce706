mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use structura::cohom::derived_limit_cohomology;
use structura::exactla::{smith_normal_form, CyclicSum, FgAbGroup, GroupMap, IntMatrix};
use structura::io;
use structura::ktheory::{grothendieck_complete, AbelianMonoid, MonoidTable};
use structura::ringspec::{spec, FiniteRing};
use structura::sheaf::Presheaf;

fn matrix(max_dim: usize, entry: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| prop::collection::vec(prop::collection::vec(-entry..=entry, c), r))
}

/// Orders for a cyclic sum: `0` is `Z`.
fn orders() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(prop_oneof![Just(0u64), 2u64..=12], 0..=3)
}

fn cyclic_sum(orders: &[u64]) -> CyclicSum {
    CyclicSum::new(orders.iter().map(|&d| BigInt::from(d)).collect()).unwrap()
}

/// A well-defined map: the entry for source order `d` and target order `e`
/// is a multiple of `e / gcd(d, e)`, and zero from torsion into `Z`.
fn group_map(source: &[u64], target: &[u64], seeds: &[i64]) -> GroupMap {
    let rows: Vec<Vec<i64>> = target
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            source
                .iter()
                .enumerate()
                .map(|(j, &d)| {
                    let k = seeds[(i * 7 + j) % seeds.len()];
                    match (d, e) {
                        (_, 0) if d != 0 => 0,
                        (0, _) | (_, 0) => k,
                        _ => k * (e / d.gcd(&e)) as i64,
                    }
                })
                .collect()
        })
        .collect();
    let m = IntMatrix::from_rows_with_cols(&rows, source.len());
    GroupMap::new(cyclic_sum(source), cyclic_sum(target), m).unwrap()
}

fn group_of(rank: usize, torsion: &[u64]) -> FgAbGroup {
    let parts: Vec<FgAbGroup> = std::iter::once(FgAbGroup::free(rank)).chain(torsion.iter().map(|&d| FgAbGroup::cyclic(d))).collect();
    FgAbGroup::direct_sum(&parts)
}

fn prime_powers(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        let mut q = 1;
        while n % p == 0 {
            n /= p;
            q *= p;
        }
        if q > 1 {
            out.push(q);
        }
        p += 1;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_matches_elementary_operations(rows in matrix(5, 20)) {
        let a = IntMatrix::from_rows(&rows);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s.clone());
        prop_assert!(is_unimodular(&snf.u) && is_unimodular(&snf.v));
        let d: Vec<i128> = snf.diagonal().iter().filter(|x| !x.is_zero()).map(|x| x.to_i128().unwrap()).collect();
        prop_assert!(d.iter().all(|x| *x > 0));
        prop_assert!(d.windows(2).all(|w| w[1] % w[0] == 0));
        let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
        prop_assert_eq!(d, invariant_factors(&wide));
    }

    #[test]
    fn direct_sums_of_cyclics_are_canonical(rank in 0usize..4, torsion in prop::collection::vec(1u64..=30, 0..5)) {
        let g = group_of(rank, &torsion);
        let n = torsion.len();
        let diag: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| if i == j { torsion[i] as i128 } else { 0 }).collect()).collect();
        let expected: Vec<i128> = invariant_factors(&diag).into_iter().filter(|&d| d > 1).collect();
        prop_assert_eq!(canon_of(&g), (rank, expected));
        let order: u64 = torsion.iter().product();
        let actual: BigInt = g.torsion().iter().product();
        prop_assert_eq!(actual, BigInt::from(order));
    }

    #[test]
    fn group_literals_round_trip(rank in 0usize..4, torsion in prop::collection::vec(1u64..=30, 0..4)) {
        let g = group_of(rank, &torsion);
        let text = serde_json::to_string(&io::group_json(&g)).unwrap();
        let back = io::parse_group(&serde_json::from_str(&text).unwrap(), "").unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn group_maps_compose(a in orders(), b in orders(), c in orders(), d in orders(),
                          seeds in prop::collection::vec(-5i64..=5, 1..10),
                          x in prop::collection::vec(-20i64..=20, 3)) {
        let f = group_map(&a, &b, &seeds);
        let g = group_map(&b, &c, &seeds[1..].iter().chain(&seeds[..1]).copied().collect::<Vec<_>>());
        let h = group_map(&c, &d, &seeds.iter().rev().copied().collect::<Vec<_>>());
        let gf = g.compose(&f).unwrap();
        prop_assert_eq!(h.compose(&gf).unwrap(), h.compose(&g).unwrap().compose(&f).unwrap());
        prop_assert_eq!(GroupMap::identity(f.target()).compose(&f).unwrap(), f.clone());
        prop_assert_eq!(f.compose(&GroupMap::identity(f.source())).unwrap(), f.clone());
        let mut v: Vec<BigInt> = x.iter().take(a.len()).map(|&k| BigInt::from(k)).collect();
        v.resize(a.len(), BigInt::zero());
        prop_assert_eq!(gf.apply(&v), g.apply(&f.apply(&v)));
    }

    #[test]
    fn spaces_round_trip(seed in any::<u64>()) {
        let x = random_space(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        let text = serde_json::to_string(&io::space_json(&x)).unwrap();
        let y = io::parse_space(&serde_json::from_str(&text).unwrap(), "").unwrap();
        prop_assert_eq!(x.labels(), y.labels());
        prop_assert_eq!(x.opens(), y.opens());
    }

    #[test]
    fn constant_sheaf_cohomology_is_order_complex_cohomology(seed in any::<u64>()) {
        let x = random_space(&mut ChaCha8Rng::seed_from_u64(seed), 5);
        let f = Presheaf::constant_sheaf(x.clone(), &CyclicSum::free(1));
        let h: Vec<Canon> = derived_limit_cohomology(&f, 3).unwrap().iter().map(canon_of).collect();
        prop_assert_eq!(h, order_complex_cohomology(&x, 3));
    }

    #[test]
    fn completion_of_finite_monoids_counts_pair_classes(seed in any::<u64>(), size in 1usize..=4) {
        let table = random_commutative_monoid(&mut ChaCha8Rng::seed_from_u64(seed), size);
        let labels = (0..size).map(|k| k.to_string()).collect();
        let m = AbelianMonoid::Table(MonoidTable::new(labels, table.clone()).unwrap());
        let c = grothendieck_complete(&m, 64).unwrap();
        prop_assert_eq!(c.group.rank(), 0);
        let order: BigInt = c.group.torsion().iter().product();
        prop_assert_eq!(order.to_usize().unwrap(), naive_completion_order(&table));
    }
}

#[test]
fn spec_of_integers_mod_n_splits_by_chinese_remaindering() {
    for n in 2..=64 {
        let s = spec(&FiniteRing::zmod(n).unwrap(), 64).unwrap();
        let x = s.ringed.space();
        assert!(x.is_discrete(), "Z/{n}");
        let mut sizes: Vec<usize> = (0..x.npoints()).map(|k| s.ringed.stalk(k).size()).collect();
        sizes.sort_unstable();
        let mut expected = prime_powers(n);
        expected.sort_unstable();
        assert_eq!(sizes, expected, "Z/{n}");
        assert!((0..x.npoints()).all(|k| s.ringed.stalk(k).is_local()));
        let names: BTreeMap<String, usize> = labels_map(x);
        assert_eq!(names.len(), expected.len());
        for (k, (p, l)) in s.primes.iter().zip(&s.localizations).enumerate() {
            let stalk = s.ringed.stalk(k).size();
            let prime = (2..=stalk).find(|q| stalk % q == 0).unwrap();
            assert_eq!(p.len(), n / prime, "the ideal ({prime}) of Z/{n}");
            assert_eq!(l.source().size(), n);
            assert_eq!(l.target().size(), stalk);
            let mut image: Vec<usize> = l.table().to_vec();
            image.sort_unstable();
            image.dedup();
            assert_eq!(image.len(), stalk, "R -> R_P is onto for Z/{n}");
        }
    }
}
