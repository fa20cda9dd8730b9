//! Ordering relations between the bounds, over randomized parameters.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use subspace_bounds_core::grassmann::{
    anticode_bound, combined_bound, delsarte_lp_bound, johnson2_chain_bound, singleton_bound, sphere_packing_bound,
};
use subspace_bounds_core::oracle::max_code_exact;
use subspace_bounds_core::projective_lp::{combined_cap, ev_bound, EvMode};
use subspace_bounds_core::projective_sdp::{sdp_model, solve_sdp, SdpOptions};
use subspace_bounds_core::{Exact, FieldOrder, GrassmannParams, Metric, ProjectiveParams};

fn grassmann_params() -> impl Strategy<Value = GrassmannParams> {
    (prop_oneof![Just(2u32), Just(3u32)], 1usize..=12)
        .prop_flat_map(|(q, n)| (Just(q), Just(n), 0..=n, 1..=n))
        .prop_map(|(q, n, k, delta)| GrassmannParams::new(n, k, delta, FieldOrder::new(q).unwrap()).unwrap())
}

fn int(v: BigInt) -> Exact {
    Exact::from_integer(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn anticode_is_below_sphere_packing_and_singleton(p in grassmann_params()) {
        let anticode = anticode_bound(&p);
        prop_assert!(anticode <= sphere_packing_bound(&p));
        prop_assert!(anticode <= singleton_bound(&p));
    }

    #[test]
    fn anticode_meets_singleton_only_at_distance_one(p in grassmann_params()) {
        // δ > min(k, n-k) covers n = k, where both bounds collapse to 1
        let trivial = p.delta == 1 || p.delta > p.normalized_k();
        prop_assert_eq!(anticode_bound(&p) == singleton_bound(&p), trivial);
    }

    #[test]
    fn combined_is_below_anticode_and_chain(p in grassmann_params()) {
        let combined = int(combined_bound(&p));
        prop_assert!(combined <= anticode_bound(&p).floor());
        prop_assert!(combined <= johnson2_chain_bound(&p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The Delsarte value obeys both Johnson-type recursions, dropping to
    /// `n-1` through a point or through a hyperplane.
    #[test]
    fn delsarte_obeys_johnson_recursions(n in 2usize..=10, k in 1usize..=9, delta in 1usize..=5) {
        prop_assume!(k < n);
        let q = FieldOrder::BINARY;
        let lp = |n: usize, k: usize| delsarte_lp_bound(&GrassmannParams::new(n, k, delta, q).unwrap()).unwrap().to_f64().unwrap();
        let ratio = |a: usize, b: usize| Exact::new(q.pow(a as u32) - 1, q.pow(b as u32) - 1).to_f64().unwrap();
        let here = lp(n, k);
        let via_point = ratio(n, k) * lp(n - 1, k - 1);
        let via_hyperplane = ratio(n, n - k) * lp(n - 1, k);
        prop_assert!(here <= via_point + 1e-6, "{here} > {via_point}");
        prop_assert!(here <= via_hyperplane + 1e-6, "{here} > {via_hyperplane}");
    }
}

#[test]
fn distance_one_bounds_coincide() {
    // with δ = 1 every k-space is allowed: all three bounds are [n k]_q
    for q in [2u32, 3] {
        let q = FieldOrder::new(q).unwrap();
        for n in 1..=12 {
            for k in 0..=n {
                let p = GrassmannParams::new(n, k, 1, q).unwrap();
                let all = sphere_packing_bound(&p);
                assert_eq!(anticode_bound(&p), all);
                assert_eq!(singleton_bound(&p), all);
            }
        }
    }
}

#[test]
fn distance_beyond_reach_gives_one() {
    for q in [2u32, 3] {
        let q = FieldOrder::new(q).unwrap();
        for n in 1..=12 {
            for k in 0..=n {
                let delta = k.min(n - k) + 1;
                let p = GrassmannParams::new(n, k, delta, q).unwrap();
                let one = Exact::from_integer(1.into());
                assert_eq!(anticode_bound(&p), one);
                assert_eq!(singleton_bound(&p), one);
                assert_eq!(sphere_packing_bound(&p), one);
            }
        }
    }
}

#[test]
fn spreads_meet_the_anticode_bound() {
    // k | n: spreads reach (q^n-1)/(q^k-1), so anticode and combined agree
    for q in [2u32, 3] {
        let q = FieldOrder::new(q).unwrap();
        for n in 2..=12 {
            for k in (1..=n / 2).filter(|k| n % k == 0) {
                let p = GrassmannParams::new(n, k, k, q).unwrap();
                let spread = Exact::new(q.pow(n as u32) - 1, q.pow(k as u32) - 1);
                assert_eq!(anticode_bound(&p), spread);
                assert_eq!(int(combined_bound(&p)), spread);
            }
        }
    }
}

fn sdp_floor(n: usize, d: usize, metric: Metric) -> i64 {
    let p = ProjectiveParams::new(n, d, FieldOrder::BINARY, metric).unwrap();
    let cap = combined_cap(p.q);
    let model = sdp_model(&p, SdpOptions::default(), &cap);
    solve_sdp(&model, 1e-8).unwrap().floored.expect("converged")
}

#[test]
fn sdp_decreases_in_distance() {
    for metric in [Metric::Subspace, Metric::Injection] {
        for n in 3..=7 {
            let values: Vec<i64> = (1..=n).map(|d| sdp_floor(n, d, metric)).collect();
            for w in values.windows(2) {
                assert!(w[1] <= w[0], "{metric} n={n}: {values:?}");
            }
        }
    }
}

#[test]
fn true_optimum_is_below_every_bound() {
    for n in 1..=4 {
        for d in 1..=n {
            for metric in [Metric::Subspace, Metric::Injection] {
                let (best, code) = max_code_exact(n, d, metric).unwrap();
                assert_eq!(code.len(), best);
                let best = best as i64;
                let p = ProjectiveParams::new(n, d, FieldOrder::BINARY, metric).unwrap();
                let ev = ev_bound(&p, false, EvMode::Real).unwrap().floored.to_i64().unwrap();
                let ev_int = ev_bound(&p, false, EvMode::Integer).unwrap().floored.to_i64().unwrap();
                assert!(best <= ev_int && ev_int <= ev, "{metric} n={n} d={d}: {best} {ev_int} {ev}");
                if metric == Metric::Subspace {
                    let cut = ev_bound(&p, true, EvMode::Real).unwrap().floored.to_i64().unwrap();
                    assert!(best <= cut, "{metric} n={n} d={d}: {best} > cut {cut}");
                }
                let sdp = sdp_floor(n, d, metric);
                assert!(best <= sdp, "{metric} n={n} d={d}: {best} > sdp {sdp}");
            }
        }
    }
}
