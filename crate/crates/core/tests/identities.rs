//! Exact identities, checked in rational arithmetic with no tolerance, and
//! the counting formulas checked against brute-force enumeration over F_2.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use subspace_bounds_core::oracle::{distance, enumerate_projective, intersection_dim};
use subspace_bounds_core::qcombinat::{
    ball_size_injection, ball_size_subspace, ball_slice_injection, ball_slice_subspace, hahn_weight, pair_count,
    projective_size, qbinom,
};
use subspace_bounds_core::qhahn::{hahn_family, nodes_and_weights};
use subspace_bounds_core::{Exact, FieldOrder, Metric};

const Q2: FieldOrder = FieldOrder::BINARY;

fn int(v: BigInt) -> Exact {
    Exact::from_integer(v)
}

#[test]
fn hahn_family_is_orthogonal_and_normalized() {
    for n in 0..=16 {
        for t in 0..=n {
            for s in 0..=t {
                let family = hahn_family(n, s, t, Q2).unwrap();
                let nw = nodes_and_weights(n, s, t, Q2);
                assert_eq!(family.len(), s.min(n - t) + 1);
                for (l, p) in family.iter().enumerate() {
                    assert_eq!(p.eval(0), Exact::one(), "Q_{l}(0) for n={n} s={s} t={t}");
                    for m in l + 1..family.len() {
                        let sum = (0..nw.len()).fold(Exact::zero(), |acc, i| {
                            let w = int(hahn_weight(n, s, t, i, Q2).unwrap());
                            acc + w * p.eval(i) * family[m].eval(i)
                        });
                        assert!(sum.is_zero(), "<Q_{l}, Q_{m}> = {sum} for n={n} s={s} t={t}");
                    }
                }
            }
        }
    }
}

#[test]
fn first_hahn_polynomial_closed_form() {
    for q in [2u32, 3] {
        let q = FieldOrder::new(q).unwrap();
        for n in 2..=16 {
            for k in 1..=n / 2 {
                let q1 = &hahn_family(n, k, k, q).unwrap()[1];
                let num = int(q.pow(n as u32) - 1);
                let den = int(q.pow(k as u32) - 1) * int(q.pow((n - k) as u32) - 1);
                for u in 0..=k {
                    let expected = Exact::one() - &num * (Exact::one() - q.pow_exact(-(u as i64))) / &den;
                    assert_eq!(q1.eval(u), expected, "n={n} k={k} u={u}");
                }
            }
        }
    }
}

#[test]
fn weights_sum_to_qbinom() {
    for q in [2u32, 3, 4] {
        let q = FieldOrder::new(q).unwrap();
        for n in 0..=16 {
            for t in 0..=n {
                for s in 0..=t {
                    let total: BigInt = (0..=s.min(n - t)).map(|i| hahn_weight(n, s, t, i, q).unwrap()).sum();
                    assert_eq!(total, qbinom(n as i64, t as i64, q), "n={n} s={s} t={t}");
                }
            }
        }
    }
}

#[test]
fn pair_counts_match_enumeration() {
    for n in 0..=5 {
        let space = enumerate_projective(n).unwrap();
        assert_eq!(BigInt::from(space.len()), projective_size(n, Q2));
        let mut counts: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
        for u in &space {
            for v in &space {
                *counts.entry((u.dim(), v.dim(), intersection_dim(u, v))).or_default() += 1;
            }
        }
        for s in 0..=n {
            for t in 0..=n {
                for i in 0..=s.min(t) {
                    let seen = counts.get(&(s, t, i)).copied().unwrap_or(0);
                    assert_eq!(pair_count(n, s, t, i, Q2), BigInt::from(seen), "n={n} s={s} t={t} i={i}");
                }
            }
        }
    }
}

#[test]
fn balls_match_enumeration() {
    for n in 0..=5 {
        let space = enumerate_projective(n).unwrap();
        for metric in [Metric::Subspace, Metric::Injection] {
            // one center per dimension suffices by transitivity
            for center in (0..=n).map(|i| space.iter().find(|v| v.dim() == i).unwrap()) {
                let i = center.dim();
                for e in 0..=n {
                    let mut slices = vec![0u64; n + 1];
                    for v in space.iter().filter(|v| distance(center, v, metric) <= e) {
                        slices[v.dim()] += 1;
                    }
                    let (size, slice): (BigInt, Vec<BigInt>) = match metric {
                        Metric::Subspace => (
                            ball_size_subspace(n, i, e, Q2),
                            (0..=n).map(|k| ball_slice_subspace(n, i, k, e, Q2)).collect(),
                        ),
                        Metric::Injection => (
                            ball_size_injection(n, i, e, Q2),
                            (0..=n).map(|k| ball_slice_injection(n, i, k, e, Q2)).collect(),
                        ),
                    };
                    let expected: Vec<BigInt> = slices.iter().map(|&c| BigInt::from(c)).collect();
                    assert_eq!(slice, expected, "{metric} n={n} i={i} e={e}");
                    assert_eq!(size, expected.iter().sum::<BigInt>(), "{metric} n={n} i={i} e={e}");
                }
            }
        }
    }
}

#[test]
fn slices_sum_to_ball_sizes_beyond_enumeration() {
    for q in [2u32, 3] {
        let q = FieldOrder::new(q).unwrap();
        for n in 0..=10 {
            for i in 0..=n {
                for e in 0..=3 {
                    let sub: BigInt = (0..=n).map(|k| ball_slice_subspace(n, i, k, e, q)).sum();
                    let inj: BigInt = (0..=n).map(|k| ball_slice_injection(n, i, k, e, q)).sum();
                    assert_eq!(sub, ball_size_subspace(n, i, e, q));
                    assert_eq!(inj, ball_size_injection(n, i, e, q));
                }
            }
        }
    }
}
