use num_traits::ToPrimitive;
use subspace_bounds_core::optim::{
    certify, export_lp_text, export_sdpa, ipm_solve, ipm_solve_sdpa, parse_lp_text, parse_sdpa, simplex, simplex_solve,
    IpmOptions, IpmStatus, LinearProgram, PsdBlock, Sense, SemidefiniteProgram,
};
use subspace_bounds_core::projective_lp::{combined_cap, ev_model, pair_cuts};
use subspace_bounds_core::projective_sdp::{sdp_model, SdpOptions};
use subspace_bounds_core::{Exact, FieldOrder, Metric, ProjectiveParams};

fn params(n: usize, d: usize, metric: Metric) -> ProjectiveParams {
    ProjectiveParams::new(n, d, FieldOrder::BINARY, metric).unwrap()
}

fn ev_with_cuts(n: usize, d: usize) -> LinearProgram {
    let p = params(n, d, Metric::Subspace);
    let cap = combined_cap(p.q);
    let mut lp = ev_model(&p, &cap);
    let c = d.div_ceil(2);
    lp.rows.extend(pair_cuts(n, d, p.q, &cap(n, c, c)));
    lp
}

/// The same LP with every `<=` row as a 1x1 block `rhs - a·x ⪰ 0`.
fn as_diagonal_sdp(lp: &LinearProgram) -> SemidefiniteProgram {
    let mut sdp = SemidefiniteProgram {
        var_names: lp.var_names.clone(),
        objective: lp.objective.clone(),
        rows: Vec::new(),
        blocks: Vec::new(),
    };
    for row in &lp.rows {
        assert_eq!(row.sense, Sense::Le);
        let mut block = PsdBlock::new(1);
        block.push(None, 0, 0, row.rhs.clone());
        for (j, c) in &row.coeffs {
            block.push(Some(*j), 0, 0, -c);
        }
        sdp.blocks.push(block);
    }
    sdp
}

#[test]
fn sdpa_round_trip_is_stable() {
    for (n, d, metric) in [(8, 3, Metric::Subspace), (7, 2, Metric::Injection), (10, 5, Metric::Subspace)] {
        let p = params(n, d, metric);
        let cap = combined_cap(p.q);
        let sdpa = sdp_model(&p, SdpOptions::default(), &cap).to_sdpa();
        let text = export_sdpa(&sdpa);
        let parsed = parse_sdpa(&text).unwrap();
        assert_eq!(export_sdpa(&parsed), text);
        let mut normalized = sdpa.clone();
        normalized.normalize();
        assert_eq!(parsed, normalized);
    }
}

#[test]
fn exported_sdp_solves_to_the_same_value() {
    let p = params(7, 3, Metric::Subspace);
    let cap = combined_cap(p.q);
    let model = sdp_model(&p, SdpOptions::default(), &cap);
    let opts = IpmOptions::default();
    let direct = ipm_solve(&model, &opts).unwrap();
    let via_file = ipm_solve_sdpa(&parse_sdpa(&export_sdpa(&model.to_sdpa())).unwrap(), &opts).unwrap();
    assert_eq!(direct.status, IpmStatus::Optimal);
    assert_eq!(via_file.status, IpmStatus::Optimal);
    assert!((direct.primal - via_file.primal).abs() < 1e-6 * direct.primal.abs());
}

#[test]
fn lp_text_round_trip_preserves_the_optimum() {
    for (n, d) in [(5, 3), (7, 5), (8, 3), (12, 7)] {
        let lp = ev_with_cuts(n, d);
        let text = export_lp_text(&lp);
        let parsed = parse_lp_text(&text).unwrap();
        assert_eq!(export_lp_text(&parsed), text);
        assert_eq!(simplex_solve(&parsed).unwrap().value, simplex_solve(&lp).unwrap().value);
    }
}

#[test]
fn simplex_solutions_carry_exact_certificates() {
    for n in 3..=12 {
        for d in 2..=n {
            let lp = ev_with_cuts(n, d);
            let sol = simplex_solve(&lp).unwrap();
            assert!(certify(&lp, &sol), "n={n} d={d}");
        }
    }
}

#[test]
fn float_simplex_tracks_exact_simplex() {
    // from n = 10 on the packing rows span too many magnitudes for an
    // absolute zero threshold
    for n in 3..=9 {
        for d in 2..=n {
            let lp = ev_with_cuts(n, d);
            let exact = simplex_solve(&lp).unwrap().value.to_f64().unwrap();
            let float = simplex::<f64>(&lp).unwrap().value;
            assert!((exact - float).abs() <= 1e-9 * exact.max(1.0), "n={n} d={d}: {exact} vs {float}");
        }
    }
}

#[test]
fn ipm_agrees_with_simplex_on_diagonal_programs() {
    for (n, d) in [(4, 3), (5, 3), (6, 3), (7, 5), (8, 4)] {
        let lp = ev_with_cuts(n, d);
        let exact: Exact = simplex_solve(&lp).unwrap().value;
        let exact = exact.to_f64().unwrap();
        let r = ipm_solve(&as_diagonal_sdp(&lp), &IpmOptions::default()).unwrap();
        assert_eq!(r.status, IpmStatus::Optimal, "n={n} d={d}");
        assert!((r.primal - exact).abs() <= 1e-6 * exact, "n={n} d={d}: {} vs {exact}", r.primal);
        assert!(r.gap.abs() <= 1e-6 * exact);
    }
}
