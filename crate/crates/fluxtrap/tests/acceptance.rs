//! End-to-end acceptance checks, one per shipped preset. Each test drives
//! the full pipeline (preset JSON -> resolved config -> scenario runner ->
//! report) and judges the headline numbers at their stated tolerances,
//! printing a single PASS/FAIL line; run with `--nocapture` to see the
//! lines for passing criteria too.

use std::time::Instant;

use fluxtrap::scenario::{self, Report, ScenarioConfig};
use fluxtrap::zeromodes;

fn preset_report(name: &str) -> (Report, f64) {
    let p = scenario::find_preset(name).expect("preset registered");
    let cfg = ScenarioConfig::from_json(p.json).expect("preset parses");
    let t = Instant::now();
    let report = scenario::run_scenario(&cfg).expect("preset runs");
    (report, t.elapsed().as_secs_f64())
}

fn verdict(id: u32, what: &str, pass: bool, details: String) {
    let line = format!(
        "criterion {id:02} {what}: {} ({details})",
        if pass { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(pass, "{line}");
}

#[test]
fn criterion_01_elliptic_endpoints_and_legendre() {
    let (rep, _) = preset_report("01-elliptic-identities");
    let e = &rep.results["elliptic"];
    let half_pi = std::f64::consts::FRAC_PI_2;
    let dev_k0 = (e["k_at_0"].as_f64().unwrap() - half_pi).abs();
    let dev_e0 = (e["e_at_0"].as_f64().unwrap() - half_pi).abs();
    let dev_e1 = (e["e_at_1"].as_f64().unwrap() - 1.0).abs();
    let leg = e["legendre_max_dev"].as_f64().unwrap();
    let pass = dev_k0 < 1e-10 && dev_e0 < 1e-10 && dev_e1 < 1e-10 && leg < 1e-10;
    verdict(
        1,
        "elliptic endpoint values and Legendre relation",
        pass,
        format!("endpoint devs {dev_k0:.1e}/{dev_e0:.1e}/{dev_e1:.1e}, Legendre {leg:.1e}"),
    );
}

#[test]
fn criterion_02_two_near_zero_modes_in_shrinking_window() {
    let (rep, secs) = preset_report("02-disk-zero-modes");
    let runs = rep.results["fields"][0]["runs"].as_array().unwrap();
    let counts: Vec<i64> = runs
        .iter()
        .map(|r| r["near_zero"]["count"].as_i64().unwrap())
        .collect();
    let max_abs: Vec<f64> = runs
        .iter()
        .map(|r| r["near_zero"]["max_abs"].as_f64().unwrap())
        .collect();
    let pass = counts.iter().all(|&c| c == 2)
        && max_abs.windows(2).all(|w| w[1] < w[0])
        && secs < 120.0;
    verdict(
        2,
        "flux-2.5 disk at g = 2 has exactly two planar modes in the 5h window",
        pass,
        format!("counts {counts:?}, |E|max {max_abs:.3?}, {secs:.1} s"),
    );
}

#[test]
fn criterion_03_guaranteed_count_certified_and_seen_radially() {
    let (rep, secs) = preset_report("03-disk-bound-count");
    let n_bound = rep.results["n_bound"].as_u64().unwrap();
    let certs = rep.results["certificates"].as_array().unwrap();
    let all_certified = certs.iter().all(|c| {
        c["status"] == "certified" && c["form_value"].as_f64().unwrap() < 0.0
    });
    let radial_total = rep.results["radial_crosscheck"]["total_negative"]
        .as_u64()
        .unwrap();
    let pass = n_bound == 3 && certs.len() == 3 && all_certified && radial_total >= 3 && secs < 60.0;
    verdict(
        3,
        "three bound states certified just above g = 2 and found radially",
        pass,
        format!(
            "n_bound {n_bound}, certified {}, radial {radial_total}, {secs:.1} s",
            all_certified
        ),
    );
}

#[test]
fn criterion_04_sign_changing_field_needs_the_bump_term() {
    let (rep, secs) = preset_report("04-annulus-linear-term");
    let field = zeromodes::tuned_linear_term_annulus(3.0).unwrap();
    let sign_changing = field.radial_b(0.5) > 0.0 && field.radial_b(1.75) < 0.0;
    let flux_n = rep.results["flux"]["whole_modes"].as_i64().unwrap();
    let n_bound = rep.results["n_bound"].as_i64().unwrap();
    let certs = rep.results["certificates"].as_array().unwrap();
    let all_certified = certs
        .iter()
        .all(|c| c["status"] == "certified" && c["form_value"].as_f64().unwrap() < 0.0);
    let resonance_eps = certs.last().unwrap()["eps"].as_f64().unwrap();
    let pass = sign_changing
        && n_bound == flux_n + 1
        && all_certified
        && resonance_eps != 0.0
        && secs < 60.0;
    verdict(
        4,
        "sign-changing annulus: exact count, resonance certified only via a nonzero bump",
        pass,
        format!(
            "count {n_bound} = N+1, forms negative {all_certified}, eps {resonance_eps:.2e}, {secs:.1} s"
        ),
    );
}

#[test]
fn criterion_05_pairing_identity_and_condition_flip() {
    let (rep, secs) = preset_report("05-pairing-identity");
    let rel = rep.results["pairing"]["rel_diff"].as_f64().unwrap();
    let scan = rep.results["condition_scan"].as_array().unwrap();
    let below = scan.iter().find(|s| s["g"] == 1.9).unwrap()["binds"]
        .as_bool()
        .unwrap();
    let above = scan.iter().find(|s| s["g"] == 2.1).unwrap()["binds"]
        .as_bool()
        .unwrap();
    let pass = rel < 1e-4 && !below && above && secs < 60.0;
    verdict(
        5,
        "log pairing identity to 1e-4 and the binding condition flips at g = 2",
        pass,
        format!("rel diff {rel:.2e}, binds(1.9) {below}, binds(2.1) {above}, {secs:.1} s"),
    );
}

#[test]
fn criterion_06_weak_coupling_slope_within_25_percent() {
    let (rep, secs) = preset_report("06-weak-coupling-law");
    let law = &rep.results["energy_law"];
    let ratio = law["slope_ratio"].as_f64().unwrap();
    let fitted = law["fitted_slope"].as_f64().unwrap();
    let predicted = law["predicted_slope"].as_f64().unwrap();
    let points = law["points_used"].as_u64().unwrap();
    let pass = (0.75..=1.25).contains(&ratio) && rep.converged && secs < 600.0;
    verdict(
        6,
        "shallow-state ln|E| slope against 1/lambda^2 matches the predicted coefficient",
        pass,
        format!(
            "fitted {fitted:.3e} vs predicted {predicted:.3e}, ratio {ratio:.3} over {points} points, {secs:.1} s"
        ),
    );
}

#[test]
fn criterion_07_strong_coupling_oscillator_limit() {
    let (rep, secs) = preset_report("07-strong-coupling-limit");
    let rows = rep.results["rows"].as_array().unwrap();
    let last = rows
        .iter()
        .max_by(|a, b| a["lambda"].as_f64().unwrap().total_cmp(&b["lambda"].as_f64().unwrap()))
        .unwrap();
    let rescaled = last["rescaled"].as_f64().unwrap();
    let dev = (rescaled - (-1.0)).abs();
    let decreasing = rep.results["error_decreasing"][0]["decreasing"]
        .as_bool()
        .unwrap();
    let pass = dev <= 0.05 && decreasing && secs < 300.0;
    verdict(
        7,
        "rescaled ground state within 5% of the oscillator level with shrinking error",
        pass,
        format!(
            "E0/lambda = {rescaled:.5} at lambda = {}, dev {dev:.2e}, decreasing {decreasing}, {secs:.1} s",
            last["lambda"]
        ),
    );
}

#[test]
fn criterion_08_small_lambda_channel_selectivity() {
    let (rep, secs) = preset_report("08-small-lambda-channels");
    let channels = rep.results["channels"].as_array().unwrap();
    let count_of = |ell: i64| -> u64 {
        channels
            .iter()
            .find(|c| c["ell"] == ell)
            .unwrap()["count"]
            .as_u64()
            .unwrap()
    };
    let s_bound = count_of(0) >= 1
        || (rep.results["below_floor"].as_bool() == Some(true)
            && rep.results["predicted_shallow_energy"].as_f64().is_some());
    let pass = s_bound && count_of(-1) == 0 && count_of(1) == 0 && secs < 120.0;
    verdict(
        8,
        "weak vortex binds the s channel and neither |l| = 1 channel",
        pass,
        format!(
            "counts (l=-1,0,1) = ({}, {}, {}), {secs:.1} s",
            count_of(-1),
            count_of(0),
            count_of(1)
        ),
    );
}

#[test]
fn criterion_09_radial_planar_agreement_three_profiles() {
    let (rep, secs) = preset_report("09-radial-planar-agreement");
    let fields = rep.results["fields"].as_array().unwrap();
    let devs: Vec<f64> = fields
        .iter()
        .map(|f| f["radial_comparison"]["max_rel_dev"].as_f64().unwrap())
        .collect();
    let pass = fields.len() == 3 && devs.iter().all(|&d| d < 0.02) && secs < 600.0;
    let shown: Vec<String> = devs.iter().map(|d| format!("{d:.2e}")).collect();
    verdict(
        9,
        "lowest three levels agree between radial and planar solvers to 2%",
        pass,
        format!("max rel devs {shown:?} across {} profiles, {secs:.1} s", fields.len()),
    );
}

#[test]
fn criterion_10_oscillator_ladder_and_convergence_order() {
    let (rep, secs) = preset_report("10-oscillator-calibration");
    let levels = rep.results["channels"][0]["levels"].as_array().unwrap();
    let max_rel = levels
        .iter()
        .map(|l| l["rel_dev"].as_f64().unwrap())
        .fold(0.0f64, f64::max);
    let order = rep.results["convergence_order"].as_f64().unwrap();
    let pass = levels.len() == 3 && max_rel < 1e-3 && (1.8..=2.2).contains(&order) && secs < 60.0;
    verdict(
        10,
        "oscillator ladder 2mu(2n+1) to 0.1% and second-order convergence",
        pass,
        format!("ladder rel dev {max_rel:.1e}, order {order:.2}, {secs:.1} s"),
    );
}
