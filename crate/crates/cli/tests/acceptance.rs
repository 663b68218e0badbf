//! One pass/fail line per acceptance criterion; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use agency_core::agents::{
    efe_mdp_unnormalized, enumerate_policies_pomdp, evaluate_policy_pomdp, evaluate_policy_pomdp_with_payoff,
    expected_utility, select_action_mdp, ActionEvaluation, ObjectiveSpec, Sense,
};
use agency_core::bridge::{
    batch_instances, compare_preference_distributions, cue_first_policy, gamble_policy, gamble_then_correct_policy,
    names, tmaze_observation_preference, verify_all, DEFAULT_CANDIDATES,
};
use agency_core::envs::{
    build_paraglider, build_st_petersburg, build_tmaze, random_instance, st_petersburg_pre_tail_value, InstanceSpec,
    TMazeVariant, MAX_ST_PETERSBURG_TERMS,
};
use agency_core::models::{preference_from_rewards, Model, ModelKind, UtilityFunction};
use agency_core::CategoricalDist;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn within(runtime: Duration, limit: Duration) -> Result<(), String> {
    ensure(runtime < limit, format!("runtime {runtime:?} exceeds {limit:?}"))
}

fn paraglider_efe() -> Outcome {
    let start = Instant::now();
    let m = build_paraglider();
    let pref = preference_from_rewards(&m, &UtilityFunction::Linear, 1.0, &CategoricalDist::uniform(3).map_err(err)?)
        .map_err(err)?;
    let g1 = efe_mdp_unnormalized(&m, 0, 0, &pref).map_err(err)?;
    let g2 = efe_mdp_unnormalized(&m, 0, 1, &pref).map_err(err)?;
    let runtime = start.elapsed();
    let summary = format!("G(a1) = {g1:.6}, G(a2) = {g2:.6}, |G(a1)-G(a2)| = {:.1e}, {runtime:?}", (g1 - g2).abs());
    ensure((g1 - -1.2725).abs() <= 2e-3 && (g2 - -1.2725).abs() <= 2e-3, format!("{summary}: off reference"))?;
    ensure((g1 - g2).abs() <= 1e-12, format!("{summary}: not indifferent"))?;
    within(runtime, Duration::from_secs(1))?;
    Ok(summary)
}

fn paraglider_thresholds() -> Outcome {
    let m = build_paraglider();
    let mut parts = Vec::new();
    for (c, expected_set, expected_values) in
        [(0.5, vec![0], None), (1.0, vec![0, 1], Some([0.6, 0.6])), (2.0, vec![1], Some([0.6, 0.9]))]
    {
        let u = UtilityFunction::power(c).map_err(err)?;
        let eval = select_action_mdp(&m, 0, &ObjectiveSpec::ExpectedUtility { utility: u }, 1e-12).map_err(err)?;
        ensure(eval.optimal_set == expected_set, format!("c={c}: optimal set {:?}", eval.optimal_set))?;
        for a in 0..2 {
            let v = expected_utility(&m, 0, a, &u).map_err(err)?;
            if let Some(ev) = expected_values {
                ensure((v - ev[a]).abs() <= 1e-12, format!("c={c}: EU(a{}) = {v}", a + 1))?;
            }
        }
        parts.push(format!("c={c}: {:?}", eval.optimal_set.iter().map(|a| format!("a{}", a + 1)).collect::<Vec<_>>()));
    }
    Ok(parts.join("; "))
}

fn st_petersburg() -> Outcome {
    let start = Instant::now();
    let full = build_st_petersburg(MAX_ST_PETERSBURG_TERMS).map_err(err)?;
    let eu = full.expected_utility(&UtilityFunction::Log).map_err(err)?;
    for n in 1..=MAX_ST_PETERSBURG_TERMS {
        let pre_tail = st_petersburg_pre_tail_value(&build_st_petersburg(n).map_err(err)?);
        ensure(pre_tail == n as f64, format!("pre-tail value at N={n} is {pre_tail}"))?;
    }
    let runtime = start.elapsed();
    ensure((eu - 2.0 * std::f64::consts::LN_2).abs() <= 1e-6, format!("E[ln L] = {eu}"))?;
    within(runtime, Duration::from_millis(100))?;
    Ok(format!(
        "E[ln L] = {eu:.9} (2 ln 2 = {:.9}); pre-tail E[L] = N for N = 1..=60; {runtime:?}",
        2.0 * std::f64::consts::LN_2
    ))
}

fn tmaze_absorbing() -> Outcome {
    let t = build_tmaze(TMazeVariant::Absorbing);
    let (p, b) = (&t.model, &t.initial_belief);
    let policies = enumerate_policies_pomdp(p, b, 2).map_err(err)?;
    let linear = ObjectiveSpec::ExpectedUtility { utility: UtilityFunction::Linear };
    let eu: Vec<f64> = policies
        .iter()
        .map(|pi| evaluate_policy_pomdp_with_payoff(p, b, pi, &linear, &t.payoff))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let cue = policies.iter().position(|pi| *pi == cue_first_policy()).ok_or("cue-first policy not enumerated")?;
    let gamble = evaluate_policy_pomdp_with_payoff(p, b, &gamble_policy(), &linear, &t.payoff).map_err(err)?;
    ensure(eu[cue] == 1.0, format!("cue-first EU = {}", eu[cue]))?;
    ensure(gamble == 0.0, format!("gamble EU = {gamble}"))?;
    let eval = ActionEvaluation::from_values(eu.clone(), Sense::Maximize, 1e-12).map_err(err)?;
    ensure(eval.optimal_set == [cue], format!("EU optimal set has {} policies", eval.optimal_set.len()))?;

    let pref_obs = tmaze_observation_preference(&t).map_err(err)?;
    let mut sizes = Vec::new();
    for (label, spec) in [
        ("EFE", ObjectiveSpec::EfePomdpValue { pref_obs: pref_obs.clone() }),
        ("FEEF", ObjectiveSpec::Feef { pref_obs: pref_obs.clone() }),
    ] {
        let values: Vec<f64> =
            policies.iter().map(|pi| evaluate_policy_pomdp(p, b, pi, &spec)).collect::<Result<_, _>>().map_err(err)?;
        let eval = ActionEvaluation::from_values(values, Sense::Minimize, 1e-12).map_err(err)?;
        ensure(eval.optimal_set.contains(&cue), format!("{label} optimal set lacks cue-first"))?;
        sizes.push(format!("{label} optimal set size {}", eval.optimal_set.len()));
    }
    Ok(format!("{} policies; cue-first 1, gamble 0, cue-first unique EU optimum; {}", policies.len(), sizes.join(", ")))
}

fn tmaze_correctable() -> Outcome {
    let t = build_tmaze(TMazeVariant::Correctable);
    let (p, b) = (&t.model, &t.initial_belief);
    let policies = enumerate_policies_pomdp(p, b, 2).map_err(err)?;
    let cue = policies.iter().position(|pi| *pi == cue_first_policy()).ok_or("cue-first policy not enumerated")?;
    let mut parts = Vec::new();
    for c in [0.5, 1.0, 2.0] {
        let spec = ObjectiveSpec::ExpectedUtility { utility: UtilityFunction::power(c).map_err(err)? };
        let gamble =
            evaluate_policy_pomdp_with_payoff(p, b, &gamble_then_correct_policy(), &spec, &t.payoff).map_err(err)?;
        let cue_value = evaluate_policy_pomdp_with_payoff(p, b, &cue_first_policy(), &spec, &t.payoff).map_err(err)?;
        ensure((gamble - 0.5 * 2f64.powf(c)).abs() <= 1e-12, format!("c={c}: gamble EU = {gamble}"))?;
        ensure((cue_value - 1.0).abs() <= 1e-12, format!("c={c}: cue EU = {cue_value}"))?;
        if c == 1.0 {
            ensure(
                (gamble - cue_value).abs() <= 1e-12,
                format!("c=1: |gamble - cue| = {}", (gamble - cue_value).abs()),
            )?;
        }
        if c == 0.5 {
            let eu: Vec<f64> = policies
                .iter()
                .map(|pi| evaluate_policy_pomdp_with_payoff(p, b, pi, &spec, &t.payoff))
                .collect::<Result<_, _>>()
                .map_err(err)?;
            let eval = ActionEvaluation::from_values(eu, Sense::Maximize, 1e-12).map_err(err)?;
            ensure(eval.optimal_set == [cue], "c=0.5: cue-first not the unique optimum")?;
        }
        parts.push(format!("c={c}: gamble {gamble:.6} vs cue {cue_value:.6}"));
    }
    Ok(parts.join("; "))
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let reports = verify_all(1..=100, DEFAULT_CANDIDATES).map_err(err)?;
    let runtime = start.elapsed();
    for seed in 1..=100 {
        let inst = batch_instances(seed);
        ensure(inst.mdp.n_states <= 4 && inst.mdp.n_actions <= 3, format!("seed {seed}: MDP too large"))?;
        ensure(
            inst.pomdp.n_states <= 4 && inst.pomdp.n_obs <= 4 && inst.pomdp.n_actions <= 3,
            format!("seed {seed}: POMDP too large"),
        )?;
    }
    let expected = [
        (names::EFE_MDP_FORMS, 1e-12),
        (names::GIBBS_OPTIMALITY, 1e-12),
        (names::ITBR_DIVERGENCE_MDP, 1e-12),
        (names::FEEF_DECOMPOSITION, 1e-10),
        (names::EFE_FEEF_RELATION, 1e-10),
    ];
    let mut parts = Vec::new();
    for (name, tol) in expected {
        let of: Vec<_> = reports.iter().filter(|r| r.identity_name == name).collect();
        ensure(of.len() == 100, format!("{name}: {} reports", of.len()))?;
        let worst = of.iter().map(|r| r.residual).fold(f64::NEG_INFINITY, f64::max);
        ensure(
            of.iter().all(|r| r.tolerance == tol && r.residual <= tol),
            format!("{name}: worst residual {worst:e}"),
        )?;
        parts.push(format!("{name} max {worst:.1e}"));
    }
    let agree = reports
        .iter()
        .filter(|r| r.identity_name == names::ITBR_DIVERGENCE_MDP)
        .filter(|r| r.witness.parameters.get("argmin_agreement") == Some(&1.0))
        .count();
    within(runtime, Duration::from_secs(60))?;
    Ok(format!("{}; argmin agreement {agree}/100 (reported only); {runtime:.2?}", parts.join(", ")))
}

fn preference_comparison() -> Outcome {
    let paraglider = build_paraglider();
    let mut models = vec![paraglider.clone()];
    for seed in 0..20 {
        let spec =
            InstanceSpec { kind: ModelKind::Mdp, n_states: 4, n_actions: 3, n_obs: 0, seed, reward_range: (0.0, 2.0) };
        if let Model::Mdp(m) = random_instance(&spec).map_err(err)? {
            models.push(m);
        }
    }
    let mut worst = 0.0f64;
    for m in &models {
        for u in [
            UtilityFunction::Linear,
            UtilityFunction::affine(1.0, -1.0).map_err(err)?,
            UtilityFunction::affine(1.0, 3.0).map_err(err)?,
        ] {
            for beta in [0.5, 1.0, 4.0] {
                let r = compare_preference_distributions(m, 0, &u, beta).map_err(err)?;
                ensure(r.pass && r.tolerance == 1e-12, format!("{u}: gap {:e}", r.residual))?;
                worst = worst.max(r.residual);
            }
        }
    }
    let mut parts = vec![format!("linear/affine(a=1) max gap {worst:.1e}")];
    for c in [0.5, 2.0] {
        let r = compare_preference_distributions(&paraglider, 0, &UtilityFunction::power(c).map_err(err)?, 1.0)
            .map_err(err)?;
        ensure(r.residual > 1e-12, format!("power c={c}: distributions coincide"))?;
        parts.push(format!("power c={c}: gap {:.4}, {}", r.residual, r.notes.split("; ").last().unwrap_or("")));
    }
    Ok(parts.join("; "))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_agency-bridge");
    let run =
        || Command::new(bin).args(["verify", "all", "--seeds", "1..100", "--format", "json"]).output().map_err(err);
    let (first, second) = (run()?, run()?);
    ensure(first.status.success() && second.status.success(), "verify all did not exit 0")?;
    ensure(!first.stdout.is_empty(), "empty report")?;
    ensure(first.stdout == second.stdout, "reports differ between runs")?;
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&first.stdout).map_err(err)?;
    Ok(format!("{} reports, {} bytes, identical", reports.len(), first.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("paraglider EFE indifference", paraglider_efe),
        ("paraglider EU thresholds", paraglider_thresholds),
        ("St. Petersburg log utility and divergence", st_petersburg),
        ("T-maze with absorbing arms", tmaze_absorbing),
        ("T-maze with correctable arms", tmaze_correctable),
        ("identity suite over 100 MDPs and 100 POMDPs", identity_suite),
        ("preference distributions: linear vs nonlinear utility", preference_comparison),
        ("determinism of verify all --seeds 1..100", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
