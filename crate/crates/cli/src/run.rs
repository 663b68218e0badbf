use std::collections::BTreeSet;

use agency_core::agents::{select_action_mdp, select_action_pomdp, ActionEvaluation, DEFAULT_TIE_TOLERANCE};
use agency_core::bridge::{
    batch_instances, default_tolerance, names, reproduce_paraglider, reproduce_st_petersburg, reproduce_tmaze,
    verify_all, IdentityReport, Reproduction, DEFAULT_CANDIDATES,
};
use agency_core::envs::{build_paraglider, build_tmaze, random_instance, TMazeVariant};
use agency_core::models::{BeliefState, Model};
use anyhow::Context;
use serde::Serialize;

use crate::model_io::{load_model, model_to_json};
use crate::report::{fmt_number, render_reports, render_reproduction, render_table, write_output, Format};
use crate::{Command, ConfigError, GenerateTarget, ReproduceTarget, RunConfig, SeedRange, ToleranceOverride};

/// Identities produced by `verify`.
const BATCH_IDENTITIES: [&str; 5] = [
    names::EFE_FEEF_RELATION,
    names::EFE_MDP_FORMS,
    names::FEEF_DECOMPOSITION,
    names::GIBBS_OPTIMALITY,
    names::ITBR_DIVERGENCE_MDP,
];

const DEFAULT_SEEDS: SeedRange = SeedRange { start: 1, end: 100 };

/// Executes a parsed command line. Returns whether every check passed;
/// errors are configuration or input problems.
pub fn run(config: &RunConfig) -> anyhow::Result<bool> {
    match &config.command {
        Command::Reproduce { target } => reproduce(config, *target),
        Command::Verify { target } => verify(config, target),
        Command::Evaluate => evaluate(config),
        Command::Generate { target } => generate(config, *target),
    }
}

fn emit(config: &RunConfig, text: &str) -> anyhow::Result<()> {
    write_output(text, config.out_path.as_deref()).with_context(|| {
        format!("writing {}", config.out_path.as_deref().map_or("stdout".into(), |p| p.display().to_string()))
    })
}

fn apply_overrides(
    reports: &mut [IdentityReport],
    overrides: &[ToleranceOverride],
    known: impl Fn(&str) -> bool,
) -> Result<(), ConfigError> {
    for o in overrides {
        if !known(&o.name) {
            return Err(ConfigError(format!("--tol: unknown identity or check `{}`", o.name)));
        }
        for r in reports.iter_mut().filter(|r| r.identity_name == o.name) {
            *r = r.clone().with_tolerance(o.value);
        }
    }
    Ok(())
}

fn reproduce(config: &RunConfig, target: ReproduceTarget) -> anyhow::Result<bool> {
    let mut reproduction: Reproduction = match target {
        ReproduceTarget::Paraglider => reproduce_paraglider(),
        ReproduceTarget::Tmaze1 => reproduce_tmaze(TMazeVariant::Absorbing),
        ReproduceTarget::Tmaze2 => reproduce_tmaze(TMazeVariant::Correctable),
        ReproduceTarget::Stpetersburg => reproduce_st_petersburg(),
    }
    .map_err(ConfigError::from_core)?;
    let check_names: BTreeSet<String> = reproduction.checks.iter().map(|c| c.identity_name.clone()).collect();
    apply_overrides(&mut reproduction.checks, &config.tolerances, |n| check_names.contains(n))?;
    emit(config, &render_reproduction(&reproduction, config.output)?)?;
    let passed = reproduction.passed();
    let failed = reproduction.checks.iter().filter(|c| !c.pass).count();
    eprintln!(
        "{}: {}/{} checks passed",
        reproduction.target,
        reproduction.checks.len() - failed,
        reproduction.checks.len()
    );
    Ok(passed)
}

fn verify(config: &RunConfig, target: &str) -> anyhow::Result<bool> {
    if target != "all" && !BATCH_IDENTITIES.contains(&target) {
        return Err(ConfigError(format!(
            "unknown identity `{target}` (expected all or one of: {})",
            BATCH_IDENTITIES.join(", ")
        ))
        .into());
    }
    let seeds = config.seeds.unwrap_or(DEFAULT_SEEDS);
    let mut reports = verify_all(seeds.iter(), DEFAULT_CANDIDATES).map_err(ConfigError::from_core)?;
    if target != "all" {
        reports.retain(|r| r.identity_name == target);
    }
    apply_overrides(&mut reports, &config.tolerances, |n| {
        default_tolerance(n).is_some() && BATCH_IDENTITIES.contains(&n)
    })?;
    let mut text = render_reports(&reports, config.output)?;
    if config.output == Format::Table {
        let equivalence: Vec<&IdentityReport> =
            reports.iter().filter(|r| r.identity_name == names::ITBR_DIVERGENCE_MDP).collect();
        if !equivalence.is_empty() {
            let agree =
                equivalence.iter().filter(|r| r.witness.parameters.get("argmin_agreement") == Some(&1.0)).count();
            text.push_str(&format!(
                "{}: action ranking by F and by KL to the action-independent target agree on {agree}/{} instances\n",
                names::ITBR_DIVERGENCE_MDP,
                equivalence.len()
            ));
        }
    }
    emit(config, &text)?;
    let passed = reports.iter().filter(|r| r.pass).count();
    eprintln!("verify {target} --seeds {seeds}: {passed}/{} reports passed", reports.len());
    Ok(passed == reports.len())
}

#[derive(Serialize)]
struct StateEvaluation {
    state: String,
    actions: Vec<String>,
    evaluation: ActionEvaluation,
}

fn evaluate(config: &RunConfig) -> anyhow::Result<bool> {
    let path = config.model_path.as_deref().ok_or_else(|| ConfigError("evaluate requires --model".into()))?;
    let descriptor = config.objective.as_ref().ok_or_else(|| ConfigError("evaluate requires --objective".into()))?;
    let mut tie = DEFAULT_TIE_TOLERANCE;
    for o in &config.tolerances {
        if o.name != "tie" {
            return Err(ConfigError(format!("--tol: evaluate only accepts `tie`, got `{}`", o.name)).into());
        }
        tie = o.value;
    }
    let model = load_model(path)?;
    let spec = descriptor.build(&model)?;
    let actions = model.mdp().actions().to_vec();
    let evaluations: Vec<StateEvaluation> = match &model {
        Model::Mdp(m) => (0..m.n_states())
            .map(|s| {
                select_action_mdp(m, s, &spec, tie).map(|evaluation| StateEvaluation {
                    state: m.states()[s].clone(),
                    actions: actions.clone(),
                    evaluation,
                })
            })
            .collect::<Result<_, _>>()
            .map_err(ConfigError::from_core)?,
        Model::Pomdp(p) => {
            let belief = BeliefState::uniform(p.n_states()).map_err(ConfigError::from_core)?;
            let evaluation = select_action_pomdp(p, &belief, &spec, tie).map_err(ConfigError::from_core)?;
            vec![StateEvaluation { state: "uniform belief".into(), actions: actions.clone(), evaluation }]
        }
    };
    let rows: Vec<Vec<String>> = evaluations
        .iter()
        .flat_map(|e| {
            e.evaluation.values.iter().enumerate().map(move |(a, v)| {
                vec![
                    e.state.clone(),
                    e.actions[a].clone(),
                    fmt_number(*v),
                    if e.evaluation.optimal_set.contains(&a) { "yes".into() } else { String::new() },
                ]
            })
        })
        .collect();
    let text = match config.output {
        Format::Table => {
            let mut text = format!("objective {descriptor} ({:?})\n\n", spec.sense());
            text.push_str(&render_table(&["state", "action", "value", "optimal"], &rows, &[2]));
            text
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["state", "action", "value", "optimal"])?;
            for row in &rows {
                w.write_record([&row[0], &row[1], &row[2], &(!row[3].is_empty()).to_string()])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Json => serde_json::to_string_pretty(&evaluations)? + "\n",
    };
    emit(config, &text)?;
    Ok(true)
}

fn generate(config: &RunConfig, target: GenerateTarget) -> anyhow::Result<bool> {
    let seed = || {
        let seeds = config.seeds.unwrap_or(SeedRange { start: 1, end: 1 });
        seeds.single().ok_or_else(|| ConfigError(format!("generate takes a single seed, got {seeds}")))
    };
    let model = match target {
        GenerateTarget::Mdp => random_instance(&batch_instances(seed()?).mdp).map_err(ConfigError::from_core)?,
        GenerateTarget::Pomdp => random_instance(&batch_instances(seed()?).pomdp).map_err(ConfigError::from_core)?,
        GenerateTarget::Paraglider => Model::Mdp(build_paraglider()),
        GenerateTarget::Tmaze1 => Model::Pomdp(build_tmaze(TMazeVariant::Absorbing).model),
        GenerateTarget::Tmaze2 => Model::Pomdp(build_tmaze(TMazeVariant::Correctable).model),
    };
    emit(config, &model_to_json(&model))?;
    Ok(true)
}
