use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use libm::{log, pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{names, tolerances, IdentityReport, Witness};
use crate::agents::{
    efe_mdp, efe_pomdp, feef, feef_terms, itbr_free_energy_mdp, itbr_optimal_posterior, predicted_state_prior,
    select_action_mdp, ActionEvaluation, EfeForm, EfePomdpForm, ObjectiveSpec, Sense,
};
use crate::math::{entropy, gibbs, gibbs_with_log_partition, kl_divergence, CategoricalDist};
use crate::models::{
    preference_from_rewards, BeliefState, MdpModel, PomdpModel, PreferenceDistribution, UtilityFunction,
};
use crate::{Error, Result};

/// Tie tolerance used when comparing optimal sets inside verifiers.
const SET_TIE_TOLERANCE: f64 = 1e-12;

fn mdp_witness(m: &MdpModel) -> Witness {
    Witness { model: Some(m.to_description()), ..Witness::default() }
}

fn pomdp_witness(p: &PomdpModel, belief: &BeliefState, a: usize, pref_obs: &PreferenceDistribution) -> Witness {
    Witness { model: Some(p.to_description()), action: Some(a), ..Witness::default() }
        .with_vector("belief", belief.dist().probs())
        .with_vector("pref_obs", pref_obs.dist.probs())
}

/// Tracks the largest residual seen and where it occurred. NaN wins.
#[derive(Debug, Clone, Copy)]
struct Worst {
    residual: f64,
    state: usize,
    action: usize,
}

impl Worst {
    fn new() -> Self {
        Self { residual: f64::NEG_INFINITY, state: 0, action: 0 }
    }

    fn update(&mut self, residual: f64, state: usize, action: usize) {
        if residual.is_nan() || (!self.residual.is_nan() && residual > self.residual) {
            *self = Self { residual, state, action };
        }
    }
}

/// Agreement of the two algebraic forms of the MDP expected free energy
/// (`KL` versus `−entropy + surprise`) over every state and action, with the
/// preference `gibbs(uniform, u(R), β)`.
pub fn verify_efe_mdp_forms(m: &MdpModel, u: &UtilityFunction, beta: f64) -> Result<IdentityReport> {
    let pref = preference_from_rewards(m, u, beta, &CategoricalDist::uniform(m.n_states())?)?;
    let mut worst = Worst::new();
    for s in 0..m.n_states() {
        for a in 0..m.n_actions() {
            let kl = efe_mdp(m, s, a, &pref, EfeForm::Kl)?.value();
            let split = efe_mdp(m, s, a, &pref, EfeForm::EntropySurprise)?.value();
            worst.update((kl - split).abs(), s, a);
        }
    }
    let witness = Witness { state: Some(worst.state), action: Some(worst.action), utility: Some(*u), ..mdp_witness(m) }
        .with_parameter("beta", beta);
    Ok(IdentityReport::new(names::EFE_MDP_FORMS, worst.residual, tolerances::EFE_MDP_FORMS, witness))
}

fn fill_flat_simplex<R: Rng>(rng: &mut R, support: &[usize], out: &mut [f64]) {
    let mut total = 0.0;
    for &i in support {
        let e = -log(1.0 - rng.gen::<f64>());
        out[i] = e;
        total += e;
    }
    for &i in support {
        out[i] /= total;
    }
}

/// `Σ q·u − (1/β)·Σ q·ln(q/prior)` on raw slices; `q` must vanish off the prior's support.
fn free_energy(prior: &[f64], q: &[f64], utilities: &[f64], beta: f64) -> f64 {
    let mut eu = 0.0;
    let mut kl = 0.0;
    for i in 0..q.len() {
        if q[i] > 0.0 {
            eu += q[i] * utilities[i];
            kl += q[i] * (log(q[i]) - log(prior[i]));
        }
    }
    eu - kl / beta
}

/// Largest `F(candidate) − F(q*)` over random candidates. Half the candidates
/// are flat-simplex draws on the prior's support, half are small perturbations
/// of `q*`; every vertex of the support is tried as well.
fn gibbs_margin<R: Rng>(
    rng: &mut R,
    prior: &CategoricalDist,
    utilities: &[f64],
    beta: f64,
    n_candidates: usize,
) -> Result<f64> {
    let q_star = itbr_optimal_posterior(prior, utilities, beta)?;
    let prior = prior.probs();
    let q_star = q_star.probs();
    let best = free_energy(prior, q_star, utilities, beta);
    let support: Vec<usize> = (0..prior.len()).filter(|&i| prior[i] > 0.0).collect();

    let mut worst = f64::NEG_INFINITY;
    let mut candidate = vec![0.0; prior.len()];
    let mut direction = vec![0.0; prior.len()];
    let mut consider = |candidate: &[f64]| {
        let gap = free_energy(prior, candidate, utilities, beta) - best;
        if gap.is_nan() || gap > worst {
            worst = gap;
        }
    };
    for &i in &support {
        candidate.fill(0.0);
        candidate[i] = 1.0;
        consider(&candidate);
    }
    for k in 0..n_candidates {
        if k % 2 == 0 {
            fill_flat_simplex(rng, &support, &mut candidate);
        } else {
            fill_flat_simplex(rng, &support, &mut direction);
            let eps = pow(10.0, -rng.gen_range(1.0..6.0));
            for &i in &support {
                candidate[i] = (1.0 - eps) * q_star[i] + eps * direction[i];
            }
        }
        consider(&candidate);
    }
    Ok(worst)
}

fn check_candidates(n_candidates: usize) -> Result<()> {
    if n_candidates == 0 {
        return Err(Error::InvalidParameter("n_candidates must be >= 1".into()));
    }
    Ok(())
}

/// Checks that the Gibbs posterior maximizes `E_q[u] − (1/β)·KL[q ‖ prior]`
/// against `n_candidates` seeded random candidates.
///
/// The residual is the largest amount by which any candidate beats the Gibbs
/// posterior, so a passing report has residual at most the tolerance
/// (typically negative).
pub fn verify_gibbs_optimality(
    prior: &CategoricalDist,
    utilities: &[f64],
    beta: f64,
    n_candidates: usize,
    seed: u64,
) -> Result<IdentityReport> {
    check_candidates(n_candidates)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let residual = gibbs_margin(&mut rng, prior, utilities, beta, n_candidates)?;
    let witness = Witness::default()
        .with_vector("prior", prior.probs())
        .with_vector("utilities", utilities)
        .with_parameter("beta", beta)
        .with_parameter("n_candidates", n_candidates as f64);
    Ok(IdentityReport::new(names::GIBBS_OPTIMALITY, residual, tolerances::GIBBS_OPTIMALITY, witness).with_seed(seed))
}

/// [`verify_gibbs_optimality`] for every action's transition row out of `s_now`,
/// with utilities `u(R)`. Reports the worst action.
pub fn verify_gibbs_optimality_mdp(
    m: &MdpModel,
    s_now: usize,
    u: &UtilityFunction,
    beta: f64,
    n_candidates: usize,
    seed: u64,
) -> Result<IdentityReport> {
    check_candidates(n_candidates)?;
    m.check_state(s_now)?;
    let utilities = u.apply_all(m.reward())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Worst::new();
    for a in 0..m.n_actions() {
        worst.update(gibbs_margin(&mut rng, m.transition(a, s_now), &utilities, beta, n_candidates)?, s_now, a);
    }
    let witness = Witness { state: Some(s_now), action: Some(worst.action), utility: Some(*u), ..mdp_witness(m) }
        .with_parameter("beta", beta)
        .with_parameter("n_candidates", n_candidates as f64);
    Ok(IdentityReport::new(names::GIBBS_OPTIMALITY, worst.residual, tolerances::GIBBS_OPTIMALITY, witness)
        .with_seed(seed))
}

fn format_set(set: &[usize]) -> String {
    let items: Vec<String> = set.iter().map(|a| format!("{a}")).collect();
    format!("{{{}}}", items.join(","))
}

/// Checks `β·F(q) + KL[q ‖ P*(·|a)] − ln Z_β(a) = 0` for every action, where
/// `P*(·|a)` is the Gibbs reweighting of the transition row by `β·u(R)`.
///
/// The identity holds for every `q` absolutely continuous with respect to the
/// transition row; it is evaluated at the Gibbs posterior, at the transition
/// row itself and at the uniform distribution over the row's support.
///
/// The report also compares two action rankings: maximizing `F` at the optimum
/// (equivalently `ln Z_β(a)`), and minimizing `KL[q*(·|a) ‖ P*(s)]` against
/// the action-independent target `P*(s) = gibbs(uniform, u(R), β)`. Dropping
/// `ln Z_β(a)` is only harmless when it does not depend on `a`, so agreement is
/// reported (parameter `argmin_agreement`, 1 or 0) but never asserted.
pub fn verify_itbr_divergence_equivalence_mdp(
    m: &MdpModel,
    s_now: usize,
    u: &UtilityFunction,
    beta: f64,
) -> Result<IdentityReport> {
    m.check_state(s_now)?;
    let utilities = u.apply_all(m.reward())?;
    let target = gibbs(&CategoricalDist::uniform(m.n_states())?, &utilities, beta)?;

    let mut worst = Worst::new();
    let mut optimal_values = Vec::with_capacity(m.n_actions());
    let mut divergences = Vec::with_capacity(m.n_actions());
    for a in 0..m.n_actions() {
        let row = m.transition(a, s_now);
        let posterior = gibbs_with_log_partition(row, &utilities, beta)?;
        let uniform_on_support =
            CategoricalDist::from_weights(row.probs().iter().map(|&p| if p > 0.0 { 1.0 } else { 0.0 }).collect())?;
        for q in [&posterior.dist, row, &uniform_on_support] {
            let f = itbr_free_energy_mdp(m, s_now, a, q, u, beta)?;
            let kl = kl_divergence(q, &posterior.dist)?.value();
            worst.update((beta * f + kl - posterior.log_partition).abs(), s_now, a);
        }
        optimal_values.push(itbr_free_energy_mdp(m, s_now, a, &posterior.dist, u, beta)?);
        divergences.push(kl_divergence(&posterior.dist, &target)?.value());
    }

    let by_free_energy = ActionEvaluation::from_values(optimal_values, Sense::Maximize, SET_TIE_TOLERANCE)?;
    let by_divergence = ActionEvaluation::from_values(divergences, Sense::Minimize, SET_TIE_TOLERANCE)?;
    let agree = by_free_energy.optimal_set == by_divergence.optimal_set;
    let notes = format!(
        "argmax F = {}; argmin KL[q*||P*(s)] = {}; agreement = {}; divergence minimized (the negated form would select its maximizer)",
        format_set(&by_free_energy.optimal_set),
        format_set(&by_divergence.optimal_set),
        if agree { "yes" } else { "no" },
    );
    let witness = Witness { state: Some(s_now), action: Some(worst.action), utility: Some(*u), ..mdp_witness(m) }
        .with_parameter("beta", beta)
        .with_parameter("argmin_agreement", if agree { 1.0 } else { 0.0 });
    Ok(IdentityReport::new(names::ITBR_DIVERGENCE_MDP, worst.residual, tolerances::ITBR_DIVERGENCE_MDP, witness)
        .with_notes(notes))
}

/// `|KL[Q(o,s|a) ‖ P*(o,s)] − (extrinsic − intrinsic)|` for the free energy of
/// the expected future.
pub fn verify_feef_decomposition(
    p: &PomdpModel,
    belief: &BeliefState,
    a: usize,
    pref_obs: &PreferenceDistribution,
) -> Result<IdentityReport> {
    let terms = feef_terms(p, belief, a, pref_obs)?;
    let residual = (terms.joint_kl - terms.decomposed()).abs();
    let notes = format!(
        "joint = {:.12e}; extrinsic = {:.12e}; intrinsic = {:.12e}",
        terms.joint_kl, terms.extrinsic, terms.intrinsic
    );
    Ok(IdentityReport::new(
        names::FEEF_DECOMPOSITION,
        residual,
        tolerances::FEEF_DECOMPOSITION,
        pomdp_witness(p, belief, a, pref_obs),
    )
    .with_notes(notes))
}

/// `|G − E_{Q(s|a)} H[P(o|s)] − FEEF|`, with the expected free energy in its
/// intrinsic/extrinsic form using the same observation preference as the free
/// energy of the expected future.
pub fn verify_efe_feef_relation(
    p: &PomdpModel,
    belief: &BeliefState,
    a: usize,
    pref_obs: &PreferenceDistribution,
) -> Result<IdentityReport> {
    let g = efe_pomdp(p, belief, a, EfePomdpForm::Value { pref_obs })?.value();
    let joint = feef(p, belief, a, pref_obs)?.value();
    let predicted = predicted_state_prior(p, belief, a)?;
    let correction: f64 =
        predicted.dist().support().map(|s| predicted.dist().get(s) * entropy(p.likelihood(s)).value()).sum();
    let residual = (g - correction - joint).abs();
    let notes = format!("G = {g:.12e}; entropy correction = {correction:.12e}; FEEF = {joint:.12e}");
    Ok(IdentityReport::new(
        names::EFE_FEEF_RELATION,
        residual,
        tolerances::EFE_FEEF_RELATION,
        pomdp_witness(p, belief, a, pref_obs),
    )
    .with_notes(notes))
}

/// Compares the utility-based preference `gibbs(uniform, u(R), β)` with the
/// reward-based `gibbs(uniform, R, β)`.
///
/// The two must coincide when `u` is linear or a unit-slope affine map; the
/// residual is then the largest elementwise gap, judged at 1e-12. For other
/// utilities no equality is required (tolerance `f64::MAX`), and the report
/// records the gap, whether the most preferred states coincide, and whether the
/// divergence objective from `s_now` selects the same actions under both.
pub fn compare_preference_distributions(
    m: &MdpModel,
    s_now: usize,
    u: &UtilityFunction,
    beta: f64,
) -> Result<IdentityReport> {
    let uniform = CategoricalDist::uniform(m.n_states())?;
    let by_utility = preference_from_rewards(m, u, beta, &uniform)?;
    let by_reward = preference_from_rewards(m, &UtilityFunction::Linear, beta, &uniform)?;
    let gap = by_utility.dist.max_abs_diff(&by_reward.dist);

    let modes = |d: &CategoricalDist| {
        ActionEvaluation::from_values(d.probs().into(), Sense::Maximize, SET_TIE_TOLERANCE).map(|e| e.optimal_set)
    };
    let modes_agree = modes(&by_utility.dist)? == modes(&by_reward.dist)?;
    let select = |pref: &PreferenceDistribution| {
        select_action_mdp(m, s_now, &ObjectiveSpec::DivergenceMdp { pref: pref.clone() }, SET_TIE_TOLERANCE)
            .map(|e| e.optimal_set)
    };
    let (chosen_by_utility, chosen_by_reward) = (select(&by_utility)?, select(&by_reward)?);
    let selection_agrees = chosen_by_utility == chosen_by_reward;

    let equality_required = match u {
        UtilityFunction::Linear => true,
        UtilityFunction::Affine { a, .. } => *a == 1.0,
        _ => false,
    };
    let tolerance = if equality_required { tolerances::PREFERENCE_EQUALITY } else { f64::MAX };
    let notes = format!(
        "{}; max gap = {gap:.12e}; most preferred states agree = {}; divergence-optimal actions: utility {} vs reward {}",
        if equality_required { "equality required" } else { "equality not required for this utility" },
        if modes_agree { "yes" } else { "no" },
        format_set(&chosen_by_utility),
        format_set(&chosen_by_reward),
    );
    let witness = Witness { state: Some(s_now), utility: Some(*u), ..mdp_witness(m) }
        .with_parameter("beta", beta)
        .with_parameter("max_gap", gap)
        .with_parameter("mode_agreement", if modes_agree { 1.0 } else { 0.0 })
        .with_parameter("selection_agreement", if selection_agrees { 1.0 } else { 0.0 })
        .with_vector("pref_utility", by_utility.dist.probs())
        .with_vector("pref_reward", by_reward.dist.probs());
    Ok(IdentityReport::new(names::PREFERENCE_EQUALITY, gap, tolerance, witness).with_notes(notes))
}
