//! Named verification scenarios. Each one checks a statement on finite samples
//! and reports "no counterexample found"; nothing here proves a theorem.

mod axioms;
mod basic;
mod canonical;
mod common;
mod ulrich;

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use subext_core::dcoeff::{Fp, Local};
use subext_core::ext::ENUM_BUDGET;

use crate::report::{aggregate, Instance, ScenarioResult, Status};
use crate::workspace::{WsCoeff, Workspace};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("unknown scenario {0:?}; see `subext list-scenarios`")]
    UnknownScenario(String),
    #[error("workspace lacks ring {0:?}")]
    MissingRing(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub budget: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            budget: ENUM_BUDGET,
        }
    }
}

/// What a scenario body sees.
pub struct Ctx<'a> {
    pub ws: &'a Workspace,
    pub seed: u64,
    pub budget: u64,
    consumed: AtomicU64,
    rings_used: std::sync::Mutex<Vec<String>>,
}

impl<'a> Ctx<'a> {
    fn new(ws: &'a Workspace, o: RunOptions) -> Self {
        Ctx {
            ws,
            seed: o.seed,
            budget: o.budget,
            consumed: AtomicU64::new(0),
            rings_used: Default::default(),
        }
    }

    /// Counts enumerated classes against the report.
    pub fn charge(&self, classes: u64) {
        self.consumed.fetch_add(classes, Ordering::Relaxed);
    }

    pub fn ring<T: WsCoeff>(&self, label: &str) -> Result<std::sync::Arc<subext_core::rings::RingHandle<T>>, ScenarioError> {
        let r = self.ws.ring::<T>(label).ok_or_else(|| ScenarioError::MissingRing(label.into()))?;
        let mut used = self.rings_used.lock().expect("ring list lock");
        if !used.iter().any(|u| u == label) {
            used.push(label.to_string());
        }
        Ok(r.clone())
    }

    pub fn curve(&self, label: &str) -> Result<std::sync::Arc<subext_core::rings::CurveRing>, ScenarioError> {
        self.ring::<Local>(label)
    }

    pub fn artin(&self, label: &str) -> Result<std::sync::Arc<subext_core::rings::ArtinRing>, ScenarioError> {
        self.ring::<Fp>(label)
    }

    /// A seed for one numbered sub-case, independent of evaluation order.
    pub fn sub_seed(&self, k: u64) -> u64 {
        self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}

type Body = fn(&Ctx) -> Result<Vec<Instance>, ScenarioError>;

pub struct Scenario {
    pub name: &'static str,
    pub claim: &'static str,
    body: Body,
}

pub static REGISTRY: &[Scenario] = &[
    Scenario { name: "algor", claim: "for a one-dimensional CM ring of minimal multiplicity: almost Gorenstein iff m·Ext¹(Ul(R), m) = 0", body: ulrich::algor },
    Scenario { name: "artincan", claim: "if m² = 0 ≠ m and e = μ(m): μ(ω) = e and Ω¹ω ≅ k^(e²−1)", body: canonical::artincan },
    Scenario { name: "axioms-mu", claim: "μ-additive sequences form an exact structure (closure under identities, isomorphisms, pushouts, pullbacks, compositions, sums and scalars)", body: axioms::axioms_mu },
    Scenario { name: "axioms-mu-negative-control", claim: "negative control: a deliberately broken admissibility predicate must be caught by the axiom checker", body: axioms::negative_control },
    Scenario { name: "axioms-nu", claim: "ν_I-additive sequences form an exact structure", body: axioms::axioms_nu },
    Scenario { name: "axioms-ul", claim: "sequences of I-Ulrich modules form an exact structure", body: axioms::axioms_ul },
    Scenario { name: "cano-d1", claim: "in dimension one: E^R ≅ m†, μ(m†) = r(R) + 1, and 0 → ω → E^R → k → 0 is non-split and μ-additive", body: canonical::cano_d1 },
    Scenario { name: "cycquot", claim: "for a non-zero-divisor x ∈ m and a proper ideal I: Ext¹(R/x, R/I)^μ = m·Ext¹(R/x, R/I) ≅ m/(I + xR)", body: basic::cycquot },
    Scenario { name: "dvr-mu", claim: "over a DVR: Ext¹(M, N)^μ = m·Ext¹(M, N) for all finitely generated M, N", body: basic::dvr_mu },
    Scenario { name: "engine-laws", claim: "Ext¹ engine self-consistency: Baer group laws, middle/classify round trip, scalars via pullback and pushout, long exact sequences", body: axioms::engine_laws },
    Scenario { name: "halfexact", claim: "for C of finite length: Hom(C, −) (resp. Hom(−, C)) is exact on a sequence iff λ∘Hom is additive on it", body: axioms::halfexact },
    Scenario { name: "hyper", claim: "for a CM ring of minimal multiplicity in dimension one: Ext¹(m, R)^μ = 0 forces a hypersurface", body: basic::hyper },
    Scenario { name: "injd-d1", claim: "non-regular one-dimensional CM ring, N = ω of finite injective dimension: Ext¹(k, ω)^μ = Ext¹(k, ω) ≠ 0", body: canonical::injd_d1 },
    Scenario { name: "jane", claim: "I·Ext¹(M, N) ⊆ Ext¹(M, N)^(ν_I) for every m-primary I", body: ulrich::jane },
    Scenario { name: "loewy", claim: "over a DVR, c ≥ ℓℓ(H⁰_m(L)), φ_L = λ(R/m^c ⊗ −): Ext¹(L, F)^(μ, φ_L) = 0 for F free", body: basic::loewy },
    Scenario { name: "mintype-muadd", claim: "minimal multiplicity: μ((Ω¹ω)†) = r(R)² − 1 and 0 → R → ω^r → (Ω¹ω)† → 0 is μ-additive", body: canonical::mintype_muadd },
    Scenario { name: "mr-minmult", claim: "minimal multiplicity: Ext¹(M, F)^μ = Ext¹(M, F) for every MCM M and free F", body: basic::mr_minmult },
    Scenario { name: "projgor", claim: "B(I) Gorenstein ⇒ tr(I)·Ext¹(Ul_I(R), B(I)) = 0; M ∈ add B(I) ⇒ tr(I)·Ext¹(M, Ul_I(R)) = 0; for M Ulrich, M ∈ add B(m) iff m·Ext¹(M, Ul(R)) = 0", body: ulrich::projgor },
    Scenario { name: "prop1-ulrich", claim: "for M, N ∈ Ul(R): m·Ext¹(M, N) = Ext¹_Ul(M, N) = x·Ext¹(M, N) for a minimal reduction x of m", body: ulrich::prop1 },
    Scenario { name: "redul", claim: "for x a principal reduction of I: m is I-Ulrich iff m ⊆ (x) : I", body: ulrich::redul },
    Scenario { name: "reg-depth1", claim: "depth one: R is regular iff Ext¹(k, F)^μ = 0 for a free F", body: basic::reg_depth1 },
    Scenario { name: "regu-d1", claim: "regular of dimension one: Ext¹(k, N)^μ = 0, in particular Ext¹(k, R)^μ = 0", body: basic::regu_d1 },
    Scenario { name: "tony-et", claim: "e^T_I (stable λ(Tor₁(−, R/I^(n+1)))) is subadditive on MCM sequences and its additive sequences form a subfunctor of Ext¹", body: axioms::tony_et },
    Scenario { name: "trk-depth", claim: "Ext¹(Tr R/I, R/ann I)^μ = m·Ext¹(Tr R/I, R/ann I); depth R = 0 iff Ext¹(Tr k, R)^μ = Ext¹(Tr k, R)", body: basic::trk_depth },
    Scenario { name: "trset", claim: "for M, N ∈ Ul_I(R): tr(I)·Ext¹(M, N) ⊆ Ext¹_(Ul_I)(M, N)", body: ulrich::trset },
    Scenario { name: "uladd", claim: "for M, N ∈ Ul^s_I(R): Ext¹(M, N)^(ν_I) = Ext¹_(Ul^s_I)(M, N)", body: ulrich::uladd },
    Scenario { name: "ulfaith", claim: "a one-dimensional CM ring is regular iff Ul(R) is closed under extensions iff some N * M ⊆ Ul(R) with N faithful, M ≠ 0", body: ulrich::ulfaith },
    Scenario { name: "uliso", claim: "for I-Ulrich M, N: restriction gives Ext¹_(Ul_I)(M, N) ≅ Ext¹_(B(I))(M, N)", body: ulrich::uliso },
    Scenario { name: "weakly-mfull", claim: "if N ⊆ M and Ext¹(k, N)^μ = 0 then (mN :_M m) = N + Soc(M); N is weakly m-full when depth M > 0", body: basic::weakly_mfull },
];

pub fn scenario_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|s| s.name).collect()
}

pub fn find(name: &str) -> Option<&'static Scenario> {
    REGISTRY.iter().find(|s| s.name == name)
}

pub fn run_scenario(ws: &Workspace, name: &str, opts: RunOptions) -> Result<ScenarioResult, ScenarioError> {
    let sc = find(name).ok_or_else(|| ScenarioError::UnknownScenario(name.into()))?;
    let t0 = Instant::now();
    let ctx = Ctx::new(ws, opts);
    let instances = match (sc.body)(&ctx) {
        Ok(i) => i,
        Err(e) => vec![Instance::new("-", "workspace provides the scenario's rings").value("error", e.to_string())],
    };
    let status = if instances.is_empty() { Status::Fail } else { aggregate(&instances) };
    let mut rings = ctx.rings_used.into_inner().expect("ring list lock");
    rings.sort();
    Ok(ScenarioResult {
        scenario: sc.name.to_string(),
        claim: sc.claim.to_string(),
        rings,
        status,
        pass: status == Status::Pass,
        instances,
        seed: opts.seed,
        budget: opts.budget,
        budget_consumed: ctx.consumed.load(Ordering::Relaxed),
        wall_time_ms: t0.elapsed().as_millis() as u64,
    })
}

/// Every registered scenario, run concurrently; results sorted by name.
pub fn run_all(ws: &Workspace, opts: RunOptions) -> Vec<ScenarioResult> {
    let mut out: Vec<ScenarioResult> = REGISTRY
        .par_iter()
        .map(|s| run_scenario(ws, s.name, opts).expect("registered"))
        .collect();
    out.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    out
}
