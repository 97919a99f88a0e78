use serde::Serialize;

use super::timing::{catalyst_time, t_edge_cycle, CatalystSupply, CatalystTimeFormula, TimingBreakdown};
use super::waiting::waiting_factor;
use super::{AuxConfig, AuxMode, EdgeParams};
use crate::catalysis::{
    n_cat_for_catalyst, optimal_two_qubit_catalyst, search_catalyst, CatalystSpec,
    ConcentrationProblem, SearchConfig,
};
use crate::error::Result;
use crate::schmidt::DEFAULT_DIM_CAP;

#[derive(Clone, Debug, PartialEq)]
pub struct RateOptions {
    /// Used for catalysts of dimension above 2.
    pub search: SearchConfig,
    pub t_cat_formula: CatalystTimeFormula,
    /// Largest spectrum built while counting copies for a catalyst of
    /// dimension above 2.
    pub n_cat_cap: usize,
}

impl Default for RateOptions {
    fn default() -> Self {
        RateOptions {
            search: SearchConfig::default(),
            t_cat_formula: CatalystTimeFormula::default(),
            n_cat_cap: DEFAULT_DIM_CAP,
        }
    }
}

/// End-to-end rates with and without catalysis, and every intermediate
/// quantity that goes into them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub n_edges: u32,
    pub p_cat: f64,
    pub p_locc: f64,
    /// Largest coefficient of the catalyst.
    pub c0: f64,
    pub catalyst: Vec<f64>,
    /// Copies of the primary state needed to build one catalyst; `None` when
    /// the count exceeds the dimension cap and the mode does not need it.
    pub n_cat: Option<u32>,
    pub z_cat: f64,
    pub z_locc: f64,
    pub timing: TimingBreakdown,
    pub rate_cat: f64,
    pub rate_locc: f64,
    pub eta_p: f64,
    pub eta_r: f64,
}

/// Catalyst used on an edge: the closed form for two dimensions, a numerical
/// search above that.
pub fn edge_catalyst(edge: &EdgeParams, options: &RateOptions) -> Result<CatalystSpec> {
    let problem = ConcentrationProblem::new(edge.copies, edge.alpha)?;
    if edge.catalyst_dim == 2 {
        optimal_two_qubit_catalyst(&problem)
    } else {
        search_catalyst(&problem, edge.catalyst_dim, &options.search)
    }
}

/// `R_cat = 1 / (<T_L0> Z(P_cat))` and `R_LOCC = 1 / (<T_pri> Z(P_LOCC))`
/// for a chain of `n_edges` identical edges.
pub fn rate_catalytic(
    edge: &EdgeParams,
    aux: &AuxConfig,
    n_edges: u32,
    options: &RateOptions,
) -> Result<RateReport> {
    edge.validate()?;
    aux.validate()?;
    let catalyst = edge_catalyst(edge, options)?;
    rate_with_catalyst(edge, aux, n_edges, &catalyst, options)
}

pub(crate) fn rate_with_catalyst(
    edge: &EdgeParams,
    aux: &AuxConfig,
    n_edges: u32,
    catalyst: &CatalystSpec,
    options: &RateOptions,
) -> Result<RateReport> {
    let problem = ConcentrationProblem::new(edge.copies, edge.alpha)?;
    let p_cat = catalyst.success_probability;
    let p_locc = problem.locc_probability();
    let n_cat = n_cat_for_catalyst(&catalyst.spectrum, edge.alpha, options.n_cat_cap);
    let (t0, p0) = (edge.t0(), edge.herald_probability);
    let supply = match aux.mode {
        AuxMode::AuxRich => CatalystSupply::AuxRich,
        AuxMode::None => CatalystSupply::Primary { n_cat: n_cat.clone()? },
        AuxMode::Finite => CatalystSupply::Paths {
            t_cat: catalyst_time(&aux.paths, &catalyst.spectrum, options.t_cat_formula, options.n_cat_cap)?
                .t_cat,
        },
    };
    let timing = t_edge_cycle(p_cat, edge.copies, t0, p0, supply)?;
    let z_cat = waiting_factor(n_edges, p_cat)?;
    let z_locc = waiting_factor(n_edges, p_locc)?;
    let rate_cat = 1.0 / (timing.t_edge_cycle * z_cat);
    let rate_locc = 1.0 / (timing.t_pri * z_locc);
    Ok(RateReport {
        n_edges,
        p_cat,
        p_locc,
        c0: catalyst.leading(),
        catalyst: catalyst.spectrum.coefficients().to_vec(),
        n_cat: n_cat.ok(),
        z_cat,
        z_locc,
        timing,
        rate_cat,
        rate_locc,
        eta_p: p_cat / p_locc,
        eta_r: rate_cat / rate_locc,
    })
}
