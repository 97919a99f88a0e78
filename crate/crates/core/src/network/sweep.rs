//! Rate-ratio sweeps over the primary-state parameter alpha.

use std::io::{self, Write};

use rayon::prelude::*;

use super::rate::{edge_catalyst, rate_with_catalyst, RateOptions};
use super::timing::t_primary;
use super::waiting::waiting_factor;
use super::{AuxConfig, AuxMode, EdgeParams};
use crate::catalysis::{closed_form_c0, n_cat_required, ConcentrationProblem};
use crate::error::{Error, Result};
use crate::format::num;

pub const SWEEP_CSV_HEADER: &str = "alpha,mode,catalyst_dim,p_locc,p_cat,c0,n_cat,eta_p,z_locc,z_cat,t_edge_cycle_s,rate_locc_hz,rate_cat_hz,eta_r,window_flag";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowFlag {
    Ok,
    /// `n` is not in `2..n_star(alpha)`; the row carries LOCC values only.
    OutsideWindow,
    /// The mode needs the catalyst copy count but it exceeds the dimension cap.
    NCatOverCap,
}

impl WindowFlag {
    pub fn label(self) -> &'static str {
        match self {
            WindowFlag::Ok => "ok",
            WindowFlag::OutsideWindow => "outside_window",
            WindowFlag::NCatOverCap => "n_cat_over_cap",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub mode: AuxMode,
    pub catalyst_dim: usize,
    pub p_locc: f64,
    pub p_cat: f64,
    pub c0: Option<f64>,
    pub n_cat: Option<u32>,
    pub eta_p: f64,
    pub z_locc: f64,
    pub z_cat: f64,
    pub t_edge_cycle: f64,
    pub rate_locc: f64,
    pub rate_cat: f64,
    pub eta_r: f64,
    pub flag: WindowFlag,
}

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            num(self.alpha),
            self.mode.label().to_string(),
            self.catalyst_dim.to_string(),
            num(self.p_locc),
            num(self.p_cat),
            opt(self.c0.map(num)),
            opt(self.n_cat.map(|m| m.to_string())),
            num(self.eta_p),
            num(self.z_locc),
            num(self.z_cat),
            num(self.t_edge_cycle),
            num(self.rate_locc),
            num(self.rate_cat),
            num(self.eta_r),
            self.flag.label().to_string(),
        ]
        .join(",")
    }
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn alpha_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min > 0.5 && max < 1.0 && min <= max) {
        return Err(Error::invalid(format!(
            "alpha range must satisfy 0.5 < min <= max < 1, got [{min}, {max}]"
        )));
    }
    match steps {
        0 => Err(Error::invalid("need at least one grid point")),
        1 => Ok(vec![min]),
        _ => Ok((0..steps)
            .map(|i| {
                if i == steps - 1 {
                    max
                } else {
                    min + (max - min) * i as f64 / (steps - 1) as f64
                }
            })
            .collect()),
    }
}

/// One row per `(aux mode, catalyst dimension, alpha)`, sorted by mode label,
/// dimension, then alpha. `base` supplies the physical layer and `n`; its
/// `alpha` and `catalyst_dim` are overridden per row.
pub fn sweep_fig2(
    base: &EdgeParams,
    n_edges: u32,
    alphas: &[f64],
    auxes: &[AuxConfig],
    dims: &[usize],
    options: &RateOptions,
) -> Result<Vec<SweepRow>> {
    for aux in auxes {
        aux.validate()?;
    }
    let mut combos = Vec::new();
    for aux in auxes {
        for &dim in dims {
            for &alpha in alphas {
                combos.push((aux, dim, alpha));
            }
        }
    }
    combos.sort_by(|a, b| {
        (a.0.mode.label(), a.1)
            .cmp(&(b.0.mode.label(), b.1))
            .then(a.2.total_cmp(&b.2))
    });
    combos
        .into_par_iter()
        .map(|(aux, dim, alpha)| {
            let edge = EdgeParams {
                alpha,
                catalyst_dim: dim,
                ..base.clone()
            };
            edge.validate()?;
            sweep_row(&edge, aux, n_edges, options)
        })
        .collect()
}

fn sweep_row(edge: &EdgeParams, aux: &AuxConfig, n_edges: u32, options: &RateOptions) -> Result<SweepRow> {
    let problem = ConcentrationProblem::new(edge.copies, edge.alpha)?;
    let p_locc = problem.locc_probability();
    let z_locc = waiting_factor(n_edges, p_locc)?;
    let t_pri = t_primary(edge.copies, edge.t0(), edge.herald_probability)?;
    let rate_locc = 1.0 / (t_pri * z_locc);
    let locc_only = |flag| SweepRow {
        alpha: edge.alpha,
        mode: aux.mode,
        catalyst_dim: edge.catalyst_dim,
        p_locc,
        p_cat: p_locc,
        c0: None,
        n_cat: None,
        eta_p: 1.0,
        z_locc,
        z_cat: z_locc,
        t_edge_cycle: t_pri,
        rate_locc,
        rate_cat: rate_locc,
        eta_r: 1.0,
        flag,
    };
    if !problem.in_window() {
        return Ok(locc_only(WindowFlag::OutsideWindow));
    }
    let catalyst = edge_catalyst(edge, options)?;
    match rate_with_catalyst(edge, aux, n_edges, &catalyst, options) {
        Ok(r) => Ok(SweepRow {
            alpha: edge.alpha,
            mode: aux.mode,
            catalyst_dim: edge.catalyst_dim,
            p_locc: r.p_locc,
            p_cat: r.p_cat,
            c0: Some(r.c0),
            n_cat: r.n_cat,
            eta_p: r.eta_p,
            z_locc: r.z_locc,
            z_cat: r.z_cat,
            t_edge_cycle: r.timing.t_edge_cycle,
            rate_locc: r.rate_locc,
            rate_cat: r.rate_cat,
            eta_r: r.eta_r,
            flag: WindowFlag::Ok,
        }),
        Err(Error::ResourceLimit { .. }) if aux.mode != AuxMode::AuxRich => Ok(SweepRow {
            p_cat: catalyst.success_probability,
            c0: Some(catalyst.leading()),
            eta_p: catalyst.success_probability / p_locc,
            z_cat: waiting_factor(n_edges, catalyst.success_probability)?,
            t_edge_cycle: f64::NAN,
            rate_cat: f64::NAN,
            eta_r: f64::NAN,
            ..locc_only(WindowFlag::NCatOverCap)
        }),
        Err(e) => Err(e),
    }
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv_line())?;
    }
    out.flush()
}

/// A point where the no-aux catalyst copy count increments, bracketed to
/// within the requested resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct NCatJump {
    pub alpha_left: f64,
    pub alpha_right: f64,
    pub n_cat_left: u32,
    pub n_cat_right: u32,
    pub eta_r_left: f64,
    pub eta_r_right: f64,
}

/// Brackets every change of the no-aux copy count `n_cat` for the closed-form
/// two-qubit catalyst between `alpha_lo` and `alpha_hi` by bisection.
pub fn locate_n_cat_jumps(
    base: &EdgeParams,
    n_edges: u32,
    alpha_lo: f64,
    alpha_hi: f64,
    resolution: f64,
) -> Result<Vec<NCatJump>> {
    if !(resolution > 0.0) || !(alpha_lo <= alpha_hi) {
        return Err(Error::invalid("need alpha_lo <= alpha_hi and a positive resolution"));
    }
    let point = |alpha: f64| no_aux_point(base, n_edges, alpha);
    let mut jumps = Vec::new();
    let mut stack = vec![(alpha_lo, point(alpha_lo)?, alpha_hi, point(alpha_hi)?)];
    while let Some((a, pa, b, pb)) = stack.pop() {
        if pa.0 == pb.0 {
            continue;
        }
        let mid = 0.5 * (a + b);
        if b - a <= resolution || mid <= a || mid >= b {
            jumps.push(NCatJump {
                alpha_left: a,
                alpha_right: b,
                n_cat_left: pa.0,
                n_cat_right: pb.0,
                eta_r_left: pa.1,
                eta_r_right: pb.1,
            });
            continue;
        }
        let pm = point(mid)?;
        // Right half first so the left half is popped (and emitted) first.
        stack.push((mid, pm, b, pb));
        stack.push((a, pa, mid, pm));
    }
    Ok(jumps)
}

/// `(n_cat, eta_r)` for no-aux mode with the closed-form catalyst.
fn no_aux_point(base: &EdgeParams, n_edges: u32, alpha: f64) -> Result<(u32, f64)> {
    let problem = ConcentrationProblem::new(base.copies, alpha)?;
    if !problem.in_window() {
        return Err(Error::Domain(format!(
            "alpha = {alpha} is outside the catalysis window for n = {}",
            base.copies
        )));
    }
    let (c0, tail) = closed_form_c0(base.copies, alpha);
    let n_cat = n_cat_required(c0, alpha)?;
    let p_cat = (problem.one_minus_alpha_pow_n() / tail).min(1.0);
    let p_locc = problem.locc_probability();
    let (t0, p0, n) = (base.t0(), base.herald_probability, base.copies);
    let t_pri = n as f64 * t0 / p0;
    let t_cycle = p_cat * t_pri + (1.0 - p_cat) * (n + n_cat) as f64 * t0 / p0;
    let eta_r = (t_pri * waiting_factor(n_edges, p_locc)?) / (t_cycle * waiting_factor(n_edges, p_cat)?);
    Ok((n_cat, eta_r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = alpha_grid(0.55, 1.0 - 1e-6, 200).unwrap();
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.55);
        assert_eq!(g[199], 1.0 - 1e-6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(alpha_grid(0.5, 0.9, 10).is_err());
        assert!(alpha_grid(0.6, 0.9, 0).is_err());
        assert_eq!(alpha_grid(0.6, 0.9, 1).unwrap(), vec![0.6]);
    }

    #[test]
    fn rows_are_sorted_and_flagged() {
        let base = EdgeParams::new(2, 0.8);
        let alphas = [0.9, 0.6, 0.8];
        let rows = sweep_fig2(
            &base,
            4,
            &alphas,
            &[AuxConfig::none(), AuxConfig::aux_rich()],
            &[2],
            &RateOptions::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].mode, AuxMode::AuxRich);
        assert_eq!(rows[0].alpha, 0.6);
        assert_eq!(rows[0].flag, WindowFlag::OutsideWindow);
        assert_eq!(rows[0].eta_r, 1.0);
        assert_eq!(rows[1].flag, WindowFlag::Ok);
        assert_eq!(rows[3].mode, AuxMode::None);
        assert_eq!(rows[4].n_cat, Some(3));
    }

    #[test]
    fn csv_shape() {
        let base = EdgeParams::new(2, 0.8);
        let rows = sweep_fig2(&base, 32, &[0.6, 0.8], &[AuxConfig::aux_rich()], &[2], &RateOptions::default())
            .unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        for line in &lines {
            assert_eq!(line.split(',').count(), 15);
        }
        assert!(lines[1].ends_with("outside_window"));
        assert!(lines[1].contains(",,,"), "c0 and n_cat are blank: {}", lines[1]);
    }

    #[test]
    fn jumps_are_unit_and_downward() {
        let base = EdgeParams::new(2, 0.8);
        let jumps = locate_n_cat_jumps(&base, 32, 0.75, 0.95, 1e-12).unwrap();
        assert!(!jumps.is_empty());
        for j in &jumps {
            assert_eq!(j.n_cat_right, j.n_cat_left + 1);
            assert!(j.eta_r_right < j.eta_r_left);
        }
        let first = no_aux_point(&base, 32, 0.75).unwrap().0;
        let last = no_aux_point(&base, 32, 0.95).unwrap().0;
        assert_eq!(jumps.len() as u32, last - first);
    }
}
