//! `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment. Auxiliary paths are numbered
//! groups `aux.<i>.alpha`, `aux.<i>.P` and `aux.<i>.T_s`.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use catnet::network::{AuxConfig, AuxMode, AuxPath, EdgeParams};
use catnet::sim::{SimConfig, SimMode};

const SCALAR_KEYS: &[&str] = &[
    "n_edges",
    "n",
    "alpha",
    "catalyst_dim",
    "L0_km",
    "c_f_km_s",
    "P0",
    "aux_mode",
    "initial_stock",
    "stock_capacity",
    "mode",
    "max_slots",
    "trials",
    "seed",
    "p_cat",
];
const AUX_FIELDS: &[&str] = &["alpha", "P", "T_s"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = KeyValues::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`, got `{line}`", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            check_key(key).with_context(|| format!("line {}", i + 1))?;
            if value.is_empty() {
                bail!("line {}: empty value for `{key}`", i + 1);
            }
            if kv.entries.insert(key.to_string(), value.to_string()).is_some() {
                bail!("line {}: duplicate key `{key}`", i + 1);
            }
        }
        Ok(kv)
    }

    /// Command-line values replace file values.
    pub fn set(&mut self, key: &str, value: impl Display) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.entries
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("invalid value `{v}` for `{key}`: {e}")))
            .transpose()
    }

    fn require<T>(&self, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key)?.ok_or_else(|| anyhow!("missing required key `{key}`"))
    }

    fn or<T>(&self, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Physical layer with defaults; `n` and `alpha` are required.
    pub fn edge(&self) -> Result<EdgeParams> {
        let base = EdgeParams::new(self.require("n")?, self.require("alpha")?);
        Ok(EdgeParams {
            length_km: self.or("L0_km", base.length_km)?,
            fiber_speed_km_s: self.or("c_f_km_s", base.fiber_speed_km_s)?,
            herald_probability: self.or("P0", base.herald_probability)?,
            catalyst_dim: self.or("catalyst_dim", base.catalyst_dim)?,
            ..base
        })
    }

    /// Physical layer only, for commands that take `n` and `alpha` as flags.
    pub fn physical(&self, copies: u32, alpha: f64) -> Result<EdgeParams> {
        let base = EdgeParams::new(copies, alpha);
        Ok(EdgeParams {
            length_km: self.or("L0_km", base.length_km)?,
            fiber_speed_km_s: self.or("c_f_km_s", base.fiber_speed_km_s)?,
            herald_probability: self.or("P0", base.herald_probability)?,
            ..base
        })
    }

    pub fn aux_paths(&self) -> Result<Vec<AuxPath>> {
        let mut ids: Vec<u32> = self
            .entries
            .keys()
            .filter_map(|k| k.strip_prefix("aux."))
            .filter_map(|rest| rest.split('.').next()?.parse().ok())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.iter()
            .map(|i| {
                Ok(AuxPath {
                    alpha: self.require(&format!("aux.{i}.alpha"))?,
                    gen_probability: self.require(&format!("aux.{i}.P"))?,
                    gen_time_s: self.require(&format!("aux.{i}.T_s"))?,
                })
            })
            .collect()
    }

    /// `aux_mode` defaults to `finite` when paths are given, else `aux_rich`.
    pub fn aux(&self) -> Result<AuxConfig> {
        let paths = self.aux_paths()?;
        let default = if paths.is_empty() { AuxMode::AuxRich } else { AuxMode::Finite };
        let mode = self.or("aux_mode", default)?;
        if mode != AuxMode::Finite && !paths.is_empty() {
            bail!("auxiliary paths given but aux_mode is {mode}");
        }
        let aux = AuxConfig { mode, paths };
        aux.validate()?;
        Ok(aux)
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let edge = self.edge()?;
        let aux = self.aux()?;
        let mode: SimMode = self.require("mode")?;
        let defaults = SimConfig::new(self.require("n_edges")?, edge, aux, mode);
        let stock_capacity = match self.entries.get("stock_capacity").map(String::as_str) {
            None | Some("unlimited") => None,
            Some(_) => Some(self.require("stock_capacity")?),
        };
        let cfg = SimConfig {
            initial_stock: self.or("initial_stock", defaults.initial_stock)?,
            stock_capacity,
            max_slots: self.or("max_slots", defaults.max_slots)?,
            trials: self.or("trials", defaults.trials)?,
            seed: self.or("seed", defaults.seed)?,
            p_cat_override: self.get("p_cat")?,
            ..defaults
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn check_key(key: &str) -> Result<()> {
    if SCALAR_KEYS.contains(&key) {
        return Ok(());
    }
    if let Some(rest) = key.strip_prefix("aux.") {
        if let Some((id, field)) = rest.split_once('.') {
            if id.parse::<u32>().is_ok() && AUX_FIELDS.contains(&field) {
                return Ok(());
            }
        }
    }
    bail!("unknown key `{key}`")
}
