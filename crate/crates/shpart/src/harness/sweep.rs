use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{rational_string, Field, LinearMap, Polynomial};
use crate::error::{Error, Result};
use crate::hardpolys::{
    construct_unbiased_word, imm_polynomial, monomial_and_vandermonde, nw_polynomial,
    nw_polynomial_wrapping, p_sigma, power_of_quadratic, word_polynomial,
};
use crate::measures::{
    ambient_sp_bound, app_with_map, pd_measure, product_sp_bound, residue, skewp_measure,
    sp_measure, Budget, MeasureConfig, MeasureResult,
};
use crate::random::{random_linear_map, rng_for};

pub const SWEEP_FAMILIES: [&str; 6] = ["nw", "imm", "word", "psigma", "monomial", "quadpower"];
const MEASURES: [&str; 4] = ["pd", "sp", "app", "skewp"];

/// Values of one grid parameter: an explicit list or an inclusive range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridRange {
    List(Vec<u64>),
    Range { from: u64, to: u64 },
}

impl GridRange {
    fn values(&self) -> Vec<u64> {
        match self {
            GridRange::List(v) => v.clone(),
            GridRange::Range { from, to } => (*from..=*to).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepBudget {
    pub terms: Option<usize>,
    pub cells: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: String,
    pub grids: BTreeMap<String, GridRange>,
    #[serde(default)]
    pub measures: Vec<String>,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget: Option<SweepBudget>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SweepOptions {
    pub field: Option<Field>,
    /// Overrides the spec seed when set.
    pub seed: Option<u64>,
    /// Appends a `runtime_ms` column; the CSV is then no longer reproducible byte for byte.
    pub timing: bool,
}

impl SweepSpec {
    pub fn from_json(s: &str) -> Result<SweepSpec> {
        let spec: SweepSpec = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !SWEEP_FAMILIES.contains(&self.family.as_str()) {
            return Err(Error::InvalidParams(format!(
                "unknown family '{}' ({})",
                self.family,
                SWEEP_FAMILIES.join(", ")
            )));
        }
        if self.grids.is_empty() {
            return Err(Error::InvalidParams(
                "grids must name at least one parameter".into(),
            ));
        }
        if let Some(m) = self
            .measures
            .iter()
            .find(|m| !MEASURES.contains(&m.as_str()))
        {
            return Err(Error::InvalidParams(format!(
                "unknown measure '{m}' ({})",
                MEASURES.join(", ")
            )));
        }
        if let Some(b) = &self.budget {
            if b.terms == Some(0) || b.cells == Some(0) {
                return Err(Error::InvalidParams("budget caps must be positive".into()));
            }
        }
        Ok(())
    }

    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(sb) = &self.budget {
            b.terms = sb.terms.unwrap_or(b.terms);
            b.cells = sb.cells.unwrap_or(b.cells);
        }
        b
    }

    fn points(&self) -> Vec<BTreeMap<String, u64>> {
        let mut pts = vec![BTreeMap::new()];
        for (name, range) in &self.grids {
            let vals = range.values();
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |&v| {
                        let mut p = p.clone();
                        p.insert(name.clone(), v);
                        p
                    })
                })
                .collect();
        }
        pts
    }
}

fn param(p: &BTreeMap<String, u64>, name: &str) -> Result<u64> {
    p.get(name)
        .copied()
        .ok_or_else(|| Error::InvalidParams(format!("grid is missing parameter '{name}'")))
}

fn small(p: &BTreeMap<String, u64>, name: &str) -> Result<u32> {
    u32::try_from(param(p, name)?).map_err(|_| Error::InvalidParams(format!("{name} out of range")))
}

/// A constructed instance plus what the measures need beyond the polynomial.
struct Instance {
    poly: Polynomial,
    map: Option<LinearMap>,
    yvars: Option<Vec<u32>>,
    wrapped: bool,
}

fn build(family: &str, p: &BTreeMap<String, u64>, field: Field, b: &Budget) -> Result<Instance> {
    let plain = |poly| Instance {
        poly,
        map: None,
        yvars: None,
        wrapped: false,
    };
    Ok(match family {
        "nw" => {
            let (q, d, k) = (param(p, "q")?, param(p, "d")?, param(p, "k")?);
            if d > q {
                Instance {
                    wrapped: true,
                    ..plain(nw_polynomial_wrapping(q, d, k, field, b)?)
                }
            } else {
                plain(nw_polynomial(q, d, k, field, b)?)
            }
        }
        "imm" => plain(imm_polynomial(small(p, "n")?, small(p, "d")?, field, b)?),
        "word" => {
            let w = construct_unbiased_word(param(p, "h")?, param(p, "d")?, param(p, "k")?)?;
            let poly = word_polynomial(&w, field, b)?;
            Instance {
                yvars: Some(w.positive_vars()),
                ..plain(poly)
            }
        }
        "psigma" => {
            let ps = p_sigma(small(p, "n")?, small(p, "d")?, small(p, "delta")?, field, b)?;
            Instance {
                map: Some(ps.projection),
                ..plain(ps.polynomial)
            }
        }
        "monomial" => {
            let n = small(p, "n")?;
            let n0 = p.get("n0").map_or(Ok(n), |_| small(p, "n0"))?;
            let (poly, l) = monomial_and_vandermonde(n, n0, field)?;
            Instance {
                map: Some(l),
                ..plain(poly)
            }
        }
        "quadpower" => plain(power_of_quadratic(
            small(p, "n")?,
            small(p, "e")?,
            field,
            b,
        )?),
        _ => return Err(Error::InvalidParams(format!("unknown family '{family}'"))),
    })
}

fn order(p: &BTreeMap<String, u64>) -> Result<u32> {
    if p.contains_key("order") {
        small(p, "order")
    } else {
        small(p, "k")
    }
}

fn measure(
    name: &str,
    inst: &Instance,
    p: &BTreeMap<String, u64>,
    cfg: &MeasureConfig,
    seed: u64,
    idx: u64,
) -> Result<MeasureResult> {
    let k = order(p)?;
    let n = inst.poly.nvars();
    match name {
        "pd" => pd_measure(&inst.poly, k, cfg),
        "sp" => sp_measure(
            &inst.poly,
            k,
            p.get("l").map_or(Ok(0), |_| small(p, "l"))?,
            cfg,
        ),
        "app" => match &inst.map {
            Some(l) => app_with_map(&inst.poly, k, l, cfg),
            None => {
                let n0 = small(p, "n0")?;
                let l = random_linear_map(&mut rng_for(seed, "sweep-app", idx), n, n0, cfg.field);
                app_with_map(&inst.poly, k, &l, cfg)
            }
        },
        "skewp" => {
            let y: Vec<u32> = inst.yvars.clone().unwrap_or_else(|| (1..=n / 2).collect());
            skewp_measure(&inst.poly, &y, k, cfg)
        }
        _ => Err(Error::InvalidParams(format!("unknown measure '{name}'"))),
    }
}

fn status_of(e: &Error) -> String {
    match e {
        Error::Budget(_) => "budget".into(),
        e => format!("invalid: {e}"),
    }
}

fn run_point(
    spec: &SweepSpec,
    p: &BTreeMap<String, u64>,
    field: Field,
    seed: u64,
    idx: u64,
) -> Vec<String> {
    let budget = spec.budget();
    let cfg = MeasureConfig { field, budget };
    let blanks = 3 + 2 * spec.measures.len() + 3;
    let mut row = Vec::with_capacity(blanks + 1);
    let inst = match build(&spec.family, p, field, &budget) {
        Ok(i) => i,
        Err(e) => {
            row.resize(blanks, String::new());
            row.push(status_of(&e));
            return row;
        }
    };
    let d = inst.poly.degree();
    row.push(inst.poly.nvars().to_string());
    row.push(d.map_or(String::new(), |d| d.to_string()));
    row.push(inst.poly.num_terms().to_string());
    let mut status = if inst.wrapped {
        "wrapped".to_string()
    } else {
        "ok".to_string()
    };
    for m in &spec.measures {
        match measure(m, &inst, p, &cfg, seed, idx) {
            Ok(r) => {
                row.push(r.dimension.to_string());
                row.push(r.ambient_dim.to_string());
            }
            Err(e) => {
                row.push(String::new());
                row.push(String::new());
                if status == "ok" || status == "wrapped" {
                    status = status_of(&e);
                }
            }
        }
    }
    let n = inst.poly.nvars() as u64;
    let k = order(p).ok().map(u64::from);
    let l = p.get("l").copied().unwrap_or(0);
    match (d, k) {
        (Some(d), Some(k)) if (k as u32) <= d => {
            let d = d as u64;
            row.push(
                product_sp_bound(n, &[d], k, l).map_or(String::new(), |b: BigUint| b.to_string()),
            );
            row.push(ambient_sp_bound(n, d, k, l).to_string());
            row.push(residue(k, &[d]).map_or(String::new(), |r| rational_string(&r.value)));
        }
        _ => row.extend([String::new(), String::new(), String::new()]),
    }
    row.push(status);
    row
}

/// Runs every grid point and returns the CSV text; points are computed in
/// parallel and written in grid order.
pub fn run_sweep(spec: &SweepSpec, opts: &SweepOptions) -> Result<String> {
    spec.validate()?;
    let field = opts.field.unwrap_or(Field::Rational);
    let seed = opts.seed.or(spec.seed).unwrap_or(42);
    let params: Vec<&String> = spec.grids.keys().collect();
    let mut header: Vec<String> = vec!["family".into()];
    header.extend(params.iter().map(|s| s.to_string()));
    header.extend(["nvars", "degree", "terms"].map(String::from));
    for m in &spec.measures {
        header.push(format!("{m}_dim"));
        header.push(format!("{m}_ambient"));
    }
    header.extend(["product_sp_bound", "ambient_sp_bound", "residue", "status"].map(String::from));
    if opts.timing {
        header.push("runtime_ms".into());
    }
    let points = spec.points();
    let rows: Vec<Vec<String>> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let start = Instant::now();
            let mut row = vec![spec.family.clone()];
            row.extend(params.iter().map(|k| p[*k].to_string()));
            row.extend(run_point(spec, p, field, seed, i as u64));
            if opts.timing {
                row.push(start.elapsed().as_millis().to_string());
            }
            row
        })
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidParams(format!("csv: {e}"));
    w.write_record(&header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidParams(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}
