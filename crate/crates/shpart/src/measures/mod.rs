//! Rank-based complexity measures, the residue, and product upper bounds.

mod bounds;
mod containment;
pub mod rank;
mod residue;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{
    enumerate_monomials, enumerate_monomials_in, monomial_count_or_zero, DerivativeMultiset, Field,
    Homogeneity, LinearMap, Polynomial,
};
use crate::error::{Error, Result};
use crate::random::{derive_seed, random_linear_map};

pub use bounds::{ambient_sp_bound, feasible_region, product_app_bound, product_sp_bound};
pub use containment::{containment_with_slack, derivative_space_containment, Containment};
pub use rank::{bareiss_rank, dense_rank, span_rank, Budget, RowSpace};
pub use residue::{
    deviation_at, residue, residue_bruteforce, residue_constrained, residue_report, ResidueReport,
    ResidueValue,
};

/// Field and size limits for a measure computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureConfig {
    pub field: Field,
    pub budget: Budget,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            field: Field::Rational,
            budget: Budget::default(),
        }
    }
}

impl MeasureConfig {
    pub fn with_field(field: Field) -> MeasureConfig {
        MeasureConfig {
            field,
            ..MeasureConfig::default()
        }
    }
}

/// A computed dimension with its matrix statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureResult {
    pub measure: String,
    pub k: u32,
    pub l: u32,
    pub n0: Option<u32>,
    pub dimension: usize,
    pub generator_count: usize,
    pub ambient_dim: BigUint,
    pub field_used: Field,
    /// The input was not homogeneous; the value is computed anyway.
    pub inhomogeneous: bool,
    /// The value certifies only a lower bound on the named measure.
    pub lower_bound: bool,
}

impl MeasureResult {
    pub fn to_json(&self) -> Value {
        let mut warnings = Vec::new();
        if self.inhomogeneous {
            warnings.push("inhomogeneous input");
        }
        json!({
            "measure": self.measure,
            "k": self.k,
            "l": self.l,
            "n0": self.n0,
            "dimension": self.dimension,
            "generators": self.generator_count,
            "ambient": self.ambient_dim.to_string(),
            "field": self.field_used.to_string(),
            "bound": if self.lower_bound { "lower" } else { "exact" },
            "warnings": warnings,
        })
    }
}

/// Columns available to order-`k` partials shifted by degree `l`: `M(n, e−k+l)` summed
/// over the distinct degrees `e >= k` of `p`.
fn ambient(p: &Polynomial, n: u32, k: u32, l: u32) -> BigUint {
    let mut degs: Vec<u32> = p.monomials().map(|m| m.degree()).collect();
    degs.sort_unstable();
    degs.dedup();
    degs.iter()
        .filter(|&&e| e >= k)
        .map(|&e| monomial_count_or_zero(n as u64, (e - k + l) as u64))
        .sum()
}

fn prepare(p: &Polynomial, cfg: &MeasureConfig) -> Result<(Polynomial, bool)> {
    let q = p.to_field(cfg.field)?;
    rank::check_prime_vs_degree(cfg.field, q.degree().unwrap_or(0))?;
    let inhomogeneous = q.homogeneity() == Homogeneity::Inhomogeneous;
    Ok((q, inhomogeneous))
}

/// All nonzero order-`k` partial derivatives, in graded-lex order of the multiset.
pub fn derivative_family(p: &Polynomial, k: u32) -> Result<Vec<Polynomial>> {
    let alphas = enumerate_monomials(p.nvars(), k);
    let ders: Vec<Polynomial> = alphas
        .into_par_iter()
        .map(|a| p.derivative(&DerivativeMultiset(a)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ders.into_iter().filter(|q| !q.is_zero()).collect())
}

fn independent_subset(polys: Vec<Polynomial>, field: Field) -> Result<Vec<Polynomial>> {
    let mut rs = RowSpace::new(field);
    let mut out = Vec::new();
    for q in polys {
        if rs.insert(&q)? {
            out.push(q);
        }
    }
    Ok(out)
}

fn rank_checked(polys: &[Polynomial], budget: &Budget) -> Result<usize> {
    rank::span_rank(polys, budget)
}

/// `SP_{k,l}(p) = dim⟨x^l · ∂^k p⟩`.
pub fn sp_measure(p: &Polynomial, k: u32, l: u32, cfg: &MeasureConfig) -> Result<MeasureResult> {
    let (p, inhomogeneous) = prepare(p, cfg)?;
    let n = p.nvars();
    let ders = derivative_family(&p, k)?;
    let amb = ambient(&p, n, k, l);
    let (dimension, generator_count) = if l == 0 {
        (rank_checked(&ders, &cfg.budget)?, ders.len())
    } else {
        let basis = independent_subset(ders, cfg.field)?;
        let shifts = enumerate_monomials(n, l);
        let rows_n = basis.len() * shifts.len();
        let cols_est = amb
            .clone()
            .min(BigUint::from(rows_n * p.num_terms().max(1)));
        let cells = BigUint::from(rows_n) * cols_est;
        if cells > BigUint::from(cfg.budget.cells) {
            return Err(Error::Budget(format!(
                "about {cells} matrix cells exceed {}",
                cfg.budget.cells
            )));
        }
        let rows: Vec<Polynomial> = basis
            .par_iter()
            .flat_map_iter(|b| shifts.iter().map(move |m| b.mul_monomial(m)))
            .collect();
        (rank_checked(&rows, &Budget::unlimited())?, rows.len())
    };
    Ok(MeasureResult {
        measure: "sp".into(),
        k,
        l,
        n0: None,
        dimension,
        generator_count,
        ambient_dim: amb,
        field_used: cfg.field,
        inhomogeneous,
        lower_bound: false,
    })
}

/// `PD_k(p) = SP_{k,0}(p)`.
pub fn pd_measure(p: &Polynomial, k: u32, cfg: &MeasureConfig) -> Result<MeasureResult> {
    let mut r = sp_measure(p, k, 0, cfg)?;
    r.measure = "pd".into();
    Ok(r)
}

fn projected_rank(ders: &[Polynomial], l: &LinearMap, budget: &Budget) -> Result<(usize, usize)> {
    let projected: Vec<Polynomial> = ders
        .par_iter()
        .map(|q| q.apply_linear_map(l))
        .collect::<Result<Vec<_>>>()?;
    let projected: Vec<Polynomial> = projected.into_iter().filter(|q| !q.is_zero()).collect();
    let count = projected.len();
    Ok((rank_checked(&projected, budget)?, count))
}

fn projected_ambient(p: &Polynomial, n0: u32, k: u32) -> BigUint {
    ambient(p, n0, k, 0)
}

/// `dim⟨π_L(∂^k p)⟩` for one fixed `L`: a certified lower bound on `APP_{k,n0}(p)`.
pub fn app_with_map(
    p: &Polynomial,
    k: u32,
    l: &LinearMap,
    cfg: &MeasureConfig,
) -> Result<MeasureResult> {
    let (p, inhomogeneous) = prepare(p, cfg)?;
    if l.images().len() < p.nvars() as usize {
        return Err(Error::Precondition(format!(
            "linear map covers {} of {} variables",
            l.images().len(),
            p.nvars()
        )));
    }
    let l = l.to_field(cfg.field)?;
    let ders = derivative_family(&p, k)?;
    let (dimension, generator_count) = projected_rank(&ders, &l, &cfg.budget)?;
    Ok(MeasureResult {
        measure: "app".into(),
        k,
        l: 0,
        n0: Some(l.n0()),
        dimension,
        generator_count,
        ambient_dim: projected_ambient(&p, l.n0(), k),
        field_used: cfg.field,
        inhomogeneous,
        lower_bound: true,
    })
}

/// Maximum of [`app_with_map`] over `trials` random maps with entries in `[-3, 3]`.
/// Trial `i` uses the sub-seed `derive_seed(seed, "app", i)`, so results are
/// non-decreasing in `trials` for a fixed seed.
pub fn app_sampled(
    p: &Polynomial,
    k: u32,
    n0: u32,
    trials: u32,
    seed: u64,
    cfg: &MeasureConfig,
) -> Result<MeasureResult> {
    if trials == 0 || n0 == 0 {
        return Err(Error::Precondition("trials and n0 must be positive".into()));
    }
    let (p, inhomogeneous) = prepare(p, cfg)?;
    let ders = derivative_family(&p, k)?;
    let mut best = (0usize, 0usize);
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "app", i as u64));
        let l = random_linear_map(&mut rng, p.nvars(), n0, cfg.field);
        let r = projected_rank(&ders, &l, &cfg.budget)?;
        if r.0 > best.0 || i == 0 {
            best = r;
        }
    }
    Ok(MeasureResult {
        measure: "app-sampled".into(),
        k,
        l: 0,
        n0: Some(n0),
        dimension: best.0,
        generator_count: best.1,
        ambient_dim: projected_ambient(&p, n0, k),
        field_used: cfg.field,
        inhomogeneous,
        lower_bound: true,
    })
}

/// `SkewP_{y,k}(p) = dim⟨[∂_m p]_{y=0} : m a degree-k monomial in y⟩`.
pub fn skewp_measure(
    p: &Polynomial,
    yvars: &[u32],
    k: u32,
    cfg: &MeasureConfig,
) -> Result<MeasureResult> {
    let (p, inhomogeneous) = prepare(p, cfg)?;
    let n = p.nvars();
    let mut ys: Vec<u32> = yvars.to_vec();
    ys.sort_unstable();
    ys.dedup();
    if let Some(&v) = ys.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::VariableOutOfRange(v, n));
    }
    let mut mask = vec![false; n as usize + 1];
    for &v in &ys {
        mask[v as usize] = true;
    }
    let polys: Vec<Polynomial> = enumerate_monomials_in(&ys, k)
        .into_par_iter()
        .map(|m| {
            p.derivative(&DerivativeMultiset(m))
                .map(|q| q.set_zero(&mask))
        })
        .collect::<Result<Vec<_>>>()?;
    let polys: Vec<Polynomial> = polys.into_iter().filter(|q| !q.is_zero()).collect();
    let rest = n - ys.len() as u32;
    let amb = match p.homogeneity() {
        Homogeneity::Degree(d) if d >= k => monomial_count_or_zero(rest as u64, (d - k) as u64),
        Homogeneity::Degree(_) | Homogeneity::Zero => BigUint::zero(),
        Homogeneity::Inhomogeneous => ambient(&p, rest, k, 0),
    };
    Ok(MeasureResult {
        measure: "skewp".into(),
        k,
        l: 0,
        n0: Some(rest),
        dimension: rank_checked(&polys, &cfg.budget)?,
        generator_count: polys.len(),
        ambient_dim: amb,
        field_used: cfg.field,
        inhomogeneous,
        lower_bound: false,
    })
}

/// Rank of an arbitrary family, reported as a measure result.
pub fn span_dimension(polys: &[Polynomial], cfg: &MeasureConfig) -> Result<MeasureResult> {
    let field = polys.first().map_or(cfg.field, |p| p.field());
    let dimension = rank_checked(polys, &cfg.budget)?;
    let mut cols: Vec<_> = polys.iter().flat_map(|p| p.monomials()).collect();
    cols.sort_unstable();
    cols.dedup();
    Ok(MeasureResult {
        measure: "span".into(),
        k: 0,
        l: 0,
        n0: None,
        dimension,
        generator_count: polys.len(),
        ambient_dim: BigUint::from(cols.len()),
        field_used: field,
        inhomogeneous: false,
        lower_bound: false,
    })
}
