//! Elek rank over ℚ: the dimension of the image of `⟨F⁻¹A⟩` in the quotient
//! module, computed two independent ways on growing auxiliary windows `E`.
//!
//! * span side: `dim V − dim(V ∩ ℚΓ^{1×m}f)`, where the intersection is
//!   approximated by `{gf : g ∈ ℚ[E]^{1×m}}`; nonincreasing in `E`.
//! * dual side: restrictions to `F⁻¹` of functionals `h` on `E` that kill every
//!   relation translate `s·r_j` supported in `E`; nonincreasing in `E`.

use serde::Serialize;

use super::config::EngineConfig;
use super::presentation::{GeneratorList, ModulePresentation};
use super::span::{assemble, translates, SparseVec};
use crate::error::{Error, Result};
use crate::exactla::{rank_q_with, RankCertificate};
use crate::groupring::RingMatrix;
use crate::groups::{ElementSet, FolnerSet, GroupElement, GroupSpec};

/// Result of a window-growth computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizedDim {
    /// Value at the last window tried.
    pub value: usize,
    /// Two consecutive windows gave the same value.
    pub stabilized: bool,
    /// Value at each window tried, in order.
    pub history: Vec<usize>,
    /// Size of the last auxiliary window `E`.
    pub window_size: usize,
    pub certificate: Option<RankCertificate>,
}

impl StabilizedDim {
    fn exact(value: usize, window_size: usize) -> Self {
        StabilizedDim { value, stabilized: true, history: vec![value], window_size, certificate: None }
    }
}

fn grow(group: &GroupSpec, e: &ElementSet) -> ElementSet {
    group.product_set(e, &group.unit_box())
}

fn check_budget(e: &ElementSet, factor: usize, cfg: &EngineConfig) -> Result<()> {
    let needed = e.len() as u128 * factor.max(1) as u128;
    if needed > cfg.max_window_elements as u128 {
        return Err(Error::Budget { needed, budget: cfg.max_window_elements as u128 });
    }
    Ok(())
}

/// Runs `step` on `E₀ ⊂ E₁ ⊂ …` until two consecutive values agree, the step
/// limit is reached, or the window budget runs out (the last two are flagged).
fn stabilize(
    group: &GroupSpec,
    start: ElementSet,
    factor: usize,
    cfg: &EngineConfig,
    mut step: impl FnMut(&ElementSet) -> (usize, RankCertificate),
) -> StabilizedDim {
    let mut e = start;
    let mut history = Vec::new();
    let mut certificate = None;
    let mut window_size = e.len();
    for i in 0..cfg.erank_max_steps.max(2) {
        if i > 0 {
            let next = grow(group, &e);
            if check_budget(&next, factor, cfg).is_err() {
                break;
            }
            e = next;
        } else if check_budget(&e, factor, cfg).is_err() {
            break;
        }
        let (value, cert) = step(&e);
        window_size = e.len();
        certificate = Some(cert);
        history.push(value);
        let n = history.len();
        if n >= 2 && history[n - 1] == history[n - 2] {
            return StabilizedDim { value, stabilized: true, history, window_size, certificate };
        }
    }
    StabilizedDim { value: history.last().copied().unwrap_or(0), stabilized: false, history, window_size, certificate }
}

fn rows_without_denominators(f: &RingMatrix) -> GeneratorList {
    GeneratorList::rows_of(&f.clear_denominators())
}

/// Dimension of the image of `span{t·a : a ∈ A, t ∈ shifts}` in
/// `ℚΓ^{1×n} / ℚΓ^{1×m}f`, on growing windows `E ⊇ S·K⁻¹` where `S` is the
/// support of those vectors and `K` the support of `f`.
pub fn quotient_span_rank(
    gens: &GeneratorList,
    shifts: &[GroupElement],
    f: &RingMatrix,
    cfg: &EngineConfig,
) -> Result<StabilizedDim> {
    let group = gens.group().clone();
    let v = translates(gens, shifts);
    let (vm, _) = assemble(&[&v]);
    let v_rank = rank_q_with(&vm, &cfg.rank_options(1));
    if f.is_zero() || f.rows() == 0 {
        let mut out = StabilizedDim::exact(v_rank.rank, 0);
        out.certificate = Some(v_rank);
        return Ok(out);
    }
    let rows = rows_without_denominators(f);
    let s: ElementSet = v.iter().flatten().map(|((_, g), _)| g.clone()).collect();
    let k_inv = group.inverse_set(f.support());
    let start = if s.is_empty() { k_inv.clone() } else { group.product_set(&s, &k_inv) };
    Ok(stabilize(&group, start, f.rows(), cfg, |e| {
        let elems: Vec<GroupElement> = e.iter().cloned().collect();
        let g = translates(&rows, &elems);
        let (gm, _) = assemble(&[&g]);
        let (both, _) = assemble(&[&v, &g]);
        let opts = cfg.rank_options(e.len() as u64);
        let rg = rank_q_with(&gm, &opts);
        let rb = rank_q_with(&both, &opts);
        (rb.rank - rg.rank, rb)
    }))
}

/// `dim_ℚ ⟨F⁻¹A⟩` inside the quotient, `A` the canonical generators.
pub fn erank_span_dim(p: &ModulePresentation, window: &FolnerSet, cfg: &EngineConfig) -> Result<StabilizedDim> {
    let full = p.n() * window.len();
    if p.m() == 0 || p.relations().is_zero() {
        return Ok(StabilizedDim::exact(full, window.len()));
    }
    let shifts: Vec<GroupElement> = p.group().inverse_set(window.elements()).into_iter().collect();
    quotient_span_rank(&p.canonical_generators(), &shifts, p.relations(), cfg)
}

/// `dim_ℚ(M*|_{F⁻¹})`: restrictions to `F⁻¹` of solutions of the dual system.
pub fn erank_dual_restriction_dim(
    p: &ModulePresentation,
    window: &FolnerSet,
    cfg: &EngineConfig,
) -> Result<StabilizedDim> {
    let n = p.n();
    let full = n * window.len();
    let f = p.relations();
    if p.m() == 0 || f.is_zero() {
        return Ok(StabilizedDim::exact(full, window.len()));
    }
    let group = p.group().clone();
    let rows = rows_without_denominators(f);
    let f_inv: ElementSet = group.inverse_set(window.elements());
    let k = f.support().clone();
    let k_inv = group.inverse_set(&k);
    let start = group.product_set(&group.product_set(&f_inv, &k_inv), &k);
    let row_supports: Vec<(usize, ElementSet, ElementSet)> = (0..f.rows())
        .filter_map(|j| {
            let kj = f.row_support(j);
            (!kj.is_empty()).then(|| {
                let kj_inv = group.inverse_set(&kj);
                (j, kj, kj_inv)
            })
        })
        .collect();
    Ok(stabilize(&group, start, f.rows(), cfg, |e| {
        let mut constraints: Vec<SparseVec> = Vec::new();
        for (j, kj, kj_inv) in &row_supports {
            let admissible: Vec<GroupElement> = group
                .product_set(e, kj_inv)
                .into_iter()
                .filter(|s| kj.iter().all(|u| e.contains(&group.op(s, u))))
                .collect();
            let single = GeneratorList::new(&group, n, vec![rows.vectors()[*j].clone()]).expect("row of f");
            constraints.extend(translates(&single, &admissible));
        }
        let (c, columns) = assemble(&[&constraints]);
        let opts = cfg.rank_options(e.len() as u64 ^ 0xd0a1);
        let rc = rank_q_with(&c, &opts);
        let outside: Vec<bool> = columns.iter().map(|(_, t)| !f_inv.contains(t)).collect();
        let c_out = c.select_columns(|i| outside[i]);
        let rc_out = rank_q_with(&c_out, &opts);
        (full + rc_out.rank - rc.rank, rc)
    }))
}
