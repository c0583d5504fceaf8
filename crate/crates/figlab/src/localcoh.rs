//! Local cohomology via the shift-and-truncate complex, torsion submodules,
//! the stable Ext description, and the combined invariant report.

use std::sync::Arc;

use crate::error::{FigError, Result};
use crate::field::Field;
use crate::functors::tau_b;
use crate::group::FiniteGroup;
use crate::homology::{
    classical_depth, derivative_depth, generating_degree, h0_dims, max_support, nagpal_number,
    regularity, status_for, torsion_degree, CertStatus, CertifiedValue, Extent,
};
use crate::matrix::Matrix;
use crate::module::{build_free, submodule, ModuleMap, WindowedModule};
use crate::rep::GnRep;

/// The largest submodule supported in finitely many degrees: degreewise the
/// kernel of the composite transition to the top of the window. These
/// kernels are closed under both the action and the transitions, so they
/// form a submodule.
pub fn torsion_submodule<F: Field>(
    v: &Arc<WindowedModule<F>>,
) -> Result<(Arc<WindowedModule<F>>, ModuleMap<F>)> {
    let w = v.window();
    let subs = (0..=w)
        .map(|n| v.composite_transition(n, w).kernel_basis())
        .collect::<Vec<_>>();
    submodule(v, &subs)
}

/// The resolution of `V` by filtered modules obtained from iterated
/// shift-and-truncate steps: `F^0 = shift_{N(V)} V`, each later term the
/// shift of the previous cokernel by its own stabilisation number. The
/// generating degree drops strictly at each step, so the complex is finite.
pub struct ShiftComplex<F: Field> {
    /// `b_i`: the shift applied to produce `terms[i]`.
    pub shifts: Vec<usize>,
    /// `F^i`, each filtered.
    pub terms: Vec<Arc<WindowedModule<F>>>,
    /// `Q^(i)`: the cokernel of the canonical map into `terms[i]`.
    pub quotients: Vec<Arc<WindowedModule<F>>>,
    /// `F^i -> F^{i+1}`.
    pub differentials: Vec<ModuleMap<F>>,
    pub status: CertStatus,
}

pub fn shift_complex<F: Field>(v: &Arc<WindowedModule<F>>) -> Result<ShiftComplex<F>> {
    let mut shifts = Vec::new();
    let mut terms: Vec<Arc<WindowedModule<F>>> = Vec::new();
    let mut quotients: Vec<Arc<WindowedModule<F>>> = Vec::new();
    let mut differentials = Vec::new();
    let mut status = CertStatus::Certified;
    let mut cur = Arc::clone(v);
    let mut prev_proj: Option<ModuleMap<F>> = None;
    let max_steps = max_support(&h0_dims(v)).as_finite().unwrap_or(-1) + 2;
    for _ in 0..=max_steps.max(0) {
        if cur.is_zero() {
            break;
        }
        let n = match nagpal_number(&cur) {
            Ok(n) => n,
            Err(FigError::WindowExhausted { .. }) => {
                status = CertStatus::WindowExact;
                break;
            }
            Err(e) => return Err(e),
        };
        status = status.and(n.status);
        let b = n.value.as_finite().expect("stabilisation number is finite") as usize;
        let tb = match tau_b(&cur, b) {
            Ok(t) => t,
            Err(FigError::WindowExhausted { .. }) => {
                status = CertStatus::WindowExact;
                break;
            }
            Err(e) => return Err(e),
        };
        let f_i = Arc::clone(&tb.target);
        let (q, proj) = tb.cokernel()?;
        if let Some(pp) = prev_proj {
            differentials.push(tb.compose(&pp));
        }
        shifts.push(b);
        terms.push(f_i);
        quotients.push(Arc::clone(&q));
        prev_proj = Some(proj);
        cur = q;
    }
    if !cur.is_zero() {
        status = CertStatus::WindowExact;
    }
    Ok(ShiftComplex { shifts, terms, quotients, differentials, status })
}

/// One graded piece of local cohomology, as a module.
pub struct LocalCohomology<F: Field> {
    pub modules: Vec<Arc<WindowedModule<F>>>,
    pub status: CertStatus,
}

/// `H^0_m(V)` is the torsion submodule; `H^i_m(V)` for `i >= 1` is the
/// torsion submodule of the `(i-1)`-st cokernel of the shift complex.
pub fn local_cohomology<F: Field>(
    v: &Arc<WindowedModule<F>>,
    i_max: usize,
) -> Result<LocalCohomology<F>> {
    let mut modules = Vec::with_capacity(i_max + 1);
    let (t, _) = torsion_submodule(v)?;
    modules.push(t);
    let complex = shift_complex(v)?;
    let mut status = complex.status;
    for i in 1..=i_max {
        if i - 1 < complex.quotients.len() {
            let q = &complex.quotients[i - 1];
            let (t, _) = torsion_submodule(q)?;
            status = status.and(status_for(q, 1));
            modules.push(t);
        } else {
            modules.push(Arc::new(WindowedModule::zero(
                v.field,
                Arc::clone(&v.group),
                0,
            )));
        }
    }
    Ok(LocalCohomology { modules, status })
}

/// Support degrees `td(H^i_m(V))` for `i = 0..=i_max`.
pub fn local_cohomology_tds<F: Field>(
    v: &Arc<WindowedModule<F>>,
    i_max: usize,
) -> Result<(Vec<Extent>, CertStatus)> {
    let lc = local_cohomology(v, i_max)?;
    Ok((lc.modules.iter().map(|m| max_support(&m.dims)).collect(), lc.status))
}

/// The truncated free module `M(r)/m^n`: the free module on the regular
/// representation at degree `r` with every degree at or above `r + n`
/// killed.
pub fn m_power_quotient<F: Field>(
    field: F,
    group: &Arc<FiniteGroup>,
    r: usize,
    n: usize,
    window: usize,
) -> Result<Arc<WindowedModule<F>>> {
    assert!(n >= 1, "the power must be positive");
    let rep = GnRep::regular(field, Arc::clone(group), r)?;
    let free = build_free(&rep, window)?;
    let cut = r + n;
    let dims: Vec<usize> =
        (0..=window).map(|s| if s < cut { free.dims[s] } else { 0 }).collect();
    let actions = (0..=window)
        .map(|s| {
            if s < cut {
                free.actions[s].clone()
            } else {
                GnRep::zero(field, Arc::clone(group), s)
            }
        })
        .collect();
    let trans = (0..window)
        .map(|s| {
            if s + 1 < cut {
                free.trans[s].clone()
            } else {
                Matrix::zeros(field, dims[s + 1], dims[s])
            }
        })
        .collect();
    Ok(Arc::new(WindowedModule { field, group: Arc::clone(group), dims, actions, trans }))
}

/// `dim Hom(M(r)/m^n, V)` per degree `r`: the kernel of the length-`n`
/// composite transition out of degree `r`. `None` where the window cannot
/// decide.
pub fn fi_hom_power<F: Field>(v: &WindowedModule<F>, n: usize) -> Vec<Option<usize>> {
    (0..=v.window())
        .map(|r| {
            if r + n <= v.window() {
                Some(v.composite_transition(r, r + n).kernel_basis().dim())
            } else {
                None
            }
        })
        .collect()
}

/// `dim Ext^i(M(r)/m^n, V)` per degree `r`. `None` where the window cannot
/// support the computation.
pub fn fi_ext_power<F: Field>(
    v: &WindowedModule<F>,
    n: usize,
    i: usize,
) -> Result<Vec<Option<usize>>> {
    let mut out = Vec::with_capacity(v.window() + 1);
    for r in 0..=v.window() {
        if r + n + i <= v.window() {
            let t = m_power_quotient(v.field, &v.group, r, n, v.window())?;
            out.push(Some(crate::homology::ext_dims(&t, v, i)?[i]));
        } else {
            out.push(None);
        }
    }
    Ok(out)
}

/// The stable value of `dim Ext^i(M(r)/m^n, V)` as `n` grows, detected by
/// two consecutive equal values; `None` if the window runs out first.
pub fn stabilized_ext_power<F: Field>(
    v: &WindowedModule<F>,
    r: usize,
    i: usize,
) -> Result<Option<usize>> {
    let mut prev: Option<usize> = None;
    for n in 1.. {
        if r + n + i > v.window() {
            return Ok(None);
        }
        let t = m_power_quotient(v.field, &v.group, r, n, v.window())?;
        let val = crate::homology::ext_dims(&t, v, i)?[i];
        if prev == Some(val) {
            return Ok(Some(val));
        }
        prev = Some(val);
    }
    unreachable!()
}

/// Everything the conjecture table needs for one module.
pub struct InvariantReport {
    pub gd: CertifiedValue,
    pub td: CertifiedValue,
    pub reg: CertifiedValue,
    /// `N(V)` found by direct search.
    pub n_direct: CertifiedValue,
    /// `N(V)` from local cohomology: `max td(H^i_m) + 1`, or `0` when all
    /// vanish.
    pub n_formula: Extent,
    pub depth_lc: Extent,
    pub depth_classical: CertifiedValue,
    pub depth_derivative: CertifiedValue,
    pub cohomological_dimension: Extent,
    /// `td(H^i_m(V))` for `i = 0..=i_max`.
    pub lc_td: Vec<Extent>,
    /// `max_i (td(H^i_m) + i)`.
    pub conjecture_rhs: Extent,
    /// `reg - conjecture_rhs` when both sides are finite (or both absent).
    pub gap: Option<i64>,
    pub certified: bool,
    pub window_used: usize,
}

/// Default top cohomological index: one past the generating degree, which
/// covers every potentially nonzero `H^i_m`.
pub fn lc_i_max<F: Field>(v: &WindowedModule<F>) -> usize {
    let gd = max_support(&h0_dims(v)).as_finite().unwrap_or(0).max(0) as usize;
    gd + 1
}

pub fn invariant_report<F: Field>(v: &Arc<WindowedModule<F>>) -> Result<InvariantReport> {
    let gd = generating_degree(v);
    let td = torsion_degree(v);
    let reg = regularity(v)?;
    let n_direct = nagpal_number(v)?;
    let i_max = lc_i_max(v);
    let (lc_td, lc_status) = local_cohomology_tds(v, i_max)?;

    let n_formula = lc_td
        .iter()
        .fold(Extent::NegInf, |acc, t| acc.max(*t))
        .plus(1)
        .max(Extent::Finite(0));
    let depth_lc = lc_td
        .iter()
        .enumerate()
        .find(|(_, t)| !t.is_neg_inf())
        .map(|(i, _)| Extent::finite(i))
        .unwrap_or(Extent::PosInf);
    let cohomological_dimension = lc_td
        .iter()
        .enumerate()
        .rev()
        .find(|(_, t)| !t.is_neg_inf())
        .map(|(i, _)| Extent::finite(i))
        .unwrap_or(Extent::NegInf);
    let conjecture_rhs = lc_td
        .iter()
        .enumerate()
        .fold(Extent::NegInf, |acc, (i, t)| acc.max(t.plus(i as i64)));

    let depth_classical = classical_depth(v)?;
    let depth_derivative = derivative_depth(v, lc_i_max(v) + 1)?;

    let gap = match (reg.value, conjecture_rhs) {
        (Extent::Finite(l), Extent::Finite(r)) => Some(l - r),
        (Extent::NegInf, Extent::NegInf) => Some(0),
        _ => None,
    };
    let certified = [gd.status, td.status, reg.status, n_direct.status, lc_status]
        .iter()
        .all(|s| *s == CertStatus::Certified)
        && depth_classical.status == CertStatus::Certified;
    Ok(InvariantReport {
        gd,
        td,
        reg,
        n_direct,
        n_formula,
        depth_lc,
        depth_classical,
        depth_derivative,
        cohomological_dimension,
        lc_td,
        conjecture_rhs,
        gap,
        certified,
        window_used: v.window(),
    })
}
