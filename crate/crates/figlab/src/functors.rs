//! The four functors of the calculus: shift, derivative, induction and
//! coinduction.
//!
//! Window bookkeeping (`D` = input window):
//!   - `shift`:      `D -> D - 1`
//!   - `derivative`: `D -> D - 1` (cokernel of the canonical map into the shift)
//!   - `induce`:     `D -> D + 1`
//!   - `coinduce`:   `D -> D - 1`

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{FigError, Result};
use crate::field::Field;
use crate::group::{letter_element, GnElement, WreathLetter};
use crate::matrix::Matrix;
use crate::module::{check_dim, quotient_with_sections, ModuleMap, WindowedModule};
use crate::rep::{CosetTable, GnRep};

/// `shift(V)_n = V_{n+1}`: the action restricts along the standard embedding
/// and the transition twists by the top transposition,
/// `t^shift_n = rho_{n+2}(s_{n+1}) . t_{n+1}`.
pub fn shift<F: Field>(v: &WindowedModule<F>) -> Result<WindowedModule<F>> {
    let d = v.window();
    if d == 0 {
        return Err(FigError::WindowExhausted { needed: 1, have: 0 });
    }
    let field = v.field;
    let group = Arc::clone(&v.group);
    let dims: Vec<usize> = (1..=d).map(|n| v.dims[n]).collect();
    let actions: Vec<GnRep<F>> = (1..=d).map(|n| v.actions[n].restrict()).collect();
    let mut trans = Vec::with_capacity(d - 1);
    for n in 0..d - 1 {
        let swap = v.actions[n + 2].letter_matrix(WreathLetter::S(n + 1));
        trans.push(swap.mul(&v.trans[n + 1]));
    }
    Ok(WindowedModule { field, group, dims, actions, trans })
}

/// Iterated shift; `b = 0` is a clone.
pub fn shift_b<F: Field>(v: &WindowedModule<F>, b: usize) -> Result<WindowedModule<F>> {
    if v.window() < b {
        return Err(FigError::WindowExhausted { needed: b, have: v.window() });
    }
    let mut cur = v.clone();
    for _ in 0..b {
        cur = shift(&cur)?;
    }
    Ok(cur)
}

/// The canonical map `tau: V -> shift(V)`, degreewise the transition `t_n`.
pub fn tau<F: Field>(v: &Arc<WindowedModule<F>>) -> Result<ModuleMap<F>> {
    let sv = Arc::new(shift(v)?);
    let src = Arc::new(v.truncate(sv.window()));
    let mats = (0..sv.dims.len()).map(|n| v.trans[n].clone()).collect();
    Ok(ModuleMap::new(src, sv, mats))
}

/// The iterated canonical map `tau_b: V -> shift_b(V)`; `b = 0` is the
/// identity.
pub fn tau_b<F: Field>(v: &Arc<WindowedModule<F>>, b: usize) -> Result<ModuleMap<F>> {
    if b == 0 {
        let mats =
            (0..=v.window()).map(|n| Matrix::identity(v.field, v.dims[n])).collect();
        return Ok(ModuleMap::new(Arc::clone(v), Arc::clone(v), mats));
    }
    let mut map = tau(v)?;
    for _ in 1..b {
        let cur = Arc::clone(&map.target);
        map = tau(&cur)?.compose(&map);
    }
    Ok(map)
}

/// The derivative `DV = coker(tau: V -> shift V)`, together with the data
/// needed to apply `D` to maps: the projection from the shift and degreewise
/// right inverses of it.
pub struct Derivative<F: Field> {
    pub module: Arc<WindowedModule<F>>,
    /// Projection `shift(V) -> DV`.
    pub proj: ModuleMap<F>,
    /// Degreewise sections `DV_n -> shift(V)_n` with `proj . section = id`.
    pub sections: Vec<Matrix<F>>,
}

pub fn derivative<F: Field>(v: &Arc<WindowedModule<F>>) -> Result<Derivative<F>> {
    let t = tau(v)?;
    let sv = Arc::clone(&t.target);
    let subs = t.image_subspaces();
    let (module, proj, sections) = quotient_with_sections(&sv, &subs)?;
    Ok(Derivative { module, proj, sections })
}

/// Apply the derivative to a map: `D(f)_n = proj_n . f_{n+1} . section_n`.
/// Well defined because a module map carries the image of one canonical map
/// into the other.
pub fn derivative_map<F: Field>(
    ds: &Derivative<F>,
    dt: &Derivative<F>,
    f: &ModuleMap<F>,
) -> ModuleMap<F> {
    let w = ds
        .module
        .window()
        .min(dt.module.window())
        .min(f.window().saturating_sub(1));
    let mats = (0..=w)
        .map(|n| dt.proj.mats[n].mul(&f.mats[n + 1]).mul(&ds.sections[n]))
        .collect();
    ModuleMap::new(arc_truncated(&ds.module, w), arc_truncated(&dt.module, w), mats)
}

fn arc_truncated<F: Field>(m: &Arc<WindowedModule<F>>, w: usize) -> Arc<WindowedModule<F>> {
    if m.window() == w {
        Arc::clone(m)
    } else {
        Arc::new(m.truncate(w))
    }
}

/// Extend a degree-`n` element to degree `n+1` by fixing the new top point.
fn extend_by_top(e: &GnElement) -> GnElement {
    let n = e.degree();
    let mut perm = e.perm.clone();
    perm.push(n);
    let mut dec = e.dec.clone();
    dec.push(0);
    GnElement { perm, dec }
}

/// Induction `L`: `(LV)_m = k G_m (x)_{k G_{m-1}} V_{m-1}`, with `(LV)_0 = 0`.
///
/// Basis: `(coset key, basis of V_{m-1})`, keys from [`CosetTable`]. A group
/// element `x` acts by `x . (y (x) v) = y' (x) rho(h') v` where
/// `x o y = y' o iota(h')`; the transition is
/// `t(y (x) v) = (iota(y) o s_m) (x) t_{m-1}(v)` reduced the same way — the
/// top transposition is forced by adjunction with the shift.
pub fn induce<F: Field>(v: &WindowedModule<F>) -> Result<WindowedModule<F>> {
    let field = v.field;
    let group = Arc::clone(&v.group);
    let d = v.window();
    let out_w = d + 1;
    let mut dims = Vec::with_capacity(out_w + 1);
    dims.push(0);
    for m in 1..=out_w {
        let dim = m * group.order * v.dims[m - 1];
        check_dim(m, dim)?;
        dims.push(dim);
    }
    let tables: Vec<CosetTable> =
        (1..=out_w).map(|m| CosetTable::new(&group, m)).collect();
    let mut actions = Vec::with_capacity(out_w + 1);
    actions.push(GnRep::zero(field, Arc::clone(&group), 0));
    for m in 1..=out_w {
        let table = &tables[m - 1];
        let block = v.dims[m - 1];
        let mut cache: HashMap<GnElement, Matrix<F>> = HashMap::new();
        let mut letter_mat = |ell: WreathLetter| -> Matrix<F> {
            let x = letter_element(&group, m, ell);
            let mut mat = Matrix::zeros(field, dims[m], dims[m]);
            for key in 0..table.count() {
                let z = x.compose(&group, &table.reps[key]);
                let (key2, h) = table.reduce(&group, &z);
                let rho = cache
                    .entry(h.clone())
                    .or_insert_with(|| v.actions[m - 1].element_matrix(&h));
                for r in 0..block {
                    for c in 0..block {
                        mat.set(key2 * block + r, key * block + c, rho.at(r, c).clone());
                    }
                }
            }
            mat
        };
        let s_mats = (1..m).map(|i| letter_mat(WreathLetter::S(i))).collect();
        let a_mats =
            (0..group.generators.len()).map(|k| letter_mat(WreathLetter::A(k))).collect();
        actions.push(GnRep { field, group: Arc::clone(&group), n: m, dim: dims[m], s_mats, a_mats });
    }
    let mut trans = Vec::with_capacity(out_w);
    trans.push(Matrix::zeros(field, dims[1], 0));
    for m in 1..out_w {
        let src_table = &tables[m - 1];
        let dst_table = &tables[m];
        let src_block = v.dims[m - 1];
        let dst_block = v.dims[m];
        let top_swap = letter_element(&group, m + 1, WreathLetter::S(m));
        let mut mat = Matrix::zeros(field, dims[m + 1], dims[m]);
        for key in 0..src_table.count() {
            let z = extend_by_top(&src_table.reps[key]).compose(&group, &top_swap);
            let (key2, h) = dst_table.reduce(&group, &z);
            let blk = v.actions[m].element_matrix(&h).mul(&v.trans[m - 1]);
            for r in 0..dst_block {
                for c in 0..src_block {
                    mat.set(key2 * dst_block + r, key * src_block + c, blk.at(r, c).clone());
                }
            }
        }
        trans.push(mat);
    }
    Ok(WindowedModule { field, group, dims, actions, trans })
}

/// The degree-`n` endomorphism sending source `j` to the top point with
/// decoration `gamma`, order preserving elsewhere.
fn absorb_element(n: usize, j: usize, gamma: usize) -> GnElement {
    let mut perm = Vec::with_capacity(n);
    for i in 0..n {
        perm.push(if i == j {
            n - 1
        } else if i < j {
            i
        } else {
            i - 1
        });
    }
    let mut dec = vec![0; n];
    dec[j] = gamma;
    GnElement { perm, dec }
}

/// Coinduction `R`: `(RV)_n = V_n (+) V_{n-1}^{n|G|}`, the extra blocks
/// indexed by which source point the new top point absorbs and the
/// decoration it carries.
///
/// Writing `v` for the main block and `u_{j,gamma}` for the others:
///   - `x . v = rho_n(x) v`; `(x . u)_{j,gamma} = rho_{n-1}(z') u_{j',g'}`
///     where `z = absorb(j,gamma) o x` hits the top at `j'` with decoration
///     `g'` and `z'` is `z` with that point deleted;
///   - `t(v) = t_n v` in the main block and a copy of `v` in every block
///     `(n, gamma)`; `t(u)_{j,gamma} = t_{n-1} u_{j,gamma}`.
pub fn coinduce<F: Field>(v: &WindowedModule<F>) -> Result<WindowedModule<F>> {
    let d = v.window();
    if d == 0 {
        return Err(FigError::WindowExhausted { needed: 1, have: 0 });
    }
    let field = v.field;
    let group = Arc::clone(&v.group);
    let go = group.order;
    let out_w = d - 1;
    let mut dims = Vec::with_capacity(out_w + 1);
    for n in 0..=out_w {
        let dim = v.dims[n] + if n == 0 { 0 } else { n * go * v.dims[n - 1] };
        check_dim(n, dim)?;
        dims.push(dim);
    }
    let u_off = |n: usize, j: usize, gamma: usize| v.dims[n] + (j * go + gamma) * v.dims[n - 1];
    let mut actions = Vec::with_capacity(out_w + 1);
    actions.push(GnRep {
        field,
        group: Arc::clone(&group),
        n: 0,
        dim: dims[0],
        s_mats: vec![],
        a_mats: vec![],
    });
    for n in 1..=out_w {
        let mut cache: HashMap<GnElement, Matrix<F>> = HashMap::new();
        let mut letter_mat = |ell: WreathLetter| -> Matrix<F> {
            let x = letter_element(&group, n, ell);
            let mut mat = Matrix::zeros(field, dims[n], dims[n]);
            let main = v.actions[n].letter_matrix(ell);
            for r in 0..v.dims[n] {
                for c in 0..v.dims[n] {
                    mat.set(r, c, main.at(r, c).clone());
                }
            }
            for j in 0..n {
                for gamma in 0..go {
                    let z = absorb_element(n, j, gamma).compose(&group, &x);
                    let jz = z.perm.iter().position(|&p| p == n - 1).expect("top is hit");
                    let (z1, gz) = z.delete_point(jz);
                    let rho = cache
                        .entry(z1.clone())
                        .or_insert_with(|| v.actions[n - 1].element_matrix(&z1));
                    let ro = u_off(n, j, gamma);
                    let co = u_off(n, jz, gz);
                    for r in 0..v.dims[n - 1] {
                        for c in 0..v.dims[n - 1] {
                            mat.set(ro + r, co + c, rho.at(r, c).clone());
                        }
                    }
                }
            }
            mat
        };
        let s_mats = (1..n).map(|i| letter_mat(WreathLetter::S(i))).collect();
        let a_mats =
            (0..group.generators.len()).map(|k| letter_mat(WreathLetter::A(k))).collect();
        actions.push(GnRep { field, group: Arc::clone(&group), n, dim: dims[n], s_mats, a_mats });
    }
    let mut trans = Vec::with_capacity(out_w);
    for n in 0..out_w {
        let mut mat = Matrix::zeros(field, dims[n + 1], dims[n]);
        for r in 0..v.dims[n + 1] {
            for c in 0..v.dims[n] {
                mat.set(r, c, v.trans[n].at(r, c).clone());
            }
        }
        if n >= 1 {
            for j in 0..n {
                for gamma in 0..go {
                    let ro = u_off(n + 1, j, gamma);
                    let co = u_off(n, j, gamma);
                    for r in 0..v.dims[n] {
                        for c in 0..v.dims[n - 1] {
                            mat.set(ro + r, co + c, v.trans[n - 1].at(r, c).clone());
                        }
                    }
                }
            }
        }
        for gamma in 0..go {
            let ro = u_off(n + 1, n, gamma);
            for r in 0..v.dims[n] {
                mat.set(ro + r, r, field.one());
            }
        }
        trans.push(mat);
    }
    Ok(WindowedModule { field, group, dims, actions, trans })
}
