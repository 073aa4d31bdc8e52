//! Finite dimensional right modules over the specialized algebras and the
//! constructions relating them: characters, extension to a larger Levi,
//! parabolic induction in its plain and starred coordinate variants,
//! generalized Steinberg quotients, supersingular modules, twists, duals,
//! intertwiners and the induced simple modules.
//!
//! A module is stored through the matrices of a fixed generator set: one
//! matrix per wall letter, per length zero class representative and per
//! torus coordinate.  Module elements are row vectors and the action is
//! covariant: the matrix of a product is the product of the matrices in
//! the same order.  The defining relations are checked at construction.

use crate::coeff::{specialize, Fq, FqTables, QHalf};
use crate::error::{Error, Result};
use crate::hecke::{
    self, e_minus, e_minus_generic, mul, specialize_elt, to_star_coords, tstar, walk_minus,
    walk_plus, HeckeElt,
};
use crate::linalg::{Matrix, RowSpace};
use crate::prop_weyl::{Algebra, ProPElt};
use crate::root::pair;
use num_traits::Zero;
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

/// A right module over the specialized algebra of `alg`, given by the
/// matrices of the generators acting on row vectors.
#[derive(Clone)]
pub struct FinModule {
    pub alg: Arc<Algebra>,
    pub dim: usize,
    /// One matrix per wall letter.
    pub wall: Vec<Matrix>,
    /// One matrix per length zero class direction, aligned with the
    /// algebra's class representatives.
    pub omega: Vec<Option<Matrix>>,
    /// One matrix per torus coordinate generator.
    pub torus: Vec<Matrix>,
}

impl FinModule {
    pub fn new(
        alg: &Arc<Algebra>,
        wall: Vec<Matrix>,
        omega: Vec<Option<Matrix>>,
        torus: Vec<Matrix>,
    ) -> Result<FinModule> {
        let dim = torus
            .first()
            .map(|m| m.rows)
            .or_else(|| wall.first().map(|m| m.rows))
            .unwrap_or(1);
        let m = FinModule {
            alg: alg.clone(),
            dim,
            wall,
            omega,
            torus,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn tables(&self) -> Arc<FqTables> {
        self.alg.ctx.clone()
    }

    fn identity(&self) -> Matrix {
        Matrix::identity(&self.tables(), self.dim)
    }

    /// The matrix of a pure torus point.
    fn torus_mat(&self, t: &[u32]) -> Matrix {
        let mut m = self.identity();
        for (i, &e) in t.iter().enumerate() {
            if e != 0 {
                m = m.mul(&self.torus[i].pow(e as u64));
            }
        }
        m
    }

    /// The matrix of a length zero element: class representatives first,
    /// then the pure torus remainder.
    pub fn act0(&self, u: &ProPElt) -> Result<Matrix> {
        let alg = &self.alg;
        let (exps, _) = alg.affine.omega_decompose(&alg.cover.proj(u))?;
        let mut m = self.identity();
        let mut acc = alg.cover.id();
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let lift = alg.omega_lifts[i]
                .as_ref()
                .ok_or_else(|| Error::Config("missing class representative".into()))?;
            let mat = self.omega[i]
                .as_ref()
                .ok_or_else(|| Error::Config("missing class generator matrix".into()))?;
            if e > 0 {
                m = m.mul(&mat.pow(e as u64));
                for _ in 0..e {
                    acc = alg.cover.mul(&acc, lift);
                }
            } else {
                m = m.mul(&mat.inverse()?.pow((-e) as u64));
                let li = alg.cover.inv(lift);
                for _ in 0..(-e) {
                    acc = alg.cover.mul(&acc, &li);
                }
            }
        }
        let rem = alg.cover.mul(&alg.cover.inv(&acc), u);
        if rem.v != alg.cover.id().v || rem.x.iter().any(|&c| c != 0) {
            return Err(Error::Config(
                "length zero remainder is not a torus point".into(),
            ));
        }
        Ok(m.mul(&self.torus_mat(&rem.t)))
    }

    /// The matrix of a basis element T_y: wall letters along a reduced
    /// word, then the length zero remainder.
    pub fn act(&self, y: &ProPElt) -> Result<Matrix> {
        let (letters, u) = self.alg.word(y);
        let mut m = self.identity();
        for j in letters {
            m = m.mul(&self.wall[j]);
        }
        Ok(m.mul(&self.act0(&u)?))
    }

    pub fn act_elt(&self, e: &HeckeElt<Fq>) -> Result<Matrix> {
        let mut m = Matrix::zeros(&self.tables(), self.dim, self.dim);
        for (y, c) in &e.terms {
            m = m.add(&self.act(y)?.scale(c));
        }
        Ok(m)
    }

    /// Check the defining relations on the generator matrices: torus
    /// order and commutativity, the quadratic relation of each wall, the
    /// finite braid relations, and the conjugation and product relations
    /// tying the length zero part to the rest.
    pub fn validate(&self) -> Result<()> {
        let alg = &self.alg;
        let t = self.tables();
        let fail = |msg: String| Err(Error::RelationFailure(msg));
        if self.wall.len() != alg.walls.len()
            || self.torus.len() != alg.cover.rank
            || self.omega.len() != alg.omega_lifts.len()
        {
            return Err(Error::Config("generator matrix count mismatch".into()));
        }
        for (i, lift) in alg.omega_lifts.iter().enumerate() {
            if lift.is_some() != self.omega[i].is_some() {
                return Err(Error::Config("class generator alignment mismatch".into()));
            }
            if let Some(m) = &self.omega[i] {
                if !m.is_invertible() {
                    return fail(format!("class generator {i} is not invertible"));
                }
            }
        }
        let id = self.identity();
        let qm1 = alg.cover.qm1 as u64;
        for (i, ti) in self.torus.iter().enumerate() {
            if ti.pow(qm1) != id {
                return fail(format!("torus generator {i} does not have unit order"));
            }
            for tj in &self.torus[..i] {
                if ti.mul(tj) != tj.mul(ti) {
                    return fail("torus generators do not commute".into());
                }
            }
        }
        let unit = |k: usize| {
            let mut e = vec![0u32; alg.cover.rank];
            e[k] = 1;
            e
        };
        for (j, wd) in alg.walls.iter().enumerate() {
            // quadratic relation at zero wall parameter
            let mut c = Matrix::zeros(&t, self.dim, self.dim);
            for (tv, &m) in &wd.cmap {
                c = c.add(&self.torus_mat(tv).scale(&Fq::int(&t, m as i64)));
            }
            let w = &self.wall[j];
            if w.mul(w) != c.mul(w) {
                return fail(format!("quadratic relation fails on wall {j}"));
            }
            // wall and torus conjugation
            for k in 0..alg.cover.rank {
                let conj = alg.cover.conj(&wd.lift, &alg.cover.torus(&unit(k)));
                let lhs = w.mul(&self.torus[k]);
                let rhs = self.torus_mat(&conj.t).mul(w);
                if lhs != rhs {
                    return fail(format!("torus conjugation fails on wall {j}"));
                }
            }
        }
        // braid relations: alternating products of each finite bond order
        // equal the action of the group product
        for j in 0..alg.walls.len() {
            for k in 0..j {
                let a = alg.cover.proj(&alg.walls[j].lift);
                let b = alg.cover.proj(&alg.walls[k].lift);
                let ab = alg.affine.mul(&a, &b);
                let mut pw = alg.affine.id();
                let mut order = None;
                for m in 1..=8u32 {
                    pw = alg.affine.mul(&pw, &ab);
                    if pw == alg.affine.id() {
                        order = Some(m);
                        break;
                    }
                }
                let Some(order) = order else { continue };
                for start in [j, k] {
                    let mut g = alg.cover.id();
                    let mut m = id.clone();
                    let mut cur = start;
                    for _ in 0..order {
                        g = alg.cover.mul(&g, &alg.walls[cur].lift);
                        m = m.mul(&self.wall[cur]);
                        cur = j + k - cur;
                    }
                    if m != self.act(&g)? {
                        return fail(format!("braid relation fails on walls {k},{j}"));
                    }
                }
            }
        }
        // length zero part: conjugation moves walls and the torus, and
        // products of class representatives are consistent
        for (i, lift) in alg.omega_lifts.iter().enumerate() {
            let Some(u) = lift else { continue };
            let o = self.omega[i].as_ref().unwrap();
            for (j, wd) in alg.walls.iter().enumerate() {
                let lhs = o.mul(&self.wall[j]);
                let rhs = self.act(&alg.cover.conj(u, &wd.lift))?.mul(o);
                if lhs != rhs {
                    return fail(format!("wall conjugation fails on class {i}"));
                }
            }
            for k in 0..alg.cover.rank {
                let lhs = o.mul(&self.torus[k]);
                let rhs = self
                    .act0(&alg.cover.conj(u, &alg.cover.torus(&unit(k))))?
                    .mul(o);
                if lhs != rhs {
                    return fail(format!("torus conjugation fails on class {i}"));
                }
            }
            for (i2, lift2) in alg.omega_lifts.iter().enumerate() {
                let Some(u2) = lift2 else { continue };
                let o2 = self.omega[i2].as_ref().unwrap();
                let prod = alg.cover.mul(u, u2);
                if self.act0(&prod)? != o.mul(o2) {
                    return fail(format!("class product fails on classes {i},{i2}"));
                }
            }
        }
        Ok(())
    }
}

/// A one dimensional module from scalar generator data: one value per
/// wall, a torus character given by exponents of the coordinate
/// generators, and one unit value per length zero class.
pub fn character(
    alg: &Arc<Algebra>,
    wall_vals: &[Fq],
    torus_exps: &[u32],
    omega_vals: &[Option<Fq>],
) -> Result<FinModule> {
    let t = alg.ctx.clone();
    let one = |v: &Fq| Matrix::from_fn(1, 1, |_, _| v.clone());
    let qm1 = alg.cover.qm1 as u64;
    let step = (t.q as u64 - 1) / qm1;
    let torus = torus_exps
        .iter()
        .map(|&e| one(&Fq::gen_pow(&t, step * e as u64)))
        .collect();
    let wall = wall_vals.iter().map(&one).collect();
    let omega = omega_vals.iter().map(|v| v.as_ref().map(&one)).collect();
    FinModule::new(alg, wall, omega, torus)
}

/// The trivial character: every starred generator acts by one, so every
/// wall acts by zero.
pub fn trivial_char(alg: &Arc<Algebra>) -> Result<FinModule> {
    let t = &alg.ctx;
    let zero = Fq::int(t, 0);
    let one = Fq::int(t, 1);
    character(
        alg,
        &vec![zero; alg.walls.len()],
        &vec![0; alg.cover.rank],
        &alg.omega_lifts
            .iter()
            .map(|l| l.as_ref().map(|_| one.clone()))
            .collect::<Vec<_>>(),
    )
}

/// The sign character: every wall acts by minus one, the rest by one.
pub fn sign_char(alg: &Arc<Algebra>) -> Result<FinModule> {
    let t = &alg.ctx;
    let mone = Fq::int(t, -1);
    let one = Fq::int(t, 1);
    character(
        alg,
        &vec![mone; alg.walls.len()],
        &vec![0; alg.cover.rank],
        &alg.omega_lifts
            .iter()
            .map(|l| l.as_ref().map(|_| one.clone()))
            .collect::<Vec<_>>(),
    )
}

/// All characters of the algebra, in a fixed deterministic order: every
/// torus character, every admissible wall value pattern (zero, or the
/// value of the wall's quadratic coefficient when nonzero), every unit
/// value assignment on the distinct class representatives, filtered by
/// the defining relations.
pub fn enumerate_characters(alg: &Arc<Algebra>) -> Vec<FinModule> {
    let t = &alg.ctx;
    let qm1 = alg.cover.qm1;
    let rank = alg.cover.rank;
    // distinct class representatives; repeated directions share a value
    let mut distinct: Vec<ProPElt> = Vec::new();
    let mut slot: Vec<Option<usize>> = Vec::new();
    for l in &alg.omega_lifts {
        match l {
            None => slot.push(None),
            Some(u) => {
                let k = distinct.iter().position(|d| d == u).unwrap_or_else(|| {
                    distinct.push(u.clone());
                    distinct.len() - 1
                });
                slot.push(Some(k));
            }
        }
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; rank];
    loop {
        // wall candidates for this torus character
        let step = (t.q as u64 - 1) / qm1 as u64;
        let chi = |tv: &[u32]| -> Fq {
            let mut v = Fq::int(t, 1);
            for (i, &e) in tv.iter().enumerate() {
                v = v * Fq::gen_pow(t, step * (e as u64 * exps[i] as u64));
            }
            v
        };
        let cvals: Vec<Fq> = alg
            .walls
            .iter()
            .map(|wd| {
                let mut c = Fq::int(t, 0);
                for (tv, &m) in &wd.cmap {
                    c = c + chi(tv) * Fq::int(t, m as i64);
                }
                c
            })
            .collect();
        for mask in 0..(1u32 << alg.walls.len()) {
            let wall_vals: Vec<Fq> = (0..alg.walls.len())
                .map(|j| {
                    if mask >> j & 1 == 1 {
                        cvals[j].clone()
                    } else {
                        Fq::int(t, 0)
                    }
                })
                .collect();
            if wall_vals
                .iter()
                .enumerate()
                .any(|(j, v)| mask >> j & 1 == 1 && v.is_zero())
            {
                continue;
            }
            let mut dlogs = vec![0u64; distinct.len()];
            loop {
                let omega_vals: Vec<Option<Fq>> = slot
                    .iter()
                    .map(|s| s.map(|k| Fq::gen_pow(t, dlogs[k])))
                    .collect();
                if let Ok(m) = character(alg, &wall_vals, &exps, &omega_vals) {
                    out.push(m);
                }
                let mut k = 0;
                loop {
                    if k == dlogs.len() {
                        break;
                    }
                    dlogs[k] += 1;
                    if dlogs[k] < t.q as u64 - 1 {
                        break;
                    }
                    dlogs[k] = 0;
                    k += 1;
                }
                if k == dlogs.len() {
                    break;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == rank {
                break;
            }
            exps[k] += 1;
            if exps[k] < qm1 {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
        if k == rank {
            break;
        }
    }
    out
}

fn is_identity(m: &Matrix) -> bool {
    let t = m.get(0, 0).tables().cloned();
    match t {
        Some(t) => *m == Matrix::identity(&t, m.rows),
        None => m.rows == 0,
    }
}

/// The simple roots over which the module extends: the Levi's own simple
/// roots, together with the orthogonal simple roots whose coroot
/// translations and coroot torus points all act trivially.
pub fn delta_of_sigma(parent: &Arc<Algebra>, subset: &[usize], sigma: &FinModule) -> Result<Vec<usize>> {
    let datum = parent.datum();
    let mut out: Vec<usize> = subset.to_vec();
    for &i in &parent.simple {
        if subset.contains(&i) {
            continue;
        }
        let coroot = &datum.simple_coroots[i];
        if subset
            .iter()
            .any(|&j| pair(&datum.simple_roots[j], coroot) != 0)
        {
            continue;
        }
        let mut trivial = is_identity(&sigma.act(&parent.cover.translation(coroot))?);
        for k in 1..parent.cover.qm1 {
            if !trivial {
                break;
            }
            let tv = parent.cover.coweight_torus(coroot, k);
            trivial &= is_identity(&sigma.act0(&parent.cover.torus(&tv))?);
        }
        if trivial {
            out.push(i);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Extend a module over the Levi of `p` to the Levi of `q`, acting on the
/// same space: the starred generators over `p` keep their action and the
/// starred generators of the complementary block act by one.  Requires
/// `q` inside the extension support of the module.
pub fn extend(
    parent: &Arc<Algebra>,
    p: &[usize],
    sigma: &FinModule,
    q: &[usize],
) -> Result<FinModule> {
    let mut p = p.to_vec();
    let mut q = q.to_vec();
    p.sort_unstable();
    q.sort_unstable();
    let delta = delta_of_sigma(parent, &p, sigma)?;
    if !q.iter().all(|i| delta.contains(i)) || !p.iter().all(|i| q.contains(i)) {
        return Err(Error::Config(
            "extension target is not between the Levi and its support".into(),
        ));
    }
    if p == q {
        return Ok(sigma.clone());
    }
    if !p.is_empty() {
        return Err(Error::Config(
            "extension from a proper Levi needs an orthogonal complement".into(),
        ));
    }
    let levi_q = parent.levi(&q)?;
    let t = parent.ctx.clone();
    let id = Matrix::identity(&t, sigma.dim);
    let mut wall = Vec::new();
    for wd in &levi_q.walls {
        let mut m = id.clone();
        for (tv, &mult) in &wd.cmap {
            m = m.add(&sigma.torus_mat(tv).scale(&Fq::int(&t, mult as i64)));
        }
        wall.push(m);
    }
    let mut omega = Vec::new();
    for lift in &levi_q.omega_lifts {
        match lift {
            None => omega.push(None),
            Some(u) => {
                // u = z n_v with z in the coweight times torus part; the
                // starred finite lift acts by one from the lower block
                let n = parent.cover.n_of(u.v);
                let z = parent.cover.mul(u, &parent.cover.inv(&n));
                debug_assert_eq!(z.v, 0);
                omega.push(Some(sigma.act(&z)?));
            }
        }
    }
    FinModule::new(&levi_q, wall, omega, sigma.torus.clone())
}

/// Coordinate variant of a parabolically induced module: values on the
/// plain basis elements of the minimal coset lifts, or on the starred
/// ones.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    Plain,
    Starred,
}

/// A parabolically induced module.  An element is the row vector of its
/// values at the minimal coset lifts (plain or starred by variant), one
/// block per coset of size `dim sigma`; the algebra acts through the
/// evaluation maps and the action matrices are stored as a module over
/// the parent algebra.
pub struct Induced {
    pub parent: Arc<Algebra>,
    pub levi: Arc<Algebra>,
    pub subset: Vec<usize>,
    pub sigma: FinModule,
    pub variant: Variant,
    /// Minimal coset representatives, block order.
    pub reps: Vec<usize>,
    pub module: FinModule,
    block: HashMap<usize, usize>,
    lamc: ProPElt,
    lamc_len: i64,
    sigma_lamc_inv: Matrix,
    em_cache: RefCell<HashMap<ProPElt, HeckeElt<QHalf>>>,
    t_cache: RefCell<HashMap<ProPElt, Matrix>>,
    e_cache: RefCell<HashMap<ProPElt, Matrix>>,
    s_cache: RefCell<HashMap<ProPElt, Matrix>>,
    f_cache: RefCell<HashMap<ProPElt, Matrix>>,
}

impl Induced {
    pub fn dim(&self) -> usize {
        self.reps.len() * self.sigma.dim
    }

    fn tables(&self) -> Arc<FqTables> {
        self.parent.ctx.clone()
    }

    /// The evaluation matrix of the coordinate at one coset block.
    fn selector(&self, b: usize) -> Matrix {
        let d = self.sigma.dim;
        let t = self.tables();
        let mut m = Matrix::zeros(&t, self.reps.len() * d, d);
        for i in 0..d {
            m.set(b * d + i, i, Fq::int(&t, 1));
        }
        m
    }

    /// The matrix taking the coordinate vector of a module element to its
    /// value at an algebra element.
    pub fn eval_elt(&self, e: &HeckeElt<Fq>) -> Result<Matrix> {
        let mut m = Matrix::zeros(&self.tables(), self.dim(), self.sigma.dim);
        match self.variant {
            Variant::Plain => {
                for (y, c) in &e.terms {
                    m = m.add(&self.eval_t(y)?.scale(c));
                }
            }
            Variant::Starred => {
                let coords = to_star_coords(&self.parent, &self.tables(), e);
                for (y, c) in &coords {
                    m = m.add(&self.eval_star(y)?.scale(c));
                }
            }
        }
        Ok(m)
    }

    /// Value of a module element at an algebra element.
    pub fn evaluate(&self, coords: &[Fq], e: &HeckeElt<Fq>) -> Result<Vec<Fq>> {
        let b = self.eval_elt(e)?;
        let t = self.tables();
        Ok((0..self.sigma.dim)
            .map(|j| {
                let mut acc = Fq::int(&t, 0);
                for (i, c) in coords.iter().enumerate() {
                    acc = acc + c.clone() * b.get(i, j).clone();
                }
                acc
            })
            .collect())
    }

    /// Smallest boost exponent making the coweight parabolically negative;
    /// the search is capped by the pairing size.
    fn boost_exponent(&self, x: &[i64]) -> Result<i64> {
        let datum = self.parent.datum();
        let cap = 2 * datum
            .positive
            .iter()
            .map(|r| pair(&r.alpha, x).abs())
            .max()
            .unwrap_or(0)
            + 2;
        let mut shifted = x.to_vec();
        for n in 0..=cap {
            if self.parent.p_negative(&shifted, &self.subset) {
                return Ok(n);
            }
            for (a, b) in shifted.iter_mut().zip(&self.lamc.x) {
                *a += b;
            }
        }
        Err(Error::CapExceeded("boost exponent search".into()))
    }

    /// Boost data for a group element: the boosted element, the exponent,
    /// and whether the lengths stay additive.  A failed additivity means
    /// the evaluation vanishes.
    fn boost(&self, y: &ProPElt) -> Result<(ProPElt, i64, bool)> {
        let (_, mu) = self.parent.finite_and_lambda(y);
        let n = self.boost_exponent(&mu.x)?;
        let mut boosted = y.clone();
        for _ in 0..n {
            boosted = self.parent.cover.mul(&boosted, &self.lamc);
        }
        let additive =
            self.parent.len(&boosted) == self.parent.len(y) + n * self.lamc_len;
        Ok((boosted, n, additive))
    }

    /// Evaluation matrix of an integral basis element (plain variant):
    /// boost into the negative cone, split off the starred minimal lift,
    /// and evaluate the Levi part through the module.
    fn eval_e(&self, y: &ProPElt) -> Result<Matrix> {
        if let Some(m) = self.e_cache.borrow().get(y) {
            return Ok(m.clone());
        }
        let (boosted, n, additive) = self.boost(y)?;
        let m = if !additive {
            Matrix::zeros(&self.tables(), self.dim(), self.sigma.dim)
        } else {
            let f = self.parent.finite();
            let (v, mu) = self.parent.finite_and_lambda(&boosted);
            let (w1, w2) = f.split_right(v, &self.subset);
            let z = self
                .parent
                .cover
                .mul(&self.parent.cover.n_of(w2), &mu);
            let levi_part = self.sigma.act_elt(&e_minus(&self.levi, &z)?)?;
            self.eval_tstar(w1)?
                .mul(&levi_part)
                .mul(&self.sigma_lamc_inv.pow(n as u64))
        };
        self.e_cache.borrow_mut().insert(y.clone(), m.clone());
        Ok(m)
    }

    /// Evaluation matrix of a plain basis element (plain variant).
    fn eval_t(&self, y: &ProPElt) -> Result<Matrix> {
        if let Some(m) = self.t_cache.borrow().get(y) {
            return Ok(m.clone());
        }
        let coords =
            hecke::expand_in_eminus(&self.parent, y, &mut self.em_cache.borrow_mut());
        let mut m = Matrix::zeros(&self.tables(), self.dim(), self.sigma.dim);
        for (yy, c) in coords {
            let c = specialize(&c, &self.tables())?;
            if c.is_zero() {
                continue;
            }
            m = m.add(&self.eval_e(&yy)?.scale(&c));
        }
        self.t_cache.borrow_mut().insert(y.clone(), m.clone());
        Ok(m)
    }

    /// Evaluation matrix of a starred minimal lift (plain variant): the
    /// coordinate itself plus the strictly shorter plain terms.
    fn eval_tstar(&self, w1: usize) -> Result<Matrix> {
        let top = self.parent.cover.n_of(w1);
        if let Some(m) = self.s_cache.borrow().get(&top) {
            return Ok(m.clone());
        }
        let b = *self
            .block
            .get(&w1)
            .ok_or_else(|| Error::Config("split lift is not a coset representative".into()))?;
        let elt: HeckeElt<Fq> = tstar(&self.parent, &self.tables(), &top);
        let mut m = self.selector(b);
        for (y, c) in &elt.terms {
            if *y == top {
                continue;
            }
            m = m.add(&self.eval_t(y)?.scale(c));
        }
        self.s_cache.borrow_mut().insert(top, m.clone());
        Ok(m)
    }

    /// Evaluation matrix of a starred basis element (starred variant).
    /// Starred coordinates are reached through the sign involution images
    /// of the integral basis, which are triangular against them.
    fn eval_star(&self, y: &ProPElt) -> Result<Matrix> {
        if let Some(m) = self.s_cache.borrow().get(y) {
            return Ok(m.clone());
        }
        if y.x.iter().all(|&c| c == 0) && *y == self.parent.cover.n_of(y.v) {
            if let Some(&b) = self.block.get(&y.v) {
                let m = self.selector(b);
                self.s_cache.borrow_mut().insert(y.clone(), m.clone());
                return Ok(m);
            }
        }
        let t = self.tables();
        let em = specialize_elt(&self.parent, &e_minus_generic(&self.parent, y))?;
        let f = hecke::iota(&self.parent, &t, &em);
        let coords = to_star_coords(&self.parent, &t, &f);
        let lead = coords
            .get(y)
            .ok_or_else(|| Error::SolveFailure("missing leading starred term".into()))?
            .clone();
        let lead_inv = lead.inv()?;
        let mut m = self.eval_f(y)?;
        for (yy, c) in &coords {
            if yy == y {
                continue;
            }
            m = m.sub(&self.eval_star(yy)?.scale(c));
        }
        let m = m.scale(&lead_inv);
        self.s_cache.borrow_mut().insert(y.clone(), m.clone());
        Ok(m)
    }

    /// Evaluation matrix of the sign involution image of an integral
    /// basis element (starred variant): boost with a sign, split, and
    /// evaluate the Levi part through the sign corrected embedding.
    fn eval_f(&self, y: &ProPElt) -> Result<Matrix> {
        if let Some(m) = self.f_cache.borrow().get(y) {
            return Ok(m.clone());
        }
        let t = self.tables();
        let (boosted, n, additive) = self.boost(y)?;
        let m = if !additive {
            Matrix::zeros(&t, self.dim(), self.sigma.dim)
        } else {
            let f = self.parent.finite();
            let (v, mu) = self.parent.finite_and_lambda(&boosted);
            let (w1, w2) = f.split_right(v, &self.subset);
            let z = self
                .parent
                .cover
                .mul(&self.parent.cover.n_of(w2), &mu);
            // per term sign by the length gap between parent and Levi,
            // then the Levi sign involution
            let inner = e_minus(&self.levi, &z)?;
            let mut signed: HeckeElt<Fq> = HeckeElt::zero();
            for (zz, c) in &inner.terms {
                let gap = self.parent.len(zz) - self.levi.len(zz);
                let s = if gap % 2 == 0 { 1 } else { -1 };
                signed.add_term(zz.clone(), c.clone() * Fq::int(&t, s));
            }
            let signed = hecke::iota(&self.levi, &t, &signed);
            let levi_part = self.sigma.act_elt(&signed)?;
            let sign_w1 = if f.len(w1) % 2 == 0 { 1 } else { -1 };
            let sign_boost = if (n * self.lamc_len) % 2 == 0 { 1 } else { -1 };
            let front = self
                .eval_elt(&HeckeElt::basis(&t, &self.parent.cover.n_of(w1)))?;
            front
                .mul(&levi_part)
                .mul(&self.sigma_lamc_inv.pow(n as u64))
                .scale(&Fq::int(&t, sign_w1 * sign_boost))
        };
        self.f_cache.borrow_mut().insert(y.clone(), m.clone());
        Ok(m)
    }
}

/// Parabolic induction from a Levi module, in either coordinate variant.
pub fn induce(
    parent: &Arc<Algebra>,
    subset: &[usize],
    sigma: &FinModule,
    variant: Variant,
) -> Result<Induced> {
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    let levi = parent.levi(&subset)?;
    let f = parent.finite();
    // minimal coset representatives inside the parent's own subsystem,
    // so that induction also works relative to a Levi parent
    let reps: Vec<usize> = f
        .subgroup(&parent.simple)
        .into_iter()
        .filter(|&w| subset.iter().all(|&i| !f.right_descent(w, i)))
        .collect();
    let block: HashMap<usize, usize> = reps.iter().enumerate().map(|(b, &w)| (w, b)).collect();
    let lamc_x = parent.central_strict_negative(&subset)?;
    let lamc = parent.cover.translation(&lamc_x);
    let lamc_len = parent.len(&lamc);
    let sigma_lamc = sigma.act(&lamc)?;
    let sigma_lamc_inv = sigma_lamc.inverse().map_err(|_| {
        Error::SolveFailure("central translation does not act invertibly".into())
    })?;
    let t = parent.ctx.clone();
    let dim = reps.len() * sigma.dim;
    let mut ind = Induced {
        parent: parent.clone(),
        levi,
        subset: subset.clone(),
        sigma: sigma.clone(),
        variant,
        reps: reps.clone(),
        module: FinModule {
            alg: parent.clone(),
            dim,
            wall: Vec::new(),
            omega: Vec::new(),
            torus: Vec::new(),
        },
        block,
        lamc,
        lamc_len,
        sigma_lamc_inv,
        em_cache: RefCell::new(HashMap::new()),
        t_cache: RefCell::new(HashMap::new()),
        e_cache: RefCell::new(HashMap::new()),
        s_cache: RefCell::new(HashMap::new()),
        f_cache: RefCell::new(HashMap::new()),
    };
    // coordinate sanity: the evaluation of a coordinate element is the
    // matching selector
    for (b, &w) in reps.iter().enumerate() {
        let nw = parent.cover.n_of(w);
        let e = match variant {
            Variant::Plain => HeckeElt::basis(&t, &nw),
            Variant::Starred => tstar(parent, &t, &nw),
        };
        if ind.eval_elt(&e)? != ind.selector(b) {
            return Err(Error::SolveFailure(
                "coordinate evaluation does not match its selector".into(),
            ));
        }
    }
    // action matrices of the parent generators by evaluation at each
    // coordinate element
    let act_mat = |ind: &Induced, g: &ProPElt| -> Result<Matrix> {
        let d = ind.sigma.dim;
        let mut a = Matrix::zeros(&t, dim, dim);
        for (b, &w) in reps.iter().enumerate() {
            let nw = parent.cover.n_of(w);
            let coord = match variant {
                Variant::Plain => HeckeElt::basis(&t, &nw),
                Variant::Starred => tstar(parent, &t, &nw),
            };
            let x = mul(parent, &t, &HeckeElt::basis(&t, g), &coord);
            let m = ind.eval_elt(&x)?;
            for i in 0..dim {
                for j in 0..d {
                    a.set(i, b * d + j, m.get(i, j).clone());
                }
            }
        }
        Ok(a)
    };
    let mut wall = Vec::new();
    for wd in &parent.walls {
        wall.push(act_mat(&ind, &wd.lift.clone())?);
    }
    let mut omega = Vec::new();
    for lift in &parent.omega_lifts.clone() {
        match lift {
            None => omega.push(None),
            Some(u) => omega.push(Some(act_mat(&ind, u)?)),
        }
    }
    let mut torus = Vec::new();
    for k in 0..parent.cover.rank {
        let mut e = vec![0u32; parent.cover.rank];
        e[k] = 1;
        torus.push(act_mat(&ind, &parent.cover.torus(&e))?);
    }
    ind.module = FinModule::new(parent, wall, omega, torus)?;
    Ok(ind)
}

/// Check the coweight action formula on an induced module: the action of
/// the orientation walk of a coweight is block diagonal, each block the
/// Levi walk of the conjugated coweight when that is parabolically
/// negative and zero otherwise.
pub fn coweight_action_check(ind: &Induced, lambda_x: &[i64]) -> Result<()> {
    let parent = &ind.parent;
    let t = parent.ctx.clone();
    let lam = parent.cover.translation(lambda_x);
    let walk_g: HeckeElt<QHalf> = match ind.variant {
        Variant::Plain => walk_minus(parent, &(), &lam),
        Variant::Starred => walk_plus(parent, &(), &lam),
    };
    let a = ind.module.act_elt(&specialize_elt(parent, &walk_g)?)?;
    let d = ind.sigma.dim;
    for (b, &w) in ind.reps.iter().enumerate() {
        let conj = parent
            .cover
            .conj(&parent.cover.inv(&parent.cover.n_of(w)), &lam);
        let expect = if parent.p_negative(&conj.x, &ind.subset) {
            let lw: HeckeElt<QHalf> = match ind.variant {
                Variant::Plain => walk_minus(&ind.levi, &(), &conj),
                Variant::Starred => walk_plus(&ind.levi, &(), &conj),
            };
            ind.sigma.act_elt(&specialize_elt(&ind.levi, &lw)?)?
        } else {
            Matrix::zeros(&t, d, d)
        };
        for (b2, _) in ind.reps.iter().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    let got = a.get(b2 * d + i, b * d + j);
                    let want = if b2 == b {
                        expect.get(i, j).clone()
                    } else {
                        Fq::int(&t, 0)
                    };
                    if *got != want {
                        return Err(Error::RelationFailure(format!(
                            "coweight action formula fails at block {b2},{b}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Flat generator matrix list in a fixed order: walls, class
/// representatives, torus coordinates.
pub fn generator_list(m: &FinModule) -> Vec<Matrix> {
    let mut out = m.wall.clone();
    out.extend(m.omega.iter().filter_map(|o| o.clone()));
    out.extend(m.torus.iter().cloned());
    out
}

/// Check that a matrix intertwines two modules over the same algebra:
/// row vectors are mapped by right multiplication, so the source action
/// composes on the left.
pub fn check_intertwiner(m1: &FinModule, m2: &FinModule, j: &Matrix) -> Result<()> {
    for (a1, a2) in generator_list(m1).iter().zip(generator_list(m2).iter()) {
        if a1.mul(j) != j.mul(a2) {
            return Err(Error::RelationFailure(
                "matrix does not intertwine the module actions".into(),
            ));
        }
    }
    Ok(())
}

/// The zero module, with aligned empty generator matrices.
fn zero_dim_module(alg: &Arc<Algebra>) -> FinModule {
    let t = alg.ctx.clone();
    let z = Matrix::zeros(&t, 0, 0);
    FinModule {
        alg: alg.clone(),
        dim: 0,
        wall: vec![z.clone(); alg.walls.len()],
        omega: alg
            .omega_lifts
            .iter()
            .map(|l| l.as_ref().map(|_| z.clone()))
            .collect(),
        torus: vec![z; alg.cover.rank],
    }
}

/// The module structure on a stable row subspace together with the
/// inclusion matrix; fails when the subspace is not stable.
pub fn restrict_to(m: &FinModule, space: &RowSpace) -> Result<(FinModule, Matrix)> {
    let t = m.tables();
    let b = &space.basis;
    if space.dim() == 0 {
        let sub = zero_dim_module(&m.alg);
        return Ok((sub, Matrix::zeros(&t, 0, m.dim)));
    }
    let bt = b.transpose();
    let sub_gen = |a: &Matrix| -> Result<Matrix> {
        let prod = b.mul(a);
        let mut rows = Vec::new();
        for i in 0..prod.rows {
            let x = bt
                .solve_right(&prod.row(i))
                .ok_or_else(|| Error::SolveFailure("subspace is not stable".into()))?;
            rows.push(x);
        }
        Ok(Matrix::from_rows(rows))
    };
    let wall = m.wall.iter().map(&sub_gen).collect::<Result<Vec<_>>>()?;
    let omega = m
        .omega
        .iter()
        .map(|o| o.as_ref().map(&sub_gen).transpose())
        .collect::<Result<Vec<_>>>()?;
    let torus = m.torus.iter().map(&sub_gen).collect::<Result<Vec<_>>>()?;
    let sub = FinModule::new(&m.alg, wall, omega, torus)?;
    check_intertwiner(&sub, m, b)?;
    Ok((sub, b.clone()))
}

/// The quotient module by a stable row subspace together with the
/// projection matrix on the complementary coordinates.
pub fn quotient_module(m: &FinModule, space: &RowSpace) -> Result<(FinModule, Matrix)> {
    let t = m.tables();
    let n = m.dim;
    let b = &space.basis;
    for a in generator_list(m) {
        let prod = b.mul(&a);
        for i in 0..prod.rows {
            if !space.contains(&prod.row(i)) {
                return Err(Error::SolveFailure("subspace is not stable".into()));
            }
        }
    }
    let pivots: Vec<usize> = (0..b.rows)
        .map(|i| (0..n).position(|j| !b.get(i, j).is_zero()).unwrap())
        .collect();
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let reduce = |v: &[Fq]| -> Vec<Fq> {
        let mut v = v.to_vec();
        for (i, &pc) in pivots.iter().enumerate() {
            let c = v[pc].clone();
            if c.is_zero() {
                continue;
            }
            let scale = c * b.get(i, pc).inv().unwrap();
            for j in 0..n {
                v[j] = v[j].clone() - scale.clone() * b.get(i, j).clone();
            }
        }
        v
    };
    let proj = {
        let mut cols = Vec::new();
        for i in 0..n {
            let mut e = vec![Fq::int(&t, 0); n];
            e[i] = Fq::int(&t, 1);
            let r = reduce(&e);
            cols.push(free.iter().map(|&j| r[j].clone()).collect::<Vec<_>>());
        }
        Matrix::from_fn(n, free.len(), |i, j| cols[i][j].clone())
    };
    if free.is_empty() {
        let quot = zero_dim_module(&m.alg);
        return Ok((quot, proj));
    }
    let qgen = |a: &Matrix| -> Matrix {
        let mut rows = Vec::new();
        for &fc in &free {
            let r = reduce(&a.row(fc));
            rows.push(free.iter().map(|&j| r[j].clone()).collect::<Vec<_>>());
        }
        Matrix::from_rows(rows)
    };
    let wall = m.wall.iter().map(&qgen).collect();
    let omega = m.omega.iter().map(|o| o.as_ref().map(&qgen)).collect();
    let torus = m.torus.iter().map(&qgen).collect();
    let quot = FinModule::new(&m.alg, wall, omega, torus)?;
    check_intertwiner(m, &quot, &proj)?;
    Ok((quot, proj))
}

/// The coordinatewise inclusion of a plain induction from a larger
/// parabolic into one from a smaller parabolic: extension by zero on the
/// coordinate blocks.
pub fn inclusion_map(src: &Induced, dst: &Induced) -> Result<Matrix> {
    if src.variant != Variant::Plain || dst.variant != Variant::Plain {
        return Err(Error::Config("coordinate inclusion needs plain variants".into()));
    }
    if src.sigma.dim != dst.sigma.dim || !dst.subset.iter().all(|i| src.subset.contains(i)) {
        return Err(Error::Config("inclusion needs nested parabolics".into()));
    }
    let t = src.parent.ctx.clone();
    let d = src.sigma.dim;
    let mut j = Matrix::zeros(&t, src.dim(), dst.dim());
    for (b1, &w) in src.reps.iter().enumerate() {
        let b2 = *dst
            .block
            .get(&w)
            .ok_or_else(|| Error::Config("coset representatives are not nested".into()))?;
        for i in 0..d {
            j.set(b1 * d + i, b2 * d + i, Fq::int(&t, 1));
        }
    }
    check_intertwiner(&src.module, &dst.module, &j)?;
    Ok(j)
}

/// Proper supersets of `q` inside `delta`, in a fixed order.
fn supersets_within(q: &[usize], delta: &[usize]) -> Vec<Vec<usize>> {
    let extra: Vec<usize> = delta.iter().copied().filter(|i| !q.contains(i)).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << extra.len()) {
        let mut s: Vec<usize> = q.to_vec();
        for (k, &i) in extra.iter().enumerate() {
            if mask >> k & 1 == 1 {
                s.push(i);
            }
        }
        s.sort_unstable();
        out.push(s);
    }
    out.sort();
    out
}

/// The generalized Steinberg module: the plain induction of the
/// extension, modulo the images of the inductions from every strictly
/// larger parabolic inside the extension support.  Returns the ambient
/// induction, the quotient and the projection.
pub fn steinberg(
    parent: &Arc<Algebra>,
    p: &[usize],
    sigma: &FinModule,
    q: &[usize],
) -> Result<(Induced, FinModule, Matrix)> {
    let delta = delta_of_sigma(parent, p, sigma)?;
    let mut q = q.to_vec();
    q.sort_unstable();
    if !q.iter().all(|i| delta.contains(i)) || !p.iter().all(|i| q.contains(i)) {
        return Err(Error::Config(
            "Steinberg parabolic is not between the Levi and its support".into(),
        ));
    }
    let eq = extend(parent, p, sigma, &q)?;
    let iq = induce(parent, &q, &eq, Variant::Plain)?;
    let t = parent.ctx.clone();
    let mut u = RowSpace::zero(&t, iq.dim());
    for q1 in supersets_within(&q, &delta) {
        let eq1 = extend(parent, p, sigma, &q1)?;
        let iq1 = induce(parent, &q1, &eq1, Variant::Plain)?;
        let j = inclusion_map(&iq1, &iq)?;
        u = u.sum(&RowSpace::from_rows(&t, iq.dim(), &j));
    }
    let (st, proj) = quotient_module(&iq.module, &u)?;
    Ok((iq, st, proj))
}

/// The canonical comparison map from the plain induction to the starred
/// one over the same parabolic: the unique coordinate map that agrees
/// with every evaluation against the longest coset lift.
pub fn phi_map(src: &Induced, dst: &Induced) -> Result<Matrix> {
    if src.variant != Variant::Plain || dst.variant != Variant::Starred {
        return Err(Error::Config("comparison map needs plain source, starred target".into()));
    }
    if src.subset != dst.subset || src.sigma.dim != dst.sigma.dim {
        return Err(Error::Config("comparison map needs matching inductions".into()));
    }
    let parent = &src.parent;
    let t = parent.ctx.clone();
    let f = parent.finite();
    let wlong = f.mul(
        f.longest_of(&parent.simple),
        f.longest_of(&src.subset),
    );
    let nlong = parent.cover.n_of(wlong);
    // evaluation pool: box-swept translations times lifts of the subsystem's
    // finite part, with torus and class decorated copies, smallest radius
    // first so the rank saturates early
    let mut seeds: Vec<ProPElt> = vec![parent.cover.id()];
    for k in 0..parent.cover.rank {
        let mut e = vec![0u32; parent.cover.rank];
        e[k] = 1;
        seeds.push(parent.cover.torus(&e));
    }
    for u in parent.omega_lifts.iter().flatten() {
        seeds.push(u.clone());
    }
    let n = parent.datum().rank;
    let mut lams: Vec<Vec<i64>> = vec![vec![0; n]];
    for radius in 1..=3i64 {
        let mut cur = vec![-radius; n];
        loop {
            if cur.iter().map(|c| c.abs()).max().unwrap_or(0) == radius {
                lams.push(cur.clone());
            }
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                cur[k] += 1;
                if cur[k] <= radius {
                    break;
                }
                cur[k] = -radius;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    let mut pool: Vec<ProPElt> = Vec::new();
    for lam in &lams {
        let tr = parent.cover.translation(lam);
        for seed in &seeds {
            let head = parent.cover.mul(seed, &tr);
            for w in f.subgroup(&parent.simple) {
                pool.push(parent.cover.mul(&head, &parent.cover.n_of(w)));
            }
        }
    }
    let mut cs: Vec<Matrix> = Vec::new();
    let mut bs: Vec<Matrix> = Vec::new();
    let mut cstack: Option<Matrix> = None;
    let mut extra = 0usize;
    for x in &pool {
        let elt = mul(
            parent,
            &t,
            &HeckeElt::basis(&t, x),
            &HeckeElt::basis(&t, &nlong),
        );
        let c = dst.eval_elt(&elt)?;
        let b = src.eval_elt(&elt)?;
        cstack = Some(match cstack {
            None => c.transpose(),
            Some(s) => s.vstack(&c.transpose()),
        });
        cs.push(c);
        bs.push(b);
        if cstack.as_ref().unwrap().rank() == dst.dim() {
            // keep a margin of extra evaluations as a consistency check on
            // the solved system
            extra += 1;
            if extra > 24 {
                break;
            }
        }
    }
    let cstack = cstack.unwrap();
    if cstack.rank() != dst.dim() {
        return Err(Error::SolveFailure(
            "evaluation pool does not determine the comparison map".into(),
        ));
    }
    // solve row by row: phi . C = B over the stacked evaluations
    let mut rows = Vec::new();
    for i in 0..src.dim() {
        let mut rhs = Vec::new();
        for b in &bs {
            for jj in 0..b.cols {
                rhs.push(b.get(i, jj).clone());
            }
        }
        let x = cstack
            .solve_right(&rhs)
            .ok_or_else(|| Error::SolveFailure("comparison system is inconsistent".into()))?;
        rows.push(x);
    }
    let phi = Matrix::from_rows(rows);
    // full agreement and the intertwining property
    for (c, b) in cs.iter().zip(bs.iter()) {
        if phi.mul(c) != *b {
            return Err(Error::SolveFailure("comparison map fails an evaluation".into()));
        }
    }
    check_intertwiner(&src.module, &dst.module, &phi)?;
    Ok(phi)
}

/// The connecting map between starred inductions from nested parabolics:
/// evaluation against the starred lift of the longest ratio, with its
/// length sign.
pub fn starred_connecting_map(src: &Induced, dst: &Induced) -> Result<Matrix> {
    if src.variant != Variant::Starred || dst.variant != Variant::Starred {
        return Err(Error::Config("connecting map needs starred variants".into()));
    }
    if src.sigma.dim != dst.sigma.dim || !src.subset.iter().all(|i| dst.subset.contains(i)) {
        return Err(Error::Config("connecting map needs nested parabolics".into()));
    }
    let parent = &src.parent;
    let t = parent.ctx.clone();
    let f = parent.finite();
    let ratio = f.mul(f.longest_of(&dst.subset), f.longest_of(&src.subset));
    let sign = Fq::int(&t, if f.len(ratio) % 2 == 0 { 1 } else { -1 });
    let d = src.sigma.dim;
    let mut j = Matrix::zeros(&t, src.dim(), dst.dim());
    for (b, &w) in dst.reps.iter().enumerate() {
        let elt = parent.cover.mul(&parent.cover.n_of(w), &parent.cover.n_of(ratio));
        let m = src
            .eval_elt(&tstar(parent, &t, &elt))?
            .scale(&sign);
        for i in 0..src.dim() {
            for k in 0..d {
                j.set(i, b * d + k, m.get(i, k).clone());
            }
        }
    }
    check_intertwiner(&src.module, &dst.module, &j)?;
    Ok(j)
}

/// On a starred induction, the value at a starred coordinate element is
/// the sum of the values at the plain lifts of the Bruhat lower coset
/// representatives, and the inverse expansion carries the parabolic
/// Moebius function.
pub fn star_sum_check(ind: &Induced) -> Result<()> {
    if ind.variant != Variant::Starred {
        return Err(Error::Config("star sum check needs the starred variant".into()));
    }
    let parent = &ind.parent;
    let f = parent.finite();
    let t = parent.ctx.clone();
    for (b, &w) in ind.reps.iter().enumerate() {
        let mut acc = Matrix::zeros(&t, ind.dim(), ind.sigma.dim);
        for &v in &ind.reps {
            if f.bruhat_le(v, w) {
                acc = acc.add(&ind.eval_elt(&HeckeElt::basis(&t, &parent.cover.n_of(v)))?);
            }
        }
        if acc != ind.selector(b) {
            return Err(Error::RelationFailure(format!(
                "starred coordinate is not the lower coset sum at block {b}"
            )));
        }
    }
    for &w in &ind.reps {
        let mut acc = Matrix::zeros(&t, ind.dim(), ind.sigma.dim);
        for (bv, &v) in ind.reps.iter().enumerate() {
            let mu = f.mobius_min_reps(v, w, &ind.subset);
            if mu != 0 {
                acc = acc.add(&ind.selector(bv).scale(&Fq::int(&t, mu)));
            }
        }
        if acc != ind.eval_elt(&HeckeElt::basis(&t, &parent.cover.n_of(w)))? {
            return Err(Error::RelationFailure(
                "Moebius inversion fails on the starred coordinates".into(),
            ));
        }
    }
    Ok(())
}

/// Basis of the space of module maps between two modules over the same
/// algebra, as matrices acting on row vectors.
pub fn intertwiners(m1: &FinModule, m2: &FinModule) -> Vec<Matrix> {
    let t = m1.tables();
    let (d1, d2) = (m1.dim, m2.dim);
    if d1 == 0 || d2 == 0 {
        return Vec::new();
    }
    let g1 = generator_list(m1);
    let g2 = generator_list(m2);
    let nv = d1 * d2;
    let mut rows = Vec::new();
    for (a1, a2) in g1.iter().zip(g2.iter()) {
        for i in 0..d1 {
            for l in 0..d2 {
                let mut row = vec![Fq::int(&t, 0); nv];
                for k in 0..d1 {
                    row[k * d2 + l] = row[k * d2 + l].clone() + a1.get(i, k).clone();
                }
                for k in 0..d2 {
                    row[i * d2 + k] = row[i * d2 + k].clone() - a2.get(k, l).clone();
                }
                rows.push(row);
            }
        }
    }
    let ker = Matrix::from_rows(rows).right_kernel();
    (0..ker.rows)
        .map(|r| Matrix::from_fn(d1, d2, |i, j| ker.get(r, i * d2 + j).clone()))
        .collect()
}

/// An invertible intertwiner between two modules, if the deterministic
/// search finds one: the basis maps themselves, then combinations with
/// coefficients swept over the field up to a fixed budget.
pub fn find_isomorphism(m1: &FinModule, m2: &FinModule) -> Option<Matrix> {
    if m1.dim != m2.dim {
        return None;
    }
    let t = m1.tables();
    if m1.dim == 0 {
        return Some(Matrix::zeros(&t, 0, 0));
    }
    let basis = intertwiners(m1, m2);
    if basis.is_empty() {
        return None;
    }
    for j in &basis {
        if j.is_invertible() {
            return Some(j.clone());
        }
    }
    let k = basis.len();
    let q = t.q as u64;
    let budget = 1u64 << 14;
    if q.checked_pow(k as u32).map_or(false, |total| total <= budget) {
        let mut idx = vec![0u32; k];
        loop {
            let mut m = Matrix::zeros(&t, m1.dim, m2.dim);
            for (b, &e) in basis.iter().zip(idx.iter()) {
                if e > 0 {
                    m = m.add(&b.scale(&Fq::from_index(&t, e)));
                }
            }
            if m.is_invertible() {
                return Some(m);
            }
            let mut c = 0;
            loop {
                if c == k {
                    return None;
                }
                idx[c] += 1;
                if idx[c] < t.q {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
        }
    }
    // deterministic sweep of combination patterns for larger spaces
    let mut state = 0x9e3779b97f4a7c15u64;
    for _ in 0..512 {
        let mut m = Matrix::zeros(&t, m1.dim, m2.dim);
        for b in &basis {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let e = (state >> 33) % t.q as u64;
            if e > 0 {
                m = m.add(&b.scale(&Fq::from_index(&t, e as u32)));
            }
        }
        if m.is_invertible() {
            return Some(m);
        }
    }
    None
}

/// Whether the stability scan finds no proper nonzero stable subspace:
/// closures of the coordinate vectors and a bounded set of two term
/// combinations must all be the full space.
/// The module twisted by the signed-star involution of its algebra: each
/// wall generator is replaced by the quadratic coefficient minus itself,
/// length zero generators are fixed.
pub fn twist_iota(m: &FinModule) -> Result<FinModule> {
    let t = m.tables();
    let mut wall = Vec::new();
    for (j, w) in m.wall.iter().enumerate() {
        let mut c = Matrix::zeros(&t, m.dim, m.dim);
        for (tv, &cnt) in &m.alg.walls[j].cmap {
            c = c.add(&m.torus_mat(tv).scale(&Fq::int(&t, cnt as i64)));
        }
        wall.push(c.sub(w));
    }
    FinModule::new(&m.alg, wall, m.omega.clone(), m.torus.clone())
}

/// The module twisted by the length discrepancy sign against a larger
/// ambient algebra: each generator picks up minus one to the difference of
/// the ambient and own lengths of its lift.
pub fn twist_sign(m: &FinModule, parent: &Arc<Algebra>) -> Result<FinModule> {
    let t = m.tables();
    let neg = Fq::int(&t, -1);
    let signed = |mat: &Matrix, diff: i64| {
        if diff % 2 != 0 {
            mat.scale(&neg)
        } else {
            mat.clone()
        }
    };
    let mut wall = Vec::new();
    for (j, w) in m.wall.iter().enumerate() {
        let lift = &m.alg.walls[j].lift;
        wall.push(signed(w, parent.len(lift) - m.alg.len(lift)));
    }
    let mut omega = Vec::new();
    for (i, o) in m.omega.iter().enumerate() {
        omega.push(match o {
            None => None,
            Some(mat) => {
                let lift = m.alg.omega_lifts[i].as_ref().unwrap();
                Some(signed(mat, parent.len(lift)))
            }
        });
    }
    FinModule::new(&m.alg, wall, omega, m.torus.clone())
}

/// The image of a subset of simple indices under minus the longest
/// element, which permutes the simple roots.
pub fn opposed_subset(parent: &Arc<Algebra>, subset: &[usize]) -> Vec<usize> {
    let f = parent.finite();
    let wg = f.longest_of(&parent.simple);
    let srank = parent.datum().srank;
    let mut out = Vec::new();
    for &i in subset {
        let mut coords = vec![0i64; srank];
        coords[i] = 1;
        let img = f.act_root(wg, &coords);
        let j = (0..srank)
            .find(|&j| img.iter().enumerate().all(|(k, &c)| c == if k == j { -1 } else { 0 }))
            .expect("minus the longest element permutes the simple roots");
        out.push(j);
    }
    out.sort_unstable();
    out
}

/// Transport of a module across the longest double coset lift: the result
/// lives over the opposed subset and acts through conjugated lifts.
pub fn twist_by_n(m: &FinModule, parent: &Arc<Algebra>) -> Result<(Vec<usize>, FinModule)> {
    let subset = m.alg.simple.clone();
    let opp = opposed_subset(parent, &subset);
    let lv = parent.levi(&opp)?;
    let f = parent.finite();
    let n = parent
        .cover
        .n_of(f.mul(f.longest_of(&parent.simple), f.longest_of(&subset)));
    let ninv = parent.cover.inv(&n);
    let cv = |x: &ProPElt| parent.cover.conj(&ninv, x);
    let mut wall = Vec::new();
    for wd in &lv.walls {
        wall.push(m.act(&cv(&wd.lift))?);
    }
    let mut omega = Vec::new();
    for ol in &lv.omega_lifts {
        omega.push(match ol {
            None => None,
            Some(u) => Some(m.act(&cv(u))?),
        });
    }
    let mut torus = Vec::new();
    for k in 0..parent.cover.rank {
        let mut e = vec![0u32; parent.cover.rank];
        e[k] = 1;
        torus.push(m.act(&cv(&parent.cover.torus(&e)))?);
    }
    let out = FinModule::new(&lv, wall, omega, torus)?;
    Ok((opp, out))
}

/// The contragredient module: transposed action of the inverted lift,
/// through the inversion anti-involution of the algebra.
pub fn dual(m: &FinModule) -> Result<FinModule> {
    let cover = &m.alg.cover;
    let mut wall = Vec::new();
    for wd in &m.alg.walls {
        wall.push(m.act(&cover.inv(&wd.lift))?.transpose());
    }
    let mut omega = Vec::new();
    for (i, o) in m.omega.iter().enumerate() {
        omega.push(match o {
            None => None,
            Some(_) => {
                let u = m.alg.omega_lifts[i].as_ref().unwrap();
                Some(m.act(&cover.inv(u))?.transpose())
            }
        });
    }
    let mut torus = Vec::new();
    for k in 0..cover.rank {
        let mut e = vec![0u32; cover.rank];
        e[k] = 1;
        torus.push(m.act(&cover.inv(&cover.torus(&e)))?.transpose());
    }
    FinModule::new(&m.alg, wall, omega, torus)
}

/// Data of a standard module attached to an affine character pattern: a
/// character of the finite torus by exponents, the subset of wall letters
/// sent to zero among those with invertible quadratic value, and an
/// optional unit scalar fixing the action of the smallest stable power of
/// the length zero class generator.
#[derive(Clone, PartialEq, Eq)]
pub struct SsData {
    pub torus_char: Vec<u32>,
    pub j_set: Vec<usize>,
    pub omega_value: Option<Fq>,
}

fn chi_value(alg: &Arc<Algebra>, exps: &[u32], t: &[u32]) -> Fq {
    let tb = &alg.ctx;
    let qm1 = alg.cover.qm1 as u64;
    let step = (tb.q as u64 - 1) / qm1;
    let mut a = 0u64;
    for (k, &e) in t.iter().enumerate() {
        a = (a + exps[k] as u64 * e as u64) % qm1;
    }
    Fq::gen_pow(tb, step * a)
}

/// The quadratic coefficient of each wall evaluated at a torus character.
fn wall_c_values(alg: &Arc<Algebra>, exps: &[u32]) -> Vec<Fq> {
    alg.walls
        .iter()
        .map(|wd| {
            let mut v = Fq::int(&alg.ctx, 0);
            for (tv, &m) in &wd.cmap {
                v = v + chi_value(alg, exps, tv) * Fq::int(&alg.ctx, m as i64);
            }
            v
        })
        .collect()
}

/// The wall letters whose quadratic coefficient is a unit at the
/// character.
pub fn active_walls(alg: &Arc<Algebra>, exps: &[u32]) -> Vec<usize> {
    wall_c_values(alg, exps)
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, _)| k)
        .collect()
}

fn is_torus_point(y: &ProPElt) -> bool {
    y.v == 0 && y.x.iter().all(|&c| c == 0)
}

/// A length zero class lift that generates every stored class up to a
/// torus point, if the length zero classes are cyclic over the torus.
fn primitive_class(alg: &Arc<Algebra>) -> Result<Option<ProPElt>> {
    let lifts: Vec<&ProPElt> = alg.omega_lifts.iter().flatten().collect();
    if lifts.is_empty() {
        return Ok(None);
    }
    let cover = &alg.cover;
    'cand: for u in &lifts {
        for other in &lifts {
            let mut found = false;
            for mexp in -8i64..=8 {
                let mut pw = cover.id();
                let base = if mexp >= 0 {
                    (*u).clone()
                } else {
                    cover.inv(u)
                };
                for _ in 0..mexp.abs() {
                    pw = cover.mul(&pw, &base);
                }
                let rem = cover.mul(&cover.inv(&pw), other);
                if is_torus_point(&rem) {
                    found = true;
                    break;
                }
            }
            if !found {
                continue 'cand;
            }
        }
        return Ok(Some((*u).clone()));
    }
    Err(Error::Config(
        "length zero classes are not cyclic over the torus".into(),
    ))
}

/// The standard module of an affine character pattern, induced across the
/// length zero classes: one block per coset of the pattern stabilizer.
pub fn supersingular_module(alg: &Arc<Algebra>, data: &SsData) -> Result<FinModule> {
    let t = alg.ctx.clone();
    let cover = alg.cover.clone();
    if data.torus_char.len() != cover.rank {
        return Err(Error::Config("torus character length mismatch".into()));
    }
    let chi = |tv: &[u32]| chi_value(alg, &data.torus_char, tv);
    let cvals = wall_c_values(alg, &data.torus_char);
    let active = active_walls(alg, &data.torus_char);
    if !data.j_set.iter().all(|k| active.contains(k)) {
        return Err(Error::Config(
            "pattern subset must consist of walls with unit quadratic value".into(),
        ));
    }
    let xi_wall: Vec<Fq> = (0..alg.walls.len())
        .map(|k| {
            if active.contains(&k) && !data.j_set.contains(&k) {
                cvals[k].clone()
            } else {
                Fq::int(&t, 0)
            }
        })
        .collect();
    // the pattern value on a torus point times a wall lift
    let xi_of = |x: &ProPElt| -> Result<Fq> {
        if is_torus_point(x) {
            return Ok(chi(&x.t));
        }
        for (k, wd) in alg.walls.iter().enumerate() {
            let r = cover.mul(x, &cover.inv(&wd.lift));
            if is_torus_point(&r) {
                return Ok(chi(&r.t) * xi_wall[k].clone());
            }
        }
        Err(Error::Config(
            "pattern evaluated outside the torus wall cosets".into(),
        ))
    };
    let unit = |k: usize| {
        let mut e = vec![0u32; cover.rank];
        e[k] = 1;
        e
    };
    let prim = primitive_class(alg)?;
    // smallest power of the class generator stabilizing the pattern
    let mut ujs = vec![cover.id()];
    if let Some(u) = &prim {
        let mut d = None;
        let mut pw = cover.id();
        for j in 1..=16usize {
            pw = cover.mul(&pw, u);
            let mut stable = (0..cover.rank).all(|k| {
                let c = cover.conj(&pw, &cover.torus(&unit(k)));
                chi(&c.t) == chi(&unit(k))
            });
            if stable {
                for (k, wd) in alg.walls.iter().enumerate() {
                    let c = cover.conj(&pw, &wd.lift);
                    if xi_of(&c)? != xi_wall[k] {
                        stable = false;
                        break;
                    }
                }
            }
            if stable {
                d = Some(j);
                break;
            }
        }
        let d = d.ok_or_else(|| {
            Error::Config("pattern stabilizer has no small class power".into())
        })?;
        for _ in 1..d {
            let last = ujs.last().unwrap().clone();
            ujs.push(cover.mul(&last, u));
        }
    }
    let d = ujs.len();
    let ud = match &prim {
        Some(u) => cover.mul(ujs.last().unwrap(), u),
        None => cover.id(),
    };
    let wrap = if prim.is_some() {
        if is_torus_point(&ud) {
            let v = chi(&ud.t);
            if let Some(w) = &data.omega_value {
                if *w != v {
                    return Err(Error::Config(
                        "class value is forced by the torus character".into(),
                    ));
                }
            }
            v
        } else {
            match &data.omega_value {
                Some(w) if !w.is_zero() => w.clone(),
                _ => {
                    return Err(Error::Config(
                        "a unit class value is required for a free class power".into(),
                    ))
                }
            }
        }
    } else {
        if data.omega_value.is_some() {
            return Err(Error::Config(
                "class value given but there is no length zero class".into(),
            ));
        }
        Fq::int(&t, 1)
    };
    // value of the extended character on an element of the stabilizer
    // times a coset representative: scan coset index and wrap exponent
    let stab_value = |target: &ProPElt| -> Result<(usize, Fq)> {
        for jp in 0..d {
            let r = cover.mul(target, &cover.inv(&ujs[jp]));
            for kk in -8i64..=8 {
                let mut pw = cover.id();
                let base = if kk >= 0 { ud.clone() } else { cover.inv(&ud) };
                for _ in 0..kk.abs() {
                    pw = cover.mul(&pw, &base);
                }
                let rem = cover.mul(&cover.inv(&pw), &r);
                if is_torus_point(&rem) {
                    let wv = if kk >= 0 {
                        wrap.pow(kk as u64)
                    } else {
                        wrap.inv()?.pow((-kk) as u64)
                    };
                    return Ok((jp, wv * chi(&rem.t)));
                }
            }
        }
        Err(Error::Config("element outside the class cosets".into()))
    };
    let mut torus = Vec::new();
    for k in 0..cover.rank {
        let te = cover.torus(&unit(k));
        let mut m = Matrix::zeros(&t, d, d);
        for (j, uj) in ujs.iter().enumerate() {
            let c = cover.conj(uj, &te);
            m.set(j, j, chi(&c.t));
        }
        torus.push(m);
    }
    let mut wall = Vec::new();
    for wd in &alg.walls {
        let mut m = Matrix::zeros(&t, d, d);
        for (j, uj) in ujs.iter().enumerate() {
            let c = cover.conj(uj, &wd.lift);
            m.set(j, j, xi_of(&c)?);
        }
        wall.push(m);
    }
    let mut omega = Vec::new();
    for ol in &alg.omega_lifts {
        omega.push(match ol {
            None => None,
            Some(ui) => {
                let mut m = Matrix::zeros(&t, d, d);
                for (j, uj) in ujs.iter().enumerate() {
                    let target = cover.mul(uj, ui);
                    let (jp, v) = stab_value(&target)?;
                    m.set(j, jp, v);
                }
                Some(m)
            }
        });
    }
    FinModule::new(alg, wall, omega, torus)
}

/// Connected components of the wall letter diagram, by noncommuting
/// bonds.
fn wall_components(alg: &Arc<Algebra>) -> Vec<Vec<usize>> {
    let n = alg.walls.len();
    let mut comp: Vec<usize> = (0..n).collect();
    for j in 0..n {
        for k in 0..j {
            let a = alg.cover.proj(&alg.walls[j].lift);
            let b = alg.cover.proj(&alg.walls[k].lift);
            let ab = alg.affine.mul(&a, &b);
            let ba = alg.affine.mul(&b, &a);
            if ab != ba {
                let (cj, ck) = (comp[j], comp[k]);
                let m = cj.min(ck);
                for c in comp.iter_mut() {
                    if *c == cj || *c == ck {
                        *c = m;
                    }
                }
            }
        }
    }
    let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
    for (j, &c) in comp.iter().enumerate() {
        out.entry(c).or_default().push(j);
    }
    let mut v: Vec<Vec<usize>> = out.into_values().collect();
    v.sort();
    v
}

/// True when the given wall letters generate a finite reflection group:
/// no full component of the affine diagram is contained in the set.
fn generates_finite(alg: &Arc<Algebra>, set: &[usize]) -> bool {
    wall_components(alg)
        .iter()
        .all(|comp| comp.iter().any(|j| !set.contains(j)))
}

/// True when every central orbit sum of positive length acts nilpotently;
/// orbit representatives are swept over a coweight box with torus
/// decorations.
pub fn is_supersingular(m: &FinModule, radius: i64) -> Result<bool> {
    let alg = &m.alg;
    let cover = &alg.cover;
    let rank = cover.rank;
    let mut seen: Vec<ProPElt> = Vec::new();
    let mut decors: Vec<Vec<u32>> = vec![vec![0; cover.rank]];
    if (cover.qm1 as u64).pow(cover.rank as u32) <= 16 {
        decors.clear();
        let mut cur = vec![0u32; cover.rank];
        loop {
            decors.push(cur.clone());
            let mut k = 0;
            while k < cover.rank {
                cur[k] += 1;
                if cur[k] < cover.qm1 {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == cover.rank {
                break;
            }
        }
    }
    let mut x = vec![-radius; rank];
    loop {
        if x.iter().any(|&c| c != 0) {
            for dec in &decors {
                let lam = cover.mul(&cover.torus(dec), &cover.translation(&x));
                if alg.len(&lam) > 0 {
                    let orbit = alg.finite_orbit(&lam);
                    if orbit.first() == Some(&lam) && !seen.contains(&lam) {
                        seen.push(lam.clone());
                        let z = hecke::z_orbit(alg, &lam)?;
                        let a = m.act_elt(&z)?;
                        if !a.pow(m.dim as u64).is_zero_matrix() {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        let mut k = 0;
        while k < rank {
            x[k] += 1;
            if x[k] <= radius {
                break;
            }
            x[k] = -radius;
            k += 1;
        }
        if k == rank {
            break;
        }
    }
    Ok(true)
}

/// All standard pattern modules that are supersingular, one data point per
/// isomorphism class, in a fixed deterministic order.
pub fn enumerate_supersingular(alg: &Arc<Algebra>) -> Result<Vec<(SsData, FinModule)>> {
    let t = &alg.ctx;
    let mut kept: Vec<(SsData, FinModule)> = Vec::new();
    let mut exps = vec![0u32; alg.cover.rank];
    loop {
        let active = active_walls(alg, &exps);
        for mask in 0u32..(1 << active.len()) {
            let j_set: Vec<usize> = active
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &j)| j)
                .collect();
            let rest: Vec<usize> = active
                .iter()
                .copied()
                .filter(|j| !j_set.contains(j))
                .collect();
            if !generates_finite(alg, &j_set) || !generates_finite(alg, &rest) {
                continue;
            }
            let base = SsData {
                torus_char: exps.clone(),
                j_set,
                omega_value: None,
            };
            let mut candidates = Vec::new();
            match supersingular_module(alg, &base) {
                Ok(m) => candidates.push((base, m)),
                Err(_) => {
                    for idx in 1..t.q {
                        let mut data = base.clone();
                        data.omega_value = Some(Fq::from_index(t, idx));
                        if let Ok(m) = supersingular_module(alg, &data) {
                            candidates.push((data, m));
                        }
                    }
                }
            }
            for (data, m) in candidates {
                if kept.iter().all(|(_, k)| find_isomorphism(k, &m).is_none()) {
                    kept.push((data, m));
                }
            }
        }
        let mut k = 0;
        while k < alg.cover.rank {
            exps[k] += 1;
            if exps[k] < alg.cover.qm1 {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
        if k == alg.cover.rank || alg.cover.qm1 == 0 {
            break;
        }
    }
    Ok(kept)
}

/// The module attached to a parabolic subset, a module over its Levi, and
/// an intermediate subset: induction of the relative Steinberg quotient
/// from the support of the extension locus.
pub fn simple_module(
    parent: &Arc<Algebra>,
    p: &[usize],
    sigma: &FinModule,
    q: &[usize],
) -> Result<Induced> {
    let delta = delta_of_sigma(parent, p, sigma)?;
    if !p.iter().all(|i| q.contains(i)) || !q.iter().all(|i| delta.contains(i)) {
        return Err(Error::Config(
            "intermediate subset must sit between the parabolic and the extension locus".into(),
        ));
    }
    let lv = parent.levi(&delta)?;
    let (_, st, _) = steinberg(&lv, p, sigma, q)?;
    induce(parent, &delta, &st, Variant::Plain)
}

/// One layer of the filtration of a starred induction: the subset, the
/// row space of the layer, and the dimension of its top quotient.
pub struct FiltrationStep {
    pub q: Vec<usize>,
    pub space: RowSpace,
    pub quotient_dim: usize,
}

/// The filtration of a starred parabolic induction indexed by subsets
/// between the inducing parabolic and the extension locus, monotone with
/// top quotients the attached standard modules.  Every claimed property is
/// verified: monotonicity, the isomorphism type of each subquotient by an
/// invertible intertwiner, and the dimension count.
pub fn iprime_filtration(
    parent: &Arc<Algebra>,
    p: &[usize],
    sigma: &FinModule,
) -> Result<Vec<FiltrationStep>> {
    let t = parent.ctx.clone();
    let delta = delta_of_sigma(parent, p, sigma)?;
    let ind_s = induce(parent, p, sigma, Variant::Starred)?;
    let m = &ind_s.module;
    let mut qs: Vec<Vec<usize>> = vec![p.to_vec()];
    qs.extend(supersets_within(p, &delta));
    qs.sort_by_key(|q| (q.len(), q.clone()));
    let mut spaces: Vec<RowSpace> = Vec::new();
    if delta == parent.simple {
        // twist route: the starred induction is the signed twist of the
        // plain induction from the sign-and-star twisted coefficients
        let sig2 = twist_sign(&twist_iota(sigma)?, parent)?;
        if delta_of_sigma(parent, p, &sig2)? != delta {
            return Err(Error::Config("twist moved the extension locus".into()));
        }
        let ind_p = induce(parent, p, &sig2, Variant::Plain)?;
        let lhs = twist_iota(&ind_p.module)?;
        let psi0 = find_isomorphism(&lhs, m)
            .ok_or_else(|| Error::SolveFailure("no twist intertwiner".into()))?;
        for q in &qs {
            let mut qc: Vec<usize> = p.to_vec();
            for &i in &delta {
                if !q.contains(&i) && !qc.contains(&i) {
                    qc.push(i);
                }
            }
            qc.sort_unstable();
            let e = extend(parent, p, &sig2, &qc)?;
            let iq = induce(parent, &qc, &e, Variant::Plain)?;
            let incl = inclusion_map(&iq, &ind_p)?;
            spaces.push(RowSpace::from_rows(&t, m.dim, &incl.mul(&psi0)));
        }
    } else if qs.len() == 1 {
        let target = simple_module(parent, p, sigma, p)?;
        if find_isomorphism(m, &target.module).is_none() {
            return Err(Error::SolveFailure("full layer misses its standard module".into()));
        }
        spaces.push(RowSpace::from_rows(&t, m.dim, &Matrix::identity(&t, m.dim)));
    } else if qs.len() == 2 {
        // search route: exhibit the bottom layer among cyclic submodules
        let bottom = simple_module(parent, p, sigma, &qs[0])?;
        let top = simple_module(parent, p, sigma, &qs[1])?;
        let gens = generator_list(m);
        let count = (t.q as u64).checked_pow(m.dim as u32).unwrap_or(u64::MAX);
        if count > 1 << 14 {
            return Err(Error::Config("layer search space too large".into()));
        }
        let mut found = None;
        'outer: for idx in 1..count {
            let mut v = Vec::with_capacity(m.dim);
            let mut rem = idx;
            for _ in 0..m.dim {
                v.push(Fq::from_index(&t, (rem % t.q as u64) as u32));
                rem /= t.q as u64;
            }
            let mut space = RowSpace::from_rows(&t, m.dim, &Matrix::from_rows(vec![v]));
            loop {
                let mut grew = false;
                let mut rows = Vec::new();
                for r in 0..space.basis.rows {
                    for g in &gens {
                        let row = Matrix::from_fn(1, m.dim, |_, j| space.basis.get(r, j).clone());
                        let img = row.mul(g);
                        let vr: Vec<Fq> = (0..m.dim).map(|j| img.get(0, j).clone()).collect();
                        if !space.contains(&vr) {
                            rows.push(vr);
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
                let stacked = space.basis.vstack(&Matrix::from_rows(rows));
                space = RowSpace::from_rows(&t, m.dim, &stacked);
                if space.dim() > bottom.dim() {
                    break;
                }
            }
            if space.dim() != bottom.dim() {
                continue;
            }
            let (sub, _) = restrict_to(m, &space)?;
            if find_isomorphism(&sub, &bottom.module).is_none() {
                continue;
            }
            let (quot, _) = quotient_module(m, &space)?;
            if find_isomorphism(&quot, &top.module).is_none() {
                continue;
            }
            found = Some(space);
            break 'outer;
        }
        let space = found
            .ok_or_else(|| Error::SolveFailure("no bottom layer found by search".into()))?;
        spaces.push(space);
        spaces.push(RowSpace::from_rows(&t, m.dim, &Matrix::identity(&t, m.dim)));
    } else {
        return Err(Error::Config(
            "proper extension locus with a long chain is not supported".into(),
        ));
    }
    // verification: monotone, subquotients standard, dimensions add up
    let mut steps = Vec::new();
    let mut total = 0usize;
    for (qi, q) in qs.iter().enumerate() {
        for (qj, q2) in qs.iter().enumerate() {
            if q2.iter().all(|i| q.contains(i)) && !spaces[qi].contains_space(&spaces[qj]) {
                return Err(Error::SolveFailure("filtration is not monotone".into()));
            }
        }
        let mut below = RowSpace::zero(&t, m.dim);
        for (qj, q2) in qs.iter().enumerate() {
            if qj != qi && q2.iter().all(|i| q.contains(i)) {
                below = below.sum(&spaces[qj]);
            }
        }
        let (sub, basis) = restrict_to(m, &spaces[qi])?;
        let bt = basis.transpose();
        let mut below_rows = Vec::new();
        for r in 0..below.basis.rows {
            let rhs: Vec<Fq> = (0..m.dim).map(|j| below.basis.get(r, j).clone()).collect();
            let x = bt
                .solve_right(&rhs)
                .ok_or_else(|| Error::SolveFailure("lower layer escapes the layer".into()))?;
            below_rows.push(x);
        }
        let below_sub = if below_rows.is_empty() {
            RowSpace::zero(&t, sub.dim)
        } else {
            RowSpace::from_rows(&t, sub.dim, &Matrix::from_rows(below_rows))
        };
        let (quot, _) = quotient_module(&sub, &below_sub)?;
        let target = simple_module(parent, p, sigma, q)?;
        let iso = find_isomorphism(&quot, &target.module)
            .ok_or_else(|| Error::SolveFailure("subquotient misses its standard module".into()))?;
        if !iso.is_invertible() {
            return Err(Error::SolveFailure("subquotient intertwiner is singular".into()));
        }
        total += quot.dim;
        steps.push(FiltrationStep {
            q: q.clone(),
            space: spaces[qi].clone(),
            quotient_dim: quot.dim,
        });
    }
    if total != m.dim {
        return Err(Error::SolveFailure("filtration dimensions do not add up".into()));
    }
    Ok(steps)
}

pub fn is_simple_scan(m: &FinModule) -> bool {
    if m.dim == 0 {
        return false;
    }
    let t = m.tables();
    let gens = generator_list(m);
    let closure_full = |v: Vec<Fq>| -> bool {
        if v.iter().all(|c| c.is_zero()) {
            return false;
        }
        let mut sp = RowSpace::from_rows(&t, m.dim, &Matrix::from_rows(vec![v]));
        loop {
            let mut next = sp.clone();
            for g in &gens {
                next = next.sum(&RowSpace::from_rows(&t, m.dim, &sp.basis.mul(g)));
            }
            if next.dim() == sp.dim() {
                break;
            }
            sp = next;
        }
        sp.dim() == m.dim
    };
    let e = |i: usize| {
        let mut v = vec![Fq::int(&t, 0); m.dim];
        v[i] = Fq::int(&t, 1);
        v
    };
    let mut candidates: Vec<Vec<Fq>> = (0..m.dim).map(e).collect();
    'outer: for i in 0..m.dim {
        for j in i + 1..m.dim {
            for s in [1i64, -1] {
                if candidates.len() >= 64 {
                    break 'outer;
                }
                let mut v = e(i);
                v[j] = Fq::int(&t, s);
                candidates.push(v);
            }
        }
    }
    candidates.into_iter().all(closure_full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root::Preset;

    fn algebra(preset: Preset) -> Arc<Algebra> {
        let (p, f) = preset.default_field();
        Algebra::new(preset, p, f).unwrap()
    }

    #[test]
    fn canonical_characters_validate() {
        for preset in [Preset::Sl2, Preset::Pgl2, Preset::Gl2, Preset::Sl3] {
            let alg = Algebra::new(preset, preset.default_field().0, preset.default_field().1)
                .unwrap();
            trivial_char(&alg).unwrap();
            sign_char(&alg).unwrap();
        }
    }

    #[test]
    fn character_enumeration_contains_the_canonical_pair() {
        let alg = algebra(Preset::Sl2);
        let chars = enumerate_characters(&alg);
        assert!(chars.len() >= 2);
        let triv = trivial_char(&alg).unwrap();
        let sign = sign_char(&alg).unwrap();
        for c in [&triv, &sign] {
            assert!(chars
                .iter()
                .any(|m| m.wall == c.wall && m.torus == c.torus && m.omega == c.omega));
        }
    }

    #[test]
    fn induced_dims_match_coset_counts() {
        let alg = algebra(Preset::Sl3);
        let levi = alg.levi(&[]).unwrap();
        let sigma = trivial_char(&levi).unwrap();
        for variant in [Variant::Plain, Variant::Starred] {
            let ind = induce(&alg, &[], &sigma, variant).unwrap();
            assert_eq!(ind.dim(), 6);
        }
        let levi0 = alg.levi(&[0]).unwrap();
        let sigma0 = trivial_char(&levi0).unwrap();
        for variant in [Variant::Plain, Variant::Starred] {
            let ind = induce(&alg, &[0], &sigma0, variant).unwrap();
            assert_eq!(ind.dim(), 3);
        }
    }

    #[test]
    fn full_induction_reproduces_the_module() {
        let alg = algebra(Preset::Sl2);
        let full: Vec<usize> = (0..alg.datum().srank).collect();
        let sigma = sign_char(&alg).unwrap();
        let ind = induce(&alg, &full, &sigma, Variant::Plain).unwrap();
        assert_eq!(ind.dim(), 1);
        assert_eq!(ind.module.wall, sigma.wall);
        assert_eq!(ind.module.torus, sigma.torus);
    }

    #[test]
    fn coweight_action_formula_holds_on_borel_inductions() {
        let alg = algebra(Preset::Sl3);
        let levi = alg.levi(&[]).unwrap();
        for sigma in enumerate_characters(&levi).iter().take(3) {
            for variant in [Variant::Plain, Variant::Starred] {
                let ind = induce(&alg, &[], sigma, variant).unwrap();
                for lam in [
                    vec![0i64, 0],
                    vec![1, 0],
                    vec![-1, 0],
                    vec![1, 1],
                    vec![-2, 1],
                    vec![2, -1],
                ] {
                    coweight_action_check(&ind, &lam).unwrap();
                }
            }
        }
    }

    #[test]
    fn extension_of_the_trivial_character_is_trivial() {
        let alg = algebra(Preset::Sl3);
        let levi0 = alg.levi(&[]).unwrap();
        let triv0 = trivial_char(&levi0).unwrap();
        let delta = delta_of_sigma(&alg, &[], &triv0).unwrap();
        assert_eq!(delta, vec![0, 1]);
        for q in [vec![0usize], vec![1usize], vec![0usize, 1usize]] {
            let e = extend(&alg, &[], &triv0, &q).unwrap();
            let levi_q = alg.levi(&q).unwrap();
            let triv_q = trivial_char(&levi_q).unwrap();
            assert_eq!(e.wall, triv_q.wall);
            assert_eq!(e.torus, triv_q.torus);
            assert_eq!(e.omega, triv_q.omega);
        }
    }

    #[test]
    fn steinberg_dimension_ladder_on_sl3() {
        let alg = algebra(Preset::Sl3);
        let levi0 = alg.levi(&[]).unwrap();
        let triv0 = trivial_char(&levi0).unwrap();
        let mut dims = Vec::new();
        for q in [vec![], vec![0usize], vec![1usize], vec![0usize, 1usize]] {
            let (_, st, _) = steinberg(&alg, &[], &triv0, &q).unwrap();
            dims.push(st.dim);
        }
        assert_eq!(dims, vec![1, 2, 2, 1]);
    }

    #[test]
    fn comparison_map_kernel_is_the_span_of_the_extended_inclusions() {
        let alg = algebra(Preset::Sl2);
        let levi = alg.levi(&[]).unwrap();
        let triv = trivial_char(&levi).unwrap();
        let src = induce(&alg, &[], &triv, Variant::Plain).unwrap();
        let dst = induce(&alg, &[], &triv, Variant::Starred).unwrap();
        let phi = phi_map(&src, &dst).unwrap();
        let t = alg.ctx.clone();
        let ker = RowSpace::from_rows(&t, src.dim(), &phi.transpose().right_kernel());
        let e = extend(&alg, &[], &triv, &[0]).unwrap();
        let ig = induce(&alg, &[0], &e, Variant::Plain).unwrap();
        let incl = inclusion_map(&ig, &src).unwrap();
        let image = RowSpace::from_rows(&t, src.dim(), &incl);
        assert_eq!(ker, image);
        assert_eq!(ker.dim(), 1);
    }

    #[test]
    fn comparison_map_is_invertible_off_the_extension_locus() {
        let alg = algebra(Preset::Sl2);
        let levi = alg.levi(&[]).unwrap();
        for sigma in enumerate_characters(&levi) {
            let src = induce(&alg, &[], &sigma, Variant::Plain).unwrap();
            let dst = induce(&alg, &[], &sigma, Variant::Starred).unwrap();
            let phi = phi_map(&src, &dst).unwrap();
            let extends = delta_of_sigma(&alg, &[], &sigma).unwrap() == vec![0];
            assert_eq!(phi.is_invertible(), !extends);
        }
    }

    #[test]
    fn star_sum_and_moebius_inversion_hold_on_starred_inductions() {
        let alg = algebra(Preset::Sl3);
        let levi = alg.levi(&[]).unwrap();
        let triv = trivial_char(&levi).unwrap();
        for subset in [vec![], vec![0usize]] {
            let e = extend(&alg, &[], &triv, &subset).unwrap();
            let ind = induce(&alg, &subset, &e, Variant::Starred).unwrap();
            star_sum_check(&ind).unwrap();
        }
    }

    #[test]
    fn connecting_map_kills_the_comparison_image() {
        let alg = algebra(Preset::Sl3);
        let levi = alg.levi(&[]).unwrap();
        let triv = trivial_char(&levi).unwrap();
        let src_p = induce(&alg, &[], &triv, Variant::Plain).unwrap();
        let src_s = induce(&alg, &[], &triv, Variant::Starred).unwrap();
        let phi = phi_map(&src_p, &src_s).unwrap();
        for q1 in [vec![0usize], vec![1usize]] {
            let e1 = extend(&alg, &[], &triv, &q1).unwrap();
            let dst = induce(&alg, &q1, &e1, Variant::Starred).unwrap();
            let conn = starred_connecting_map(&src_s, &dst).unwrap();
            assert_eq!(conn.rank(), dst.dim());
            let i1p = induce(&alg, &q1, &e1, Variant::Plain).unwrap();
            let incl = inclusion_map(&i1p, &src_p).unwrap();
            assert!(incl.mul(&phi).is_zero_matrix());
            assert!(incl.mul(&phi.mul(&conn)).is_zero_matrix());
        }
    }

    #[test]
    fn intertwiner_search_finds_the_identity() {
        let alg = algebra(Preset::Sl2);
        let levi = alg.levi(&[]).unwrap();
        let triv = trivial_char(&levi).unwrap();
        let ind = induce(&alg, &[], &triv, Variant::Plain).unwrap();
        let maps = intertwiners(&ind.module, &ind.module);
        assert!(!maps.is_empty());
        let iso = find_isomorphism(&ind.module, &ind.module).unwrap();
        assert!(iso.is_invertible());
    }

    #[test]
    fn steinberg_quotients_are_simple_for_the_borel_trivial_character() {
        let alg = algebra(Preset::Sl3);
        let levi0 = alg.levi(&[]).unwrap();
        let triv0 = trivial_char(&levi0).unwrap();
        for q in [vec![], vec![0usize], vec![0usize, 1usize]] {
            let (_, st, _) = steinberg(&alg, &[], &triv0, &q).unwrap();
            assert!(is_simple_scan(&st), "q = {q:?}");
        }
    }

    #[test]
    fn levi_induction_of_an_extension_checks_the_action_formula() {
        let alg = algebra(Preset::Sl3);
        let levi0 = alg.levi(&[]).unwrap();
        let triv0 = trivial_char(&levi0).unwrap();
        let e = extend(&alg, &[], &triv0, &[0]).unwrap();
        for variant in [Variant::Plain, Variant::Starred] {
            let ind = induce(&alg, &[0], &e, variant).unwrap();
            assert_eq!(ind.dim(), 3);
            for lam in [vec![1i64, 1], vec![-1, -1], vec![1, -2]] {
                coweight_action_check(&ind, &lam).unwrap();
            }
        }
    }

    #[test]
    fn pattern_module_inventories_match_the_classification() {
        let counts = [
            (Preset::Sl2, 3usize, 1usize),
            (Preset::Pgl2, 2, 2),
            (Preset::Sl3, 6, 1),
        ];
        for (preset, n, d) in counts {
            let alg = algebra(preset);
            let list = enumerate_supersingular(&alg).unwrap();
            assert_eq!(list.len(), n, "{preset:?}");
            for (_, m) in &list {
                assert_eq!(m.dim, d, "{preset:?}");
            }
        }
        let gl2 = algebra(Preset::Gl2);
        let list = enumerate_supersingular(&gl2).unwrap();
        assert!(!list.is_empty());
        for (_, m) in &list {
            assert_eq!(m.dim, 2);
        }
    }

    #[test]
    fn nilpotence_of_central_orbit_sums_detects_the_pattern_modules() {
        let alg = algebra(Preset::Sl2);
        for (_, m) in enumerate_supersingular(&alg).unwrap() {
            assert!(is_supersingular(&m, 2).unwrap());
        }
        let triv = trivial_char(&alg).unwrap();
        assert!(!is_supersingular(&triv, 2).unwrap());
    }

    #[test]
    fn twist_of_a_pattern_module_complements_the_subset() {
        let alg = algebra(Preset::Sl2);
        for (data, m) in enumerate_supersingular(&alg).unwrap() {
            let active = active_walls(&alg, &data.torus_char);
            let flipped = SsData {
                torus_char: data.torus_char.clone(),
                j_set: active
                    .iter()
                    .copied()
                    .filter(|k| !data.j_set.contains(k))
                    .collect(),
                omega_value: data.omega_value.clone(),
            };
            let expect = supersingular_module(&alg, &flipped).unwrap();
            let tw = twist_iota(&m).unwrap();
            let iso = find_isomorphism(&tw, &expect).unwrap();
            assert!(iso.is_invertible());
        }
    }

    #[test]
    fn dual_of_a_pattern_module_inverts_the_character() {
        let alg = algebra(Preset::Sl2);
        let qm1 = alg.cover.qm1;
        for (data, m) in enumerate_supersingular(&alg).unwrap() {
            let inverted = SsData {
                torus_char: data
                    .torus_char
                    .iter()
                    .map(|&e| (qm1 - e % qm1) % qm1)
                    .collect(),
                j_set: data.j_set.clone(),
                omega_value: match &data.omega_value {
                    None => None,
                    Some(w) => Some(w.inv().unwrap()),
                },
            };
            let expect = supersingular_module(&alg, &inverted).unwrap();
            let d = dual(&m).unwrap();
            let iso = find_isomorphism(&d, &expect).unwrap();
            assert!(iso.is_invertible());
        }
    }

    #[test]
    fn double_dual_returns_the_original_module() {
        let alg = algebra(Preset::Sl2);
        for (_, m) in enumerate_supersingular(&alg).unwrap() {
            let dd = dual(&dual(&m).unwrap()).unwrap();
            assert!(find_isomorphism(&dd, &m).unwrap().is_invertible());
        }
        let levi = alg.levi(&[]).unwrap();
        let ind = induce(&alg, &[], &trivial_char(&levi).unwrap(), Variant::Plain).unwrap();
        let dd = dual(&dual(&ind.module).unwrap()).unwrap();
        assert!(find_isomorphism(&dd, &ind.module).unwrap().is_invertible());
    }

    #[test]
    fn twist_of_plain_induction_is_starred_induction_of_twisted_coefficients() {
        for (preset, p) in [
            (Preset::Sl2, vec![]),
            (Preset::Sl3, vec![]),
            (Preset::Sl3, vec![0usize]),
        ] {
            let alg = algebra(preset);
            let levi = alg.levi(&p).unwrap();
            let sigma = trivial_char(&levi).unwrap();
            let twisted = twist_sign(&twist_iota(&sigma).unwrap(), &alg).unwrap();
            let lhs = twist_iota(&induce(&alg, &p, &sigma, Variant::Plain).unwrap().module)
                .unwrap();
            let rhs = induce(&alg, &p, &twisted, Variant::Starred).unwrap().module;
            let iso = find_isomorphism(&lhs, &rhs).unwrap();
            assert!(iso.is_invertible(), "{preset:?} {p:?}");
        }
    }

    #[test]
    fn twist_of_steinberg_complements_the_intermediate_subset() {
        let alg = algebra(Preset::Sl3);
        let levi = alg.levi(&[]).unwrap();
        let triv = trivial_char(&levi).unwrap();
        for q in [vec![], vec![0usize], vec![1usize], vec![0usize, 1usize]] {
            let (_, st, _) = steinberg(&alg, &[], &triv, &q).unwrap();
            let qc: Vec<usize> = alg.simple.iter().copied().filter(|i| !q.contains(i)).collect();
            let twisted = twist_sign(&twist_iota(&triv).unwrap(), &alg).unwrap();
            let (_, stc, _) = steinberg(&alg, &[], &twisted, &qc).unwrap();
            let lhs = twist_iota(&st).unwrap();
            let iso = find_isomorphism(&lhs, &stc).unwrap();
            assert!(iso.is_invertible(), "q = {q:?}");
        }
    }

    #[test]
    fn dual_of_induction_transports_across_the_longest_element() {
        let alg = algebra(Preset::Sl3);
        let levi = alg.levi(&[0]).unwrap();
        let sigma = trivial_char(&levi).unwrap();
        let ind = induce(&alg, &[0], &sigma, Variant::Plain).unwrap();
        let lhs = dual(&ind.module).unwrap();
        let (opp, nsig) = twist_by_n(&dual(&sigma).unwrap(), &alg).unwrap();
        assert_eq!(opp, vec![1]);
        let rhs = induce(&alg, &opp, &nsig, Variant::Starred).unwrap().module;
        let iso = find_isomorphism(&lhs, &rhs).unwrap();
        assert!(iso.is_invertible());
    }

    #[test]
    fn filtration_of_the_starred_induction_from_the_full_locus() {
        let alg = algebra(Preset::Sl3);
        let levi = alg.levi(&[]).unwrap();
        let triv = trivial_char(&levi).unwrap();
        let steps = iprime_filtration(&alg, &[], &triv).unwrap();
        assert_eq!(steps.len(), 4);
        let dims: Vec<usize> = steps.iter().map(|s| s.quotient_dim).collect();
        assert_eq!(dims, vec![1, 2, 2, 1]);
    }

    #[test]
    fn filtration_covers_both_extension_locus_branches_in_rank_one() {
        let alg = algebra(Preset::Sl2);
        let levi = alg.levi(&[]).unwrap();
        let mut full = 0;
        let mut regular = 0;
        for sigma in enumerate_characters(&levi) {
            let delta = delta_of_sigma(&alg, &[], &sigma).unwrap();
            let steps = iprime_filtration(&alg, &[], &sigma).unwrap();
            let total: usize = steps.iter().map(|s| s.quotient_dim).sum();
            assert_eq!(total, 2);
            if delta == vec![0] {
                assert_eq!(steps.len(), 2);
                full += 1;
            } else {
                assert_eq!(steps.len(), 1);
                regular += 1;
            }
        }
        assert!(full > 0 && regular > 0);
    }

    #[test]
    fn simple_modules_and_filtration_for_a_proper_extension_locus() {
        let alg = Algebra::new(Preset::Sl3, 2, 2).unwrap();
        let levi = alg.levi(&[]).unwrap();
        let sigma = enumerate_characters(&levi)
            .into_iter()
            .find(|s| delta_of_sigma(&alg, &[], s).unwrap() == vec![0])
            .unwrap();
        let bottom = simple_module(&alg, &[], &sigma, &[]).unwrap();
        let top = simple_module(&alg, &[], &sigma, &[0]).unwrap();
        assert_eq!(bottom.dim(), 3);
        assert_eq!(top.dim(), 3);
        assert!(is_simple_scan(&bottom.module));
        let steps = iprime_filtration(&alg, &[], &sigma).unwrap();
        let dims: Vec<usize> = steps.iter().map(|s| s.quotient_dim).collect();
        assert_eq!(dims, vec![3, 3]);
    }
}
