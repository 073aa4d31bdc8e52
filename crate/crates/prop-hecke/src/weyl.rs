//! Finite and extended affine Weyl groups attached to a root datum.
//!
//! The finite group is tabulated once (elements, reduced words, Bruhat
//! order); elements are plain indices into those tables.  Extended affine
//! elements are pairs `(finite part, coweight)` multiplied through the
//! semidirect product rule, with lengths given by the standard pairing
//! formula rather than by word search.  A subsystem view supports the same
//! operations for a Levi: lengths count only the hyperplanes of the
//! subsystem while coweights stay in the ambient lattice.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::root::{pair, RootDatum};

fn vec_add(a: &[i64], b: &[i64], c: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

fn vec_neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

fn mat_id(n: usize) -> Vec<i64> {
    let mut m = vec![0i64; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut m = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0 {
                for j in 0..n {
                    m[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    m
}

fn mat_apply(n: usize, a: &[i64], x: &[i64]) -> Vec<i64> {
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum())
        .collect()
}

/// The finite Weyl group, fully tabulated.
///
/// Elements are indices; index 0 is the identity.  Breadth-first closure
/// over right multiplication by the simple reflections yields shortlex
/// minimal reduced words, so `words[w].len()` is the length of `w`.
pub struct FiniteWeyl {
    pub datum: Arc<RootDatum>,
    pub size: usize,
    /// Action on the coweight lattice, one rank x rank matrix per element.
    cw_mats: Vec<Vec<i64>>,
    /// Action on the root lattice in simple-root coordinates.
    rt_mats: Vec<Vec<i64>>,
    pub words: Vec<Vec<usize>>,
    gens: Vec<usize>,
    mul_table: Vec<Vec<usize>>,
    inv_table: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
    bruhat: Vec<Vec<bool>>,
}

impl FiniteWeyl {
    pub fn new(datum: Arc<RootDatum>) -> Result<Arc<FiniteWeyl>> {
        let rank = datum.rank;
        let srank = datum.srank;
        // generator matrices
        let mut gen_cw = Vec::new();
        let mut gen_rt = Vec::new();
        for i in 0..srank {
            let mut sc = vec![0i64; srank];
            sc[i] = 1;
            let simple = crate::root::Root {
                alpha: datum.simple_roots[i].clone(),
                coroot: datum.simple_coroots[i].clone(),
                simple_coords: sc,
            };
            let mut cw = mat_id(rank);
            for j in 0..rank {
                let mut e = vec![0i64; rank];
                e[j] = 1;
                let col = datum.reflect(&simple, &e);
                for r in 0..rank {
                    cw[r * rank + j] = col[r];
                }
            }
            gen_cw.push(cw);
            let mut rt = mat_id(srank);
            for j in 0..srank {
                // s_i(a_j) = a_j - <a_j, a_i^vee> a_i
                let c = pair(&datum.simple_roots[j], &datum.simple_coroots[i]);
                rt[i * srank + j] = if i == j { -1 } else { -c };
            }
            gen_rt.push(rt);
        }

        let mut cw_mats = vec![mat_id(rank)];
        let mut rt_mats = vec![mat_id(srank)];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut index = HashMap::new();
        index.insert(mat_key(&cw_mats[0], &rt_mats[0]), 0usize);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &w in &frontier {
                for i in 0..srank {
                    let cw = mat_mul(rank, &cw_mats[w], &gen_cw[i]);
                    let rt = mat_mul(srank, &rt_mats[w], &gen_rt[i]);
                    let key = mat_key(&cw, &rt);
                    if !index.contains_key(&key) {
                        let id = cw_mats.len();
                        index.insert(key, id);
                        cw_mats.push(cw);
                        rt_mats.push(rt);
                        let mut word = words[w].clone();
                        word.push(i);
                        words.push(word);
                        next.push(id);
                    }
                }
            }
            frontier = next;
            if cw_mats.len() > 100_000 {
                return Err(Error::CapExceeded("finite Weyl group too large".into()));
            }
        }

        let size = cw_mats.len();
        let mut mul_table = vec![vec![0usize; size]; size];
        for a in 0..size {
            for b in 0..size {
                let cw = mat_mul(rank, &cw_mats[a], &cw_mats[b]);
                let rt = mat_mul(srank, &rt_mats[a], &rt_mats[b]);
                mul_table[a][b] = index[&mat_key(&cw, &rt)];
            }
        }
        let mut inv_table = vec![0usize; size];
        for a in 0..size {
            for b in 0..size {
                if mul_table[a][b] == 0 {
                    inv_table[a] = b;
                }
            }
        }

        let mut gens = vec![0usize; srank];
        for w in 0..size {
            if words[w].len() == 1 {
                gens[words[w][0]] = w;
            }
        }

        let mut w = FiniteWeyl {
            datum,
            size,
            cw_mats,
            rt_mats,
            words,
            gens,
            mul_table,
            inv_table,
            index,
            bruhat: Vec::new(),
        };
        w.bruhat = w.build_bruhat();
        Ok(Arc::new(w))
    }

    pub fn id(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a][b]
    }

    pub fn mul_many(&self, ws: &[usize]) -> usize {
        ws.iter().fold(0, |acc, &w| self.mul(acc, w))
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv_table[a]
    }

    pub fn len(&self, w: usize) -> i64 {
        self.words[w].len() as i64
    }

    pub fn gen(&self, i: usize) -> usize {
        self.gens[i]
    }

    /// Apply `w` to a coweight.
    pub fn act_cw(&self, w: usize, x: &[i64]) -> Vec<i64> {
        mat_apply(self.datum.rank, &self.cw_mats[w], x)
    }

    /// Apply `w` to a root written in simple-root coordinates.
    pub fn act_root(&self, w: usize, coords: &[i64]) -> Vec<i64> {
        mat_apply(self.datum.srank, &self.rt_mats[w], coords)
    }

    /// A nonzero root-lattice vector with uniform sign; true if positive.
    pub fn root_is_positive(coords: &[i64]) -> bool {
        coords.iter().any(|&c| c > 0)
    }

    /// Pairing of a root in simple coordinates with an ambient coweight.
    pub fn pair_coords(&self, coords: &[i64], x: &[i64]) -> i64 {
        coords
            .iter()
            .enumerate()
            .map(|(i, &c)| c * pair(&self.datum.simple_roots[i], x))
            .sum()
    }

    /// The element with the given coweight-action matrix, if tabulated.
    pub fn find_by_cw_mat(&self, cw: &[i64], rt: &[i64]) -> Option<usize> {
        self.index.get(&mat_key(cw, rt)).copied()
    }

    /// Reflection in the positive root with the given simple coordinates.
    pub fn reflection(&self, coords: &[i64]) -> Result<usize> {
        let rank = self.datum.rank;
        let srank = self.datum.srank;
        let root = self
            .datum
            .positive
            .iter()
            .find(|r| r.simple_coords == coords)
            .ok_or_else(|| Error::Config("reflection: not a positive root".into()))?;
        let mut cw = mat_id(rank);
        for j in 0..rank {
            let mut e = vec![0i64; rank];
            e[j] = 1;
            let col = self.datum.reflect(root, &e);
            for r in 0..rank {
                cw[r * rank + j] = col[r];
            }
        }
        let mut rt = mat_id(srank);
        for j in 0..srank {
            let mut e = vec![0i64; srank];
            e[j] = 1;
            // s_beta(a_j) = a_j - <a_j, beta^vee> beta
            let c = pair(&self.datum.simple_roots[j], &root.coroot);
            let col = vec_add(&e, &root.simple_coords, -c);
            for r in 0..srank {
                rt[r * srank + j] = col[r];
            }
        }
        self.find_by_cw_mat(&cw, &rt)
            .ok_or_else(|| Error::Config("reflection element not in group".into()))
    }

    pub fn right_descent(&self, w: usize, i: usize) -> bool {
        let mut e = vec![0i64; self.datum.srank];
        e[i] = 1;
        !Self::root_is_positive(&self.act_root(w, &e))
    }

    pub fn left_descent(&self, w: usize, i: usize) -> bool {
        self.right_descent(self.inv(w), i)
    }

    /// Simple indices sent to positive roots by `w`.
    pub fn delta_set(&self, w: usize) -> Vec<usize> {
        (0..self.datum.srank)
            .filter(|&i| !self.right_descent(w, i))
            .collect()
    }

    pub fn longest(&self) -> usize {
        (0..self.size)
            .max_by_key(|&w| self.words[w].len())
            .unwrap()
    }

    /// Members of the parabolic subgroup generated by the listed simples.
    pub fn subgroup(&self, p: &[usize]) -> Vec<usize> {
        let mut members = vec![0usize];
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut frontier = vec![0usize];
        while let Some(w) = frontier.pop() {
            for &i in p {
                let v = self.mul(w, self.gen(i));
                if !seen[v] {
                    seen[v] = true;
                    members.push(v);
                    frontier.push(v);
                }
            }
        }
        members.sort_by_key(|&w| (self.words[w].len(), self.words[w].clone()));
        members
    }

    /// Longest element of the parabolic subgroup.
    pub fn longest_of(&self, p: &[usize]) -> usize {
        *self
            .subgroup(p)
            .iter()
            .max_by_key(|&&w| self.words[w].len())
            .unwrap()
    }

    /// Minimal coset representatives `{w : w(Delta_P) > 0}` for `w W_{0,P}`.
    pub fn min_reps(&self, p: &[usize]) -> Vec<usize> {
        let mut reps: Vec<usize> = (0..self.size)
            .filter(|&w| p.iter().all(|&i| !self.right_descent(w, i)))
            .collect();
        reps.sort_by_key(|&w| (self.words[w].len(), self.words[w].clone()));
        reps
    }

    /// Minimal representatives `{w : w^{-1}(Delta_P) > 0}` for `W_{0,P} w`.
    pub fn min_reps_left(&self, p: &[usize]) -> Vec<usize> {
        let mut reps: Vec<usize> = (0..self.size)
            .filter(|&w| p.iter().all(|&i| !self.left_descent(w, i)))
            .collect();
        reps.sort_by_key(|&w| (self.words[w].len(), self.words[w].clone()));
        reps
    }

    /// Split `w = w1 w2` with `w1(Delta_P) > 0`, `w2` in the parabolic;
    /// the lengths add.
    pub fn split_right(&self, w: usize, p: &[usize]) -> (usize, usize) {
        let mut w1 = w;
        let mut w2 = 0usize;
        loop {
            match p.iter().find(|&&i| self.right_descent(w1, i)) {
                Some(&i) => {
                    let s = self.gen(i);
                    w1 = self.mul(w1, s);
                    w2 = self.mul(s, w2);
                }
                None => break,
            }
        }
        debug_assert_eq!(self.mul(w1, w2), w);
        (w1, w2)
    }

    fn build_bruhat(&self) -> Vec<Vec<bool>> {
        let mut le = vec![vec![false; self.size]; self.size];
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&w| self.words[w].len());
        for &w in &order {
            for v in 0..self.size {
                le[v][w] = self.bruhat_rec(v, w, &le);
            }
        }
        le
    }

    fn bruhat_rec(&self, v: usize, w: usize, le: &[Vec<bool>]) -> bool {
        if v == w {
            return true;
        }
        if self.words[v].len() >= self.words[w].len() {
            return false;
        }
        let i = *self.words[w].last().unwrap();
        let s = self.gen(i);
        let ws = self.mul(w, s);
        if self.right_descent(v, i) {
            le[self.mul(v, s)][ws]
        } else {
            le[v][ws]
        }
    }

    pub fn bruhat_le(&self, v: usize, w: usize) -> bool {
        self.bruhat[v][w]
    }

    /// Moebius function of the Bruhat order restricted to the minimal
    /// representatives for the parabolic `p`: zero when some `v s_a`
    /// (a in Delta_P) stays below `w`, otherwise a sign by length parity.
    pub fn mobius_min_reps(&self, v: usize, w: usize, p: &[usize]) -> i64 {
        if !self.bruhat_le(v, w) {
            return 0;
        }
        for &i in p {
            if self.bruhat_le(self.mul(v, self.gen(i)), w) {
                return 0;
            }
        }
        if (self.len(v) + self.len(w)) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

fn mat_key(cw: &[i64], rt: &[i64]) -> Vec<i64> {
    let mut k = cw.to_vec();
    k.push(i64::MIN);
    k.extend_from_slice(rt);
    k
}

/// Element of the extended affine Weyl group: finite part and coweight,
/// composed as `v . t_x` (reflection first, then translation).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AffElt {
    pub v: usize,
    pub x: Vec<i64>,
}

/// One letter of the affine generating set of a (sub)system: index 0 is
/// the affine wall, `1..=k` are the subsystem's simple reflections.
pub type Letter = usize;

/// Extended affine Weyl group of the full system or of a Levi subsystem.
///
/// Coweights always live in the ambient lattice; only the set of positive
/// roots entering the length formula changes between the two cases.
pub struct AffineWeyl {
    pub finite: Arc<FiniteWeyl>,
    /// Ambient indices of the subsystem's simple roots.
    pub simple: Vec<usize>,
    /// Positive roots of the subsystem, in ambient simple-root coordinates.
    pub sub_positive: Vec<Vec<i64>>,
    /// Highest root of the subsystem (absent for the torus).
    pub theta: Option<Vec<i64>>,
    pub theta_coroot: Option<Vec<i64>>,
    /// Finite Weyl group of the subsystem.
    pub sub_members: Vec<usize>,
    /// Letters: 0 (affine wall, when the subsystem is nonempty) then the
    /// subsystem's simple reflections in `simple` order.
    pub letter_count: usize,
    /// Conjugacy classes of letters under the affine group and the
    /// length-zero normalizer; class ids are 0-based and contiguous.
    pub letter_orbit: Vec<usize>,
    pub orbit_count: usize,
    /// Length-zero representative for each basis coweight class, when the
    /// class is nontrivial modulo the subsystem's coroot lattice.
    pub omega_reps: Vec<Option<AffElt>>,
    bruhat_memo: Mutex<HashMap<(AffElt, AffElt), bool>>,
}

impl AffineWeyl {
    pub fn full(finite: Arc<FiniteWeyl>) -> Result<Arc<AffineWeyl>> {
        let all: Vec<usize> = (0..finite.datum.srank).collect();
        AffineWeyl::sub(finite, &all)
    }

    pub fn sub(finite: Arc<FiniteWeyl>, simple: &[usize]) -> Result<Arc<AffineWeyl>> {
        let datum = finite.datum.clone();
        let sub_positive: Vec<Vec<i64>> = datum
            .positive
            .iter()
            .map(|r| r.simple_coords.clone())
            .filter(|c| {
                c.iter()
                    .enumerate()
                    .all(|(i, &ci)| ci == 0 || simple.contains(&i))
            })
            .collect();
        // connectivity: every preset Levi here has at most one component
        if !simple.is_empty() {
            let mut reach = vec![simple[0]];
            loop {
                let mut grew = false;
                for &i in simple {
                    if !reach.contains(&i)
                        && reach.iter().any(|&j| {
                            pair(&datum.simple_roots[i], &datum.simple_coroots[j]) != 0
                        })
                    {
                        reach.push(i);
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
            if reach.len() != simple.len() {
                return Err(Error::Config(
                    "subsystem with several components is not supported".into(),
                ));
            }
        }
        let theta = if simple.is_empty() {
            None
        } else {
            let t = sub_positive
                .iter()
                .max_by_key(|c| c.iter().sum::<i64>())
                .unwrap()
                .clone();
            for c in &sub_positive {
                if c != &t && c.iter().zip(&t).any(|(a, b)| a > b) {
                    return Err(Error::Config("subsystem has no highest root".into()));
                }
            }
            Some(t)
        };
        let theta_coroot = theta.as_ref().map(|t| {
            let root = datum
                .positive
                .iter()
                .find(|r| &r.simple_coords == t)
                .unwrap();
            root.coroot.clone()
        });
        let sub_members = finite.subgroup(simple);
        let letter_count = if simple.is_empty() { 0 } else { simple.len() + 1 };

        let mut aw = AffineWeyl {
            finite,
            simple: simple.to_vec(),
            sub_positive,
            theta,
            theta_coroot,
            sub_members,
            letter_count,
            letter_orbit: Vec::new(),
            orbit_count: 0,
            omega_reps: Vec::new(),
            bruhat_memo: Mutex::new(HashMap::new()),
        };
        aw.omega_reps = aw.find_omega_reps()?;
        let (orbit, count) = aw.letter_orbits();
        aw.letter_orbit = orbit;
        aw.orbit_count = count;
        Ok(Arc::new(aw))
    }

    pub fn rank(&self) -> usize {
        self.finite.datum.rank
    }

    pub fn id(&self) -> AffElt {
        AffElt {
            v: 0,
            x: vec![0; self.rank()],
        }
    }

    pub fn translation(&self, x: &[i64]) -> AffElt {
        AffElt {
            v: 0,
            x: x.to_vec(),
        }
    }

    pub fn mul(&self, a: &AffElt, b: &AffElt) -> AffElt {
        let f = &self.finite;
        AffElt {
            v: f.mul(a.v, b.v),
            x: vec_add(&f.act_cw(f.inv(b.v), &a.x), &b.x, 1),
        }
    }

    pub fn inv(&self, a: &AffElt) -> AffElt {
        let f = &self.finite;
        AffElt {
            v: f.inv(a.v),
            x: vec_neg(&f.act_cw(a.v, &a.x)),
        }
    }

    /// The letter as a group element.
    pub fn letter(&self, j: Letter) -> AffElt {
        assert!(j < self.letter_count, "letter out of range");
        if j == 0 {
            let theta = self.theta.as_ref().unwrap();
            let v = self.finite.reflection(theta).expect("theta reflection");
            AffElt {
                v,
                x: vec_neg(self.theta_coroot.as_ref().unwrap()),
            }
        } else {
            AffElt {
                v: self.finite.gen(self.simple[j - 1]),
                x: vec![0; self.rank()],
            }
        }
    }

    /// The root crossed by the letter: `theta` for the affine wall, else
    /// the simple root (both in ambient simple-root coordinates).
    pub fn letter_root(&self, j: Letter) -> Vec<i64> {
        if j == 0 {
            self.theta.as_ref().unwrap().clone()
        } else {
            let mut e = vec![0i64; self.finite.datum.srank];
            e[self.simple[j - 1]] = 1;
            e
        }
    }

    /// Ambient coroot of the wall crossed by the letter.
    pub fn letter_coroot(&self, j: Letter) -> Vec<i64> {
        if j == 0 {
            self.theta_coroot.as_ref().unwrap().clone()
        } else {
            self.finite.datum.simple_coroots[self.simple[j - 1]].clone()
        }
    }

    /// Length: number of subsystem hyperplanes separating the base alcove
    /// from its image.
    pub fn len(&self, a: &AffElt) -> i64 {
        let f = &self.finite;
        let mut l = 0i64;
        for c in &self.sub_positive {
            let p = f.pair_coords(c, &a.x);
            if FiniteWeyl::root_is_positive(&f.act_root(a.v, c)) {
                l += p.abs();
            } else {
                l += (p + 1).abs();
            }
        }
        l
    }

    pub fn right_descent(&self, a: &AffElt, j: Letter) -> bool {
        let s = self.letter(j);
        self.len(&self.mul(a, &s)) < self.len(a)
    }

    pub fn left_descent(&self, a: &AffElt, j: Letter) -> bool {
        let s = self.letter(j);
        self.len(&self.mul(&s, a)) < self.len(a)
    }

    /// Reduced word (letters) and the length-zero remainder `u`, with
    /// `a = letters . u`.
    pub fn word(&self, a: &AffElt) -> (Vec<Letter>, AffElt) {
        let mut letters = Vec::new();
        let mut cur = a.clone();
        let mut len = self.len(&cur);
        while len > 0 {
            let mut found = None;
            for j in 0..self.letter_count {
                if self.left_descent(&cur, j) {
                    found = Some(j);
                    break;
                }
            }
            let j = found.expect("positive length without a descent");
            cur = self.mul(&self.letter(j), &cur);
            letters.push(j);
            len = self.len(&cur);
        }
        (letters, cur)
    }

    /// Per-orbit letter counts of a reduced word; order-independent.
    pub fn orbit_lengths(&self, a: &AffElt) -> Vec<i64> {
        let (letters, _) = self.word(a);
        let mut counts = vec![0i64; self.orbit_count.max(1)];
        for j in letters {
            counts[self.letter_orbit[j]] += 1;
        }
        counts
    }

    /// Whether the coweight lies in the subsystem's coroot lattice.
    pub fn in_coroot_lattice(&self, x: &[i64]) -> bool {
        self.coroot_coordinates(x).is_some()
    }

    /// Integer coordinates of `x` on the subsystem's simple coroots.
    pub fn coroot_coordinates(&self, x: &[i64]) -> Option<Vec<i64>> {
        // exact rational elimination on the coroot basis
        let basis: Vec<&Vec<i64>> = self
            .simple
            .iter()
            .map(|&i| &self.finite.datum.simple_coroots[i])
            .collect();
        let n = self.rank();
        let k = basis.len();
        if k == 0 {
            return if x.iter().all(|&c| c == 0) {
                Some(vec![])
            } else {
                None
            };
        }
        // solve sum c_j basis_j = x over the rationals, then check integrality
        let mut m: Vec<Vec<f64>> = (0..n)
            .map(|r| {
                let mut row: Vec<f64> = (0..k).map(|j| basis[j][r] as f64).collect();
                row.push(x[r] as f64);
                row
            })
            .collect();
        let mut piv_cols = Vec::new();
        let mut r0 = 0;
        for c in 0..k {
            let piv = (r0..n).find(|&r| m[r][c].abs() > 1e-9);
            if let Some(pr) = piv {
                m.swap(r0, pr);
                let d = m[r0][c];
                for cc in 0..=k {
                    m[r0][cc] /= d;
                }
                for r in 0..n {
                    if r != r0 && m[r][c].abs() > 1e-12 {
                        let f = m[r][c];
                        for cc in 0..=k {
                            m[r][cc] -= f * m[r0][cc];
                        }
                    }
                }
                piv_cols.push(c);
                r0 += 1;
            }
        }
        // consistency and integrality
        for r in r0..n {
            if m[r][k].abs() > 1e-6 {
                return None;
            }
        }
        let mut coords = vec![0i64; k];
        for (idx, &c) in piv_cols.iter().enumerate() {
            let v = m[idx][k];
            let vi = v.round();
            if (v - vi).abs() > 1e-6 {
                return None;
            }
            coords[c] = vi as i64;
        }
        // verify exactly in integers
        let mut acc = vec![0i64; n];
        for j in 0..k {
            acc = vec_add(&acc, basis[j], coords[j]);
        }
        if acc == x {
            Some(coords)
        } else {
            None
        }
    }

    /// Whether the element lies in the affine (non-extended) subgroup.
    pub fn in_affine(&self, a: &AffElt) -> bool {
        self.sub_members.contains(&a.v) && self.in_coroot_lattice(&self.omega_free_x(a))
    }

    fn omega_free_x(&self, a: &AffElt) -> Vec<i64> {
        // x-part after removing the finite part's contribution is just x
        // for the translation test: v t_x in W_aff iff v in W_{0,sub} and
        // x in the coroot lattice.
        a.x.clone()
    }

    fn find_omega_reps(&self) -> Result<Vec<Option<AffElt>>> {
        let n = self.rank();
        let mut reps = Vec::new();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            if self.in_coroot_lattice(&e) {
                reps.push(None);
                continue;
            }
            let found = self.search_len_zero(&e)?;
            reps.push(Some(found));
        }
        Ok(reps)
    }

    /// A length-zero element whose coweight is congruent to `class_rep`
    /// modulo the subsystem coroot lattice.
    pub fn search_len_zero(&self, class_rep: &[i64]) -> Result<AffElt> {
        let k = self.simple.len();
        let mut shifts = vec![vec![0i64; k]];
        let radius = 4i64;
        for j in 0..k {
            let mut next = Vec::new();
            for s in shifts {
                for c in -radius..=radius {
                    let mut s2 = s.clone();
                    s2[j] = c;
                    next.push(s2);
                }
            }
            shifts = next;
        }
        for &v in &self.sub_members {
            for s in &shifts {
                let mut x = class_rep.to_vec();
                for (j, &c) in s.iter().enumerate() {
                    x = vec_add(
                        &x,
                        &self.finite.datum.simple_coroots[self.simple[j]],
                        c,
                    );
                }
                let cand = AffElt { v, x };
                if self.len(&cand) == 0 {
                    return Ok(cand);
                }
            }
        }
        Err(Error::Config(
            "no length-zero representative found in search box".into(),
        ))
    }

    /// Express a length-zero element as (product of omega representatives)
    /// times an affine-subgroup length-zero remainder; returns the
    /// exponent vector per basis class and the remainder.
    pub fn omega_decompose(&self, a: &AffElt) -> Result<(Vec<i64>, AffElt)> {
        if self.len(a) != 0 {
            return Err(Error::Config("omega_decompose expects length zero".into()));
        }
        let mut u = self.id();
        let mut exps = vec![0i64; self.rank()];
        for (i, rep) in self.omega_reps.iter().enumerate() {
            if let Some(r) = rep {
                exps[i] = a.x[i];
                let mut pw = self.id();
                let e = a.x[i];
                let (base, n) = if e >= 0 {
                    (r.clone(), e)
                } else {
                    (self.inv(r), -e)
                };
                for _ in 0..n {
                    pw = self.mul(&pw, &base);
                }
                u = self.mul(&u, &pw);
            }
        }
        let rem = self.mul(&self.inv(&u), a);
        if !self.in_affine(&rem) {
            return Err(Error::Config(
                "omega decomposition remainder not in affine subgroup".into(),
            ));
        }
        if self.len(&rem) != 0 {
            return Err(Error::Config("omega remainder has positive length".into()));
        }
        Ok((exps, rem))
    }

    fn letter_orbits(&self) -> (Vec<usize>, usize) {
        let lc = self.letter_count;
        if lc == 0 {
            return (Vec::new(), 0);
        }
        let mut parent: Vec<usize> = (0..lc).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        // odd braid bonds identify parameters inside the affine group
        for a in 0..lc {
            for b in (a + 1)..lc {
                let p = self.mul(&self.letter(a), &self.letter(b));
                let mut cur = self.id();
                let mut order = 0;
                for k in 1..=8 {
                    cur = self.mul(&cur, &p);
                    if cur == self.id() {
                        order = k;
                        break;
                    }
                }
                if order > 0 && order % 2 == 1 {
                    let ra = find(&mut parent, a);
                    let rb = find(&mut parent, b);
                    parent[ra] = rb;
                }
            }
        }
        // conjugation by length-zero elements permutes the walls
        for rep in self.omega_reps.iter().flatten() {
            for a in 0..lc {
                let c = self.mul(&self.mul(rep, &self.letter(a)), &self.inv(rep));
                for b in 0..lc {
                    if c == self.letter(b) {
                        let ra = find(&mut parent, a);
                        let rb = find(&mut parent, b);
                        parent[ra] = rb;
                    }
                }
            }
        }
        let mut ids = HashMap::new();
        let mut orbit = vec![0usize; lc];
        for i in 0..lc {
            let r = find(&mut parent, i);
            let next = ids.len();
            let id = *ids.entry(r).or_insert(next);
            orbit[i] = id;
        }
        (orbit, ids.len())
    }

    /// Extended Bruhat order: comparable only within the same coset of
    /// the affine subgroup, compared there by the Coxeter order.
    pub fn bruhat_le(&self, a: &AffElt, b: &AffElt) -> bool {
        let (_, ua) = self.word(a);
        let (_, ub) = self.word(b);
        if ua != ub {
            return false;
        }
        let ui = self.inv(&ua);
        let aa = self.mul(a, &ui);
        let bb = self.mul(b, &ui);
        self.coxeter_le(&aa, &bb)
    }

    fn coxeter_le(&self, a: &AffElt, b: &AffElt) -> bool {
        if a == b {
            return true;
        }
        if self.len(a) >= self.len(b) {
            return false;
        }
        if let Some(&r) = self
            .bruhat_memo
            .lock()
            .unwrap()
            .get(&(a.clone(), b.clone()))
        {
            return r;
        }
        let j = (0..self.letter_count)
            .find(|&j| self.left_descent(b, j))
            .expect("positive length without a left descent");
        let s = self.letter(j);
        let sb = self.mul(&s, b);
        let sa = self.mul(&s, a);
        let r = if self.len(&sa) < self.len(a) {
            self.coxeter_le(&sa, &sb)
        } else {
            self.coxeter_le(a, &sb)
        };
        self.bruhat_memo
            .lock()
            .unwrap()
            .insert((a.clone(), b.clone()), r);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root::{Preset, RootDatum};

    fn finite(p: Preset) -> Arc<FiniteWeyl> {
        let d = Arc::new(RootDatum::preset_default(p).unwrap());
        FiniteWeyl::new(d).unwrap()
    }

    #[test]
    fn symmetric_group_tables() {
        let w = finite(Preset::Sl3);
        assert_eq!(w.size, 6);
        assert_eq!(w.len(w.longest()), 3);
        // inversions match lengths
        for e in 0..w.size {
            let inv_count = w
                .datum
                .positive
                .iter()
                .filter(|r| {
                    !FiniteWeyl::root_is_positive(&w.act_root(e, &r.simple_coords))
                })
                .count() as i64;
            assert_eq!(inv_count, w.len(e));
        }
        // parabolic representatives
        assert_eq!(w.min_reps(&[0]).len(), 3);
        assert_eq!(w.min_reps_left(&[0]).len(), 3);
        // split is length-additive
        for e in 0..w.size {
            let (a, b) = w.split_right(e, &[1]);
            assert_eq!(w.mul(a, b), e);
            assert_eq!(w.len(a) + w.len(b), w.len(e));
        }
    }

    /// Subword characterization as an independent check of the Bruhat table.
    fn subword_le(w: &FiniteWeyl, v: usize, word: &[usize]) -> bool {
        if v == 0 {
            return true;
        }
        if word.is_empty() {
            return false;
        }
        fn rec(w: &FiniteWeyl, v: usize, word: &[usize]) -> bool {
            if v == 0 {
                return true;
            }
            if word.len() < w.words[v].len() {
                return false;
            }
            let i = word[0];
            let rest = &word[1..];
            if rec(w, v, rest) {
                return true;
            }
            if w.left_descent(v, i) {
                rec(w, w.mul(w.gen(i), v), rest)
            } else {
                false
            }
        }
        rec(w, v, word)
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        for p in [Preset::Sl3, Preset::Gl2, Preset::Sl2] {
            let w = finite(p);
            for a in 0..w.size {
                for b in 0..w.size {
                    let word = w.words[b].clone();
                    assert_eq!(
                        w.bruhat_le(a, b),
                        subword_le(&w, a, &word),
                        "{:?} {} {}",
                        p,
                        a,
                        b
                    );
                }
            }
        }
    }

    #[test]
    fn mobius_closed_form_matches_inversion() {
        for p in [Preset::Sl3, Preset::Sl2] {
            let w = finite(p);
            let subsets: Vec<Vec<usize>> = match w.datum.srank {
                1 => vec![vec![]],
                2 => vec![vec![], vec![0], vec![1]],
                _ => vec![vec![]],
            };
            for sub in subsets {
                let reps = w.min_reps(&sub);
                let n = reps.len();
                // zeta matrix and its inverse over the integers
                let mut zeta = vec![vec![0i64; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        if w.bruhat_le(reps[i], reps[j]) {
                            zeta[i][j] = 1;
                        }
                    }
                }
                // invert the unitriangular matrix by back substitution
                let mut mu = vec![vec![0i64; n]; n];
                for i in 0..n {
                    mu[i][i] = 1;
                    for j in 0..n {
                        if i != j && w.bruhat_le(reps[i], reps[j]) {
                            let mut s = 0i64;
                            for k in 0..n {
                                if k != j
                                    && w.bruhat_le(reps[i], reps[k])
                                    && w.bruhat_le(reps[k], reps[j])
                                {
                                    s += mu[i][k];
                                }
                            }
                            mu[i][j] = -s;
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(
                            w.mobius_min_reps(reps[i], reps[j], &sub),
                            mu[i][j],
                            "{:?} sub {:?} {} {}",
                            p,
                            sub,
                            i,
                            j
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn affine_lengths_and_words() {
        let w = finite(Preset::Sl2);
        let a = AffineWeyl::full(w).unwrap();
        let s0 = a.letter(0);
        let s1 = a.letter(1);
        assert_eq!(a.len(&s0), 1);
        assert_eq!(a.len(&s1), 1);
        let t = a.translation(&[1]);
        assert_eq!(a.len(&t), 2);
        // s0 s1 = t_{a^vee}
        assert_eq!(a.mul(&s0, &s1), t);
        // length equals word length out to a ball
        for c in -4i64..=4 {
            for v in 0..2usize {
                let e = AffElt { v, x: vec![c] };
                let (letters, u) = a.word(&e);
                assert_eq!(letters.len() as i64, a.len(&e));
                assert_eq!(a.len(&u), 0);
                let mut acc = a.id();
                for &j in &letters {
                    acc = a.mul(&acc, &a.letter(j));
                }
                acc = a.mul(&acc, &u);
                assert_eq!(acc, e);
            }
        }
        // the two walls are not conjugate here
        assert_eq!(a.orbit_count, 2);
    }

    #[test]
    fn omega_representatives() {
        // trivial for the simply connected presets
        let sl3 = AffineWeyl::full(finite(Preset::Sl3)).unwrap();
        assert!(sl3.omega_reps.iter().all(|r| r.is_none()));
        assert_eq!(sl3.orbit_count, 1);

        let pgl2 = AffineWeyl::full(finite(Preset::Pgl2)).unwrap();
        let reps: Vec<_> = pgl2.omega_reps.iter().flatten().collect();
        assert_eq!(reps.len(), 1);
        assert_eq!(pgl2.len(reps[0]), 0);
        assert_eq!(pgl2.orbit_count, 1);

        let gl2 = AffineWeyl::full(finite(Preset::Gl2)).unwrap();
        let reps: Vec<_> = gl2.omega_reps.iter().flatten().collect();
        assert_eq!(reps.len(), 2);
        assert_eq!(gl2.orbit_count, 1);
        // omega decomposition closes for small length-zero elements
        let u = reps[0].clone();
        let (exps, rem) = gl2.omega_decompose(&u).unwrap();
        assert!(exps.iter().any(|&e| e != 0));
        assert_eq!(gl2.len(&rem), 0);
    }

    #[test]
    fn extended_bruhat_small_cases() {
        let w = finite(Preset::Sl2);
        let a = AffineWeyl::full(w).unwrap();
        let s0 = a.letter(0);
        let s1 = a.letter(1);
        let id = a.id();
        assert!(a.bruhat_le(&id, &s0));
        assert!(a.bruhat_le(&id, &s1));
        assert!(!a.bruhat_le(&s0, &s1));
        let t = a.mul(&s0, &s1);
        assert!(a.bruhat_le(&s0, &t));
        assert!(a.bruhat_le(&s1, &t));
        // antisymmetry on a small ball
        let mut ball = vec![id.clone()];
        for _ in 0..3 {
            let mut next = ball.clone();
            for e in &ball {
                for j in 0..2 {
                    let f = a.mul(e, &a.letter(j));
                    if !next.contains(&f) {
                        next.push(f);
                    }
                }
            }
            ball = next;
        }
        for x in &ball {
            for y in &ball {
                if x != y && a.bruhat_le(x, y) {
                    assert!(!a.bruhat_le(y, x), "{:?} {:?}", x, y);
                }
            }
        }
    }

    #[test]
    fn levi_subsystem() {
        let w = finite(Preset::Sl3);
        let levi = AffineWeyl::sub(w.clone(), &[0]).unwrap();
        assert_eq!(levi.sub_positive.len(), 1);
        assert_eq!(levi.letter_count, 2);
        // the torus Levi
        let torus = AffineWeyl::sub(w, &[]).unwrap();
        assert_eq!(torus.letter_count, 0);
        assert_eq!(torus.len(&torus.translation(&[3, -2])), 0);
        let reps: Vec<_> = torus.omega_reps.iter().flatten().collect();
        assert_eq!(reps.len(), 2);
        // rank-one Levi inside the rank-two lattice has a length-zero
        // representative for the complementary coweight class
        let u = levi.omega_reps.iter().flatten().next().unwrap();
        assert_eq!(levi.len(u), 0);
        assert!(u.v != 0 || !levi.in_coroot_lattice(&u.x));
    }
}
