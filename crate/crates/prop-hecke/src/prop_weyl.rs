//! The pro-p cover of the extended affine Weyl group.
//!
//! Elements are triples `(v, x, t)`: a finite Weyl part, a coweight, and a
//! residue-torus part in discrete-log coordinates modulo `q - 1`.  The only
//! nonobvious ingredient of the product is the 2-cocycle recording how the
//! chosen finite lifts fail to be multiplicative; it is computed once and
//! exactly from a monomial matrix model over the residue field, so every
//! torus correction downstream (squares of wall lifts, quadratic-relation
//! constants, conjugation) is genuinely that of the group and not a guess.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use crate::coeff::{Fq, FqTables};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::root::{Preset, RootDatum};
use crate::weyl::{AffElt, AffineWeyl, FiniteWeyl, Letter};

/// Element of the cover: finite part `v` (index into the finite Weyl
/// tables), coweight `x`, torus part `t` with entries modulo `q - 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ProPElt {
    pub v: usize,
    pub x: Vec<i64>,
    pub t: Vec<u32>,
}

/// Monomial matrix model of the finite lifts over the residue field.
struct MatrixModel {
    tables: Arc<FqTables>,
    n: usize,
    /// Quotient by scalars: canonicalize by scaling the first nonzero entry
    /// (row-major) to one.
    pgl: bool,
    /// Diagonal exponents of each basis coweight.
    diag_exps: Vec<Vec<i64>>,
    /// Row/column position of each positive root, keyed by its coordinates
    /// in the simple-root basis.
    root_pos: HashMap<Vec<i64>, (usize, usize)>,
}

impl MatrixModel {
    fn new(datum: &RootDatum) -> Result<MatrixModel> {
        let tables = FqTables::get(datum.p, datum.f)?;
        let (n, pgl, diag_exps): (usize, bool, Vec<Vec<i64>>) = match datum.preset {
            Preset::Sl2 => (2, false, vec![vec![1, -1]]),
            Preset::Pgl2 => (2, true, vec![vec![1, 0]]),
            Preset::Gl2 => (2, false, vec![vec![1, 0], vec![0, 1]]),
            Preset::Sl3 => (3, false, vec![vec![1, -1, 0], vec![0, 1, -1]]),
        };
        let mut root_pos = HashMap::new();
        for r in &datum.positive {
            let mut found = None;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    if (0..datum.rank).all(|k| diag_exps[k][i] - diag_exps[k][j] == r.alpha[k]) {
                        assert!(found.is_none(), "ambiguous root position");
                        found = Some((i, j));
                    }
                }
            }
            let pos = found.ok_or_else(|| Error::Config("root has no matrix position".into()))?;
            root_pos.insert(r.simple_coords.clone(), pos);
        }
        Ok(MatrixModel {
            tables,
            n,
            pgl,
            diag_exps,
            root_pos,
        })
    }

    fn identity(&self) -> Matrix {
        Matrix::identity(&self.tables, self.n)
    }

    fn canonical(&self, m: &Matrix) -> Matrix {
        if !self.pgl {
            return m.clone();
        }
        for r in 0..self.n {
            for c in 0..self.n {
                let e = m.get(r, c);
                if e.index() != 0 {
                    return m.scale(&e.inv().unwrap());
                }
            }
        }
        unreachable!("zero matrix in model");
    }

    fn key(&self, m: &Matrix) -> Vec<u32> {
        let cm = self.canonical(m);
        let mut k = Vec::with_capacity(self.n * self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                k.push(cm.get(r, c).index());
            }
        }
        k
    }

    /// Standard lift of the reflection in a positive root, built from the
    /// root's rank-one triple; a monomial matrix.
    fn triple_lift(&self, simple_coords: &[i64]) -> Matrix {
        let &(i, j) = self
            .root_pos
            .get(simple_coords)
            .expect("positive root position");
        let t = &self.tables;
        let one = Fq::int(t, 1);
        let xp = Matrix::from_fn(self.n, self.n, |r, c| {
            if r == c || (r == i && c == j) {
                one.clone()
            } else {
                Fq::int(t, 0)
            }
        });
        let xm = Matrix::from_fn(self.n, self.n, |r, c| {
            if r == c {
                one.clone()
            } else if r == j && c == i {
                Fq::int(t, -1)
            } else {
                Fq::int(t, 0)
            }
        });
        xp.mul(&xm).mul(&xp)
    }

    /// The torus element with the given discrete-log coordinates.
    fn torus_matrix(&self, coords: &[u32]) -> Matrix {
        let t = &self.tables;
        let mut diag: Vec<u64> = vec![0; self.n];
        for (k, &c) in coords.iter().enumerate() {
            for i in 0..self.n {
                let e = self.diag_exps[k][i];
                let qm1 = (t.q - 1) as i64;
                let contrib = ((e * c as i64) % qm1 + qm1) % qm1;
                diag[i] = (diag[i] + contrib as u64) % qm1 as u64;
            }
        }
        Matrix::from_fn(self.n, self.n, |r, c| {
            if r == c {
                Fq::gen_pow(t, diag[r])
            } else {
                Fq::int(t, 0)
            }
        })
    }
}

/// Shared pro-p cover data: cocycle of the finite lifts plus the matrix
/// model it came from.
pub struct Cover {
    pub finite: Arc<FiniteWeyl>,
    pub residue: Arc<FqTables>,
    pub qm1: u32,
    pub rank: usize,
    cocycle: Vec<Vec<u32>>,
    torus_index: HashMap<Vec<u32>, Vec<u32>>,
    model: MatrixModel,
}

impl Cover {
    pub fn new(finite: Arc<FiniteWeyl>) -> Result<Arc<Cover>> {
        let datum = finite.datum.clone();
        let model = MatrixModel::new(&datum)?;
        let rank = datum.rank;
        let qm1 = model.tables.q - 1;

        // all torus canonical forms, by discrete-log coordinates
        let mut torus_index = HashMap::new();
        let mut coords = vec![0u32; rank];
        loop {
            let m = model.torus_matrix(&coords);
            let prev = torus_index.insert(model.key(&m), coords.clone());
            if prev.is_some() {
                return Err(Error::Config("torus coordinates not faithful".into()));
            }
            let mut k = 0;
            loop {
                if k == rank {
                    break;
                }
                coords[k] += 1;
                if coords[k] < qm1.max(1) {
                    break;
                }
                coords[k] = 0;
                k += 1;
            }
            if k == rank {
                break;
            }
        }

        // finite lifts along the tabulated shortlex words
        let mut lifts: Vec<Matrix> = Vec::with_capacity(finite.size);
        for w in 0..finite.size {
            let mut m = model.identity();
            for &i in &finite.words[w] {
                let mut sc = vec![0i64; datum.srank];
                sc[i] = 1;
                m = m.mul(&model.triple_lift(&sc));
            }
            lifts.push(m);
        }

        let torus_of = |m: &Matrix| -> Result<Vec<u32>> {
            torus_index
                .get(&model.key(m))
                .cloned()
                .ok_or_else(|| Error::Config("expected a torus matrix".into()))
        };

        // right defect of the section: lift(a) lift(b) = lift(ab) tau(a, b),
        // so the torus correction lands behind the lift in the normal form
        let mut cocycle = Vec::with_capacity(finite.size * finite.size);
        for a in 0..finite.size {
            for b in 0..finite.size {
                let ab = finite.mul(a, b);
                let m = lifts[ab].inverse()?.mul(&lifts[a]).mul(&lifts[b]);
                cocycle.push(torus_of(&m)?);
            }
        }

        let cover = Cover {
            finite: finite.clone(),
            residue: model.tables.clone(),
            qm1,
            rank,
            cocycle,
            torus_index,
            model,
        };

        // conjugation by a lift moves torus coordinates by the coweight
        // matrix of the finite part
        for v in 0..finite.size {
            for k in 0..rank {
                let mut c = vec![0u32; rank];
                c[k] = 1 % qm1.max(1);
                let tmat = cover.model.torus_matrix(&c);
                let conj = lifts[v].mul(&tmat).mul(&lifts[v].inverse()?);
                let got = cover
                    .torus_index
                    .get(&cover.model.key(&conj))
                    .cloned()
                    .ok_or_else(|| Error::Config("conjugate not in torus".into()))?;
                let mut e = vec![0i64; rank];
                e[k] = 1;
                let want = cover.reduce_t(&finite.act_cw(v, &e));
                if got != want {
                    return Err(Error::Config(
                        "torus conjugation disagrees with the coweight action".into(),
                    ));
                }
            }
        }

        Ok(Arc::new(cover))
    }

    pub fn size(&self) -> usize {
        self.finite.size
    }

    fn tau(&self, a: usize, b: usize) -> &[u32] {
        &self.cocycle[a * self.finite.size + b]
    }

    /// Reduce an integer vector to torus coordinates modulo `q - 1`.
    pub fn reduce_t(&self, v: &[i64]) -> Vec<u32> {
        let m = self.qm1.max(1) as i64;
        v.iter().map(|&a| (((a % m) + m) % m) as u32).collect()
    }

    fn act_t(&self, v: usize, t: &[u32]) -> Vec<u32> {
        let as_i: Vec<i64> = t.iter().map(|&a| a as i64).collect();
        self.reduce_t(&self.finite.act_cw(v, &as_i))
    }

    fn add_t(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let m = self.qm1.max(1);
        a.iter().zip(b).map(|(&x, &y)| (x + y) % m).collect()
    }

    pub fn id(&self) -> ProPElt {
        ProPElt {
            v: 0,
            x: vec![0; self.rank],
            t: vec![0; self.rank],
        }
    }

    /// The chosen lift of a finite Weyl element.
    pub fn n_of(&self, w: usize) -> ProPElt {
        ProPElt {
            v: w,
            x: vec![0; self.rank],
            t: vec![0; self.rank],
        }
    }

    pub fn translation(&self, x: &[i64]) -> ProPElt {
        ProPElt {
            v: 0,
            x: x.to_vec(),
            t: vec![0; self.rank],
        }
    }

    pub fn torus(&self, t: &[u32]) -> ProPElt {
        ProPElt {
            v: 0,
            x: vec![0; self.rank],
            t: t.to_vec(),
        }
    }

    pub fn mul(&self, a: &ProPElt, b: &ProPElt) -> ProPElt {
        let f = &self.finite;
        let bvi = f.inv(b.v);
        let mut t = self.tau(a.v, b.v).to_vec();
        t = self.add_t(&t, &self.act_t(bvi, &a.t));
        t = self.add_t(&t, &b.t);
        ProPElt {
            v: f.mul(a.v, b.v),
            x: f
                .act_cw(bvi, &a.x)
                .iter()
                .zip(&b.x)
                .map(|(p, q)| p + q)
                .collect(),
            t,
        }
    }

    pub fn inv(&self, a: &ProPElt) -> ProPElt {
        let f = &self.finite;
        let vi = f.inv(a.v);
        let neg = |t: &[u32]| -> Vec<u32> {
            let m = self.qm1.max(1);
            t.iter().map(|&x| (m - x % m) % m).collect()
        };
        let mut t = neg(self.tau(a.v, vi));
        t = self.add_t(&t, &neg(&self.act_t(a.v, &a.t)));
        ProPElt {
            v: vi,
            x: self.finite.act_cw(a.v, &a.x).iter().map(|c| -c).collect(),
            t,
        }
    }

    pub fn conj(&self, a: &ProPElt, b: &ProPElt) -> ProPElt {
        self.mul(&self.mul(a, b), &self.inv(a))
    }

    pub fn proj(&self, a: &ProPElt) -> AffElt {
        AffElt {
            v: a.v,
            x: a.x.clone(),
        }
    }

    /// Torus coordinates of the image of `u = g^k` under the coweight seen
    /// as a cocharacter of the torus.
    pub fn coweight_torus(&self, coweight: &[i64], k: u32) -> Vec<u32> {
        let scaled: Vec<i64> = coweight.iter().map(|&c| c * k as i64).collect();
        self.reduce_t(&scaled)
    }

    /// Defect between the standard rank-one lift of the reflection in the
    /// given positive root and the word lift of the same reflection.
    fn triple_defect(&self, simple_coords: &[i64]) -> Result<Vec<u32>> {
        let w = self.finite.reflection(simple_coords)?;
        let mut word_lift = self.model.identity();
        for &i in &self.finite.words[w] {
            let mut sc = vec![0i64; self.finite.datum.srank];
            sc[i] = 1;
            word_lift = word_lift.mul(&self.model.triple_lift(&sc));
        }
        let m = self
            .model
            .triple_lift(simple_coords)
            .mul(&word_lift.inverse()?);
        self.torus_index
            .get(&self.model.key(&m))
            .cloned()
            .ok_or_else(|| Error::Config("reflection defect not in torus".into()))
    }
}

/// Wall of one affine generator: its lift in the cover, the root and
/// coroot of the hyperplane, the parameter orbit, and the multiset of
/// torus points entering the quadratic relation.
pub struct WallData {
    pub lift: ProPElt,
    pub root_coords: Vec<i64>,
    pub coroot: Vec<i64>,
    pub orbit: usize,
    /// Multiplicity of each torus coordinate vector in the image of the
    /// wall coroot; the multiplicities sum to `q - 1`.
    pub cmap: BTreeMap<Vec<u32>, u32>,
}

/// Group-level context for one Hecke algebra: the cover, the (sub)system
/// giving lengths and walls, and the coefficient field.
pub struct Algebra {
    pub cover: Arc<Cover>,
    pub affine: Arc<AffineWeyl>,
    pub ctx: Arc<FqTables>,
    /// Ambient indices of this algebra's simple roots.
    pub simple: Vec<usize>,
    pub walls: Vec<WallData>,
    pub omega_lifts: Vec<Option<ProPElt>>,
    /// Discrete-log span of the system's coroots: the torus part of the
    /// affine subgroup of the cover.
    pub span: HashSet<Vec<u32>>,
    aff1_memo: Mutex<HashMap<ProPElt, bool>>,
}

impl Algebra {
    /// Full algebra of the preset over the default residue field, with
    /// coefficients in F_{cp^cf}.
    pub fn new(preset: Preset, cp: u32, cf: u32) -> Result<Arc<Algebra>> {
        let (p, f) = preset.default_field();
        Algebra::with_fields(preset, p, f, cp, cf)
    }

    pub fn with_fields(preset: Preset, p: u32, f: u32, cp: u32, cf: u32) -> Result<Arc<Algebra>> {
        let datum = Arc::new(RootDatum::new(preset, p, f)?);
        if cp != datum.p {
            return Err(Error::BadField(format!(
                "coefficient characteristic {cp} must match the residue characteristic {}",
                datum.p
            )));
        }
        let ctx = FqTables::get(cp, cf)?;
        let qm1 = datum.q - 1;
        if qm1 > 0 && ((ctx.q as u64 - 1) % qm1 as u64) != 0 {
            return Err(Error::BadField(format!(
                "coefficient field F_{} has no faithful residue-torus characters (q - 1 = {qm1})",
                ctx.q
            )));
        }
        let finite = FiniteWeyl::new(datum)?;
        let cover = Cover::new(finite.clone())?;
        let affine = AffineWeyl::full(finite)?;
        Algebra::assemble(cover, affine, ctx)
    }

    /// The Levi algebra on a subset of the simple roots: same cover and
    /// coefficients, lengths and walls from the subsystem.
    pub fn levi(&self, subset: &[usize]) -> Result<Arc<Algebra>> {
        let affine = AffineWeyl::sub(self.cover.finite.clone(), subset)?;
        Algebra::assemble(self.cover.clone(), affine, self.ctx.clone())
    }

    fn assemble(
        cover: Arc<Cover>,
        affine: Arc<AffineWeyl>,
        ctx: Arc<FqTables>,
    ) -> Result<Arc<Algebra>> {
        let simple = affine.simple.clone();
        let mut walls = Vec::new();
        for j in 0..affine.letter_count {
            let root_coords = affine.letter_root(j);
            let coroot = affine.letter_coroot(j);
            let aff = affine.letter(j);
            let defect = cover.triple_defect(&root_coords)?;
            let lift = ProPElt {
                v: aff.v,
                x: aff.x.clone(),
                t: defect,
            };
            let mut cmap = BTreeMap::new();
            for k in 0..cover.qm1 {
                let coords = cover.coweight_torus(&coroot, k);
                *cmap.entry(coords).or_insert(0u32) += 1;
            }
            walls.push(WallData {
                lift,
                root_coords,
                coroot,
                orbit: affine.letter_orbit[j],
                cmap,
            });
        }
        // one torus point per unit of the residue field
        for w in &walls {
            let s: u32 = w.cmap.values().sum();
            assert_eq!(s, cover.qm1);
        }

        let omega_lifts = affine
            .omega_reps
            .iter()
            .map(|r| {
                r.as_ref().map(|a| ProPElt {
                    v: a.v,
                    x: a.x.clone(),
                    t: vec![0; cover.rank],
                })
            })
            .collect();

        // torus span of the subsystem's coroots
        let mut span = HashSet::new();
        span.insert(vec![0u32; cover.rank]);
        let gens: Vec<Vec<u32>> = simple
            .iter()
            .map(|&i| cover.reduce_t(&cover.finite.datum.simple_coroots[i]))
            .collect();
        loop {
            let snapshot: Vec<Vec<u32>> = span.iter().cloned().collect();
            let before = span.len();
            for s in &snapshot {
                for g in &gens {
                    span.insert(cover.add_t(s, g));
                }
            }
            if span.len() == before {
                break;
            }
        }

        let alg = Algebra {
            cover,
            affine,
            ctx,
            simple,
            walls,
            omega_lifts,
            span,
            aff1_memo: Mutex::new(HashMap::new()),
        };

        // each wall lift squares to the image of -1 under the wall coroot
        for w in &alg.walls {
            let sq = alg.cover.mul(&w.lift, &w.lift);
            let want = if alg.cover.qm1 % 2 == 0 {
                alg.cover.coweight_torus(&w.coroot, alg.cover.qm1 / 2)
            } else {
                // odd unit-group order: -1 = 1 in the residue field
                vec![0; alg.cover.rank]
            };
            if sq != alg.cover.torus(&want) {
                return Err(Error::Config(
                    "wall lift square disagrees with the rank-one model".into(),
                ));
            }
            if !alg.span.contains(&sq.t) {
                return Err(Error::Config("wall lift square outside the torus span".into()));
            }
        }

        Ok(Arc::new(alg))
    }

    pub fn datum(&self) -> &RootDatum {
        &self.cover.finite.datum
    }

    pub fn finite(&self) -> &Arc<FiniteWeyl> {
        &self.cover.finite
    }

    pub fn id(&self) -> ProPElt {
        self.cover.id()
    }

    pub fn len(&self, y: &ProPElt) -> i64 {
        self.affine.len(&self.cover.proj(y))
    }

    pub fn orbit_lengths(&self, y: &ProPElt) -> Vec<i64> {
        self.affine.orbit_lengths(&self.cover.proj(y))
    }

    /// Whether `y` lies in the coweight-times-torus part (no finite part).
    pub fn is_lambda(&self, y: &ProPElt) -> bool {
        y.v == 0
    }

    /// Split `y = n_v . mu` with `mu` in the coweight-times-torus part.
    pub fn finite_and_lambda(&self, y: &ProPElt) -> (usize, ProPElt) {
        let n = self.cover.n_of(y.v);
        let mu = self.cover.mul(&self.cover.inv(&n), y);
        debug_assert_eq!(mu.v, 0);
        (y.v, mu)
    }

    /// Reduced word of the image plus the exact length-zero remainder in
    /// the cover: `y = lift(j_1) ... lift(j_k) . u`.
    pub fn word(&self, y: &ProPElt) -> (Vec<Letter>, ProPElt) {
        let (letters, _) = self.affine.word(&self.cover.proj(y));
        let mut acc = self.cover.id();
        for &j in &letters {
            acc = self.cover.mul(&acc, &self.walls[j].lift);
        }
        let u = self.cover.mul(&self.cover.inv(&acc), y);
        debug_assert_eq!(self.len(&u), 0);
        (letters, u)
    }

    /// Membership in the affine subgroup of the cover (the group generated
    /// by all torus points of the coroots and all wall lifts).
    pub fn in_aff1(&self, y: &ProPElt) -> bool {
        if let Some(&r) = self.aff1_memo.lock().unwrap().get(y) {
            return r;
        }
        let r = self.in_aff1_inner(y);
        self.aff1_memo.lock().unwrap().insert(y.clone(), r);
        r
    }

    fn in_aff1_inner(&self, y: &ProPElt) -> bool {
        if !self.affine.sub_members.contains(&y.v) {
            return false;
        }
        if !self.affine.in_coroot_lattice(&y.x) {
            return false;
        }
        let (letters, u) = self.word(y);
        let _ = letters;
        // u is length zero; in the affine subgroup it must be a pure torus
        // point of the span
        if u.v != 0 || u.x.iter().any(|&c| c != 0) {
            return false;
        }
        self.span.contains(&u.t)
    }

    /// Pairing signs of `x` against the positive roots outside the
    /// parabolic's span: nonnegative everywhere.
    pub fn p_negative(&self, x: &[i64], p: &[usize]) -> bool {
        self.off_parabolic_roots(p)
            .iter()
            .all(|c| self.finite().pair_coords(c, x) >= 0)
    }

    pub fn p_positive(&self, x: &[i64], p: &[usize]) -> bool {
        self.off_parabolic_roots(p)
            .iter()
            .all(|c| self.finite().pair_coords(c, x) <= 0)
    }

    pub fn p_negative_strict(&self, x: &[i64], p: &[usize]) -> bool {
        self.off_parabolic_roots(p)
            .iter()
            .all(|c| self.finite().pair_coords(c, x) > 0)
    }

    fn off_parabolic_roots(&self, p: &[usize]) -> Vec<Vec<i64>> {
        self.datum()
            .positive
            .iter()
            .map(|r| r.simple_coords.clone())
            .filter(|c| {
                !c.iter()
                    .enumerate()
                    .all(|(i, &ci)| ci == 0 || p.contains(&i))
            })
            .collect()
    }

    /// A coweight fixed by the parabolic's reflections whose pairings with
    /// all other positive roots are strictly positive; the first such point
    /// of a fixed deterministic sweep.
    pub fn central_strict_negative(&self, p: &[usize]) -> Result<Vec<i64>> {
        let rank = self.cover.rank;
        let inside: Vec<Vec<i64>> = self
            .datum()
            .positive
            .iter()
            .map(|r| r.simple_coords.clone())
            .filter(|c| {
                c.iter()
                    .enumerate()
                    .all(|(i, &ci)| ci == 0 || p.contains(&i))
            })
            .collect();
        for radius in 1..=6i64 {
            let mut x = vec![-radius; rank];
            loop {
                let central = inside
                    .iter()
                    .all(|c| self.finite().pair_coords(c, &x) == 0);
                if central && self.p_negative_strict(&x, p) {
                    return Ok(x);
                }
                let mut k = 0;
                loop {
                    if k == rank {
                        break;
                    }
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
        }
        Err(Error::Config("no strictly central coweight in search box".into()))
    }

    /// Orbit of a coweight-torus element under conjugation by the finite
    /// lifts, sorted.
    pub fn finite_orbit(&self, lambda: &ProPElt) -> Vec<ProPElt> {
        assert!(self.is_lambda(lambda));
        let mut orbit = vec![lambda.clone()];
        let mut i = 0;
        while i < orbit.len() {
            let cur = orbit[i].clone();
            for s in 0..self.datum().srank {
                let n = self.cover.n_of(self.finite().gen(s));
                let c = self.cover.conj(&n, &cur);
                if !orbit.contains(&c) {
                    orbit.push(c);
                }
            }
            i += 1;
        }
        orbit.sort();
        orbit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn algebra(preset: Preset) -> Arc<Algebra> {
        let (p, f) = preset.default_field();
        Algebra::new(preset, p, f).unwrap()
    }

    /// The presets plus one non-default residue field exercising a rank-two
    /// cover with a nontrivial torus.
    fn test_algebras() -> Vec<Arc<Algebra>> {
        let mut v: Vec<Arc<Algebra>> = [Preset::Sl2, Preset::Pgl2, Preset::Gl2, Preset::Sl3]
            .into_iter()
            .map(algebra)
            .collect();
        v.push(Algebra::with_fields(Preset::Sl3, 3, 1, 3, 1).unwrap());
        v
    }

    fn sample_elements(a: &Algebra) -> Vec<ProPElt> {
        let mut s = vec![a.id()];
        for w in &a.walls {
            s.push(w.lift.clone());
        }
        for u in a.omega_lifts.iter().flatten() {
            s.push(u.clone());
        }
        let rank = a.cover.rank;
        if a.cover.qm1 > 1 {
            let mut t = vec![0u32; rank];
            t[0] = 1;
            s.push(a.cover.torus(&t));
        }
        let mut x = vec![0i64; rank];
        x[0] = 1;
        s.push(a.cover.translation(&x));
        s
    }

    #[test]
    fn group_axioms() {
        for a in test_algebras() {
            let preset = a.datum().preset;
            let s = sample_elements(&a);
            for x in &s {
                assert_eq!(a.cover.mul(x, &a.cover.inv(x)), a.id());
                assert_eq!(a.cover.mul(&a.cover.inv(x), x), a.id());
                assert_eq!(a.cover.mul(x, &a.id()), *x);
                assert_eq!(a.cover.mul(&a.id(), x), *x);
            }
            for x in &s {
                for y in &s {
                    for z in &s {
                        let l = a.cover.mul(&a.cover.mul(x, y), z);
                        let r = a.cover.mul(x, &a.cover.mul(y, z));
                        assert_eq!(l, r, "{preset:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn braid_relations_between_wall_lifts() {
        for a in test_algebras() {
            let preset = a.datum().preset;
            let n = a.walls.len();
            for i in 0..n {
                for j in (i + 1)..n {
                    // order of the product of the underlying reflections
                    let p = a
                        .affine
                        .mul(&a.affine.letter(i), &a.affine.letter(j));
                    let mut cur = a.affine.id();
                    let mut m = 0;
                    for k in 1..=8 {
                        cur = a.affine.mul(&cur, &p);
                        if cur == a.affine.id() {
                            m = k;
                            break;
                        }
                    }
                    if m == 0 {
                        continue;
                    }
                    let mut left = a.id();
                    let mut right = a.id();
                    for k in 0..m {
                        let (la, lb) = if k % 2 == 0 { (i, j) } else { (j, i) };
                        left = a.cover.mul(&left, &a.walls[la].lift);
                        right = a.cover.mul(&right, &a.walls[lb].lift);
                    }
                    assert_eq!(left, right, "{preset:?} walls {i} {j}");
                }
            }
        }
    }

    #[test]
    fn torus_span_sizes() {
        // coroot index decides how much of the residue torus is affine
        assert_eq!(algebra(Preset::Sl2).span.len(), 2);
        assert_eq!(algebra(Preset::Pgl2).span.len(), 1);
        assert_eq!(algebra(Preset::Gl2).span.len(), 2);
        assert_eq!(algebra(Preset::Sl3).span.len(), 1);
    }

    #[test]
    fn affine_subgroup_membership() {
        let sl2 = algebra(Preset::Sl2);
        for w in &sl2.walls {
            assert!(sl2.in_aff1(&w.lift));
        }
        assert!(sl2.in_aff1(&sl2.cover.torus(&[1])));
        assert!(sl2.in_aff1(&sl2.cover.translation(&[1])));

        let pgl2 = algebra(Preset::Pgl2);
        assert!(!pgl2.in_aff1(&pgl2.cover.torus(&[1])));
        let u = pgl2.omega_lifts[0].clone().unwrap();
        assert!(!pgl2.in_aff1(&u));
        for w in &pgl2.walls {
            assert!(pgl2.in_aff1(&w.lift));
        }
    }

    #[test]
    fn walls_carry_rank_one_data() {
        let sl2 = algebra(Preset::Sl2);
        // both walls: multiplicity one on each nonzero coroot point
        for w in &sl2.walls {
            assert_eq!(w.cmap.len(), 2);
            assert!(w.cmap.values().all(|&m| m == 1));
        }
        let pgl2 = algebra(Preset::Pgl2);
        // coroot is twice a basis vector: the image is the squares, each
        // hit twice
        for w in &pgl2.walls {
            assert_eq!(w.cmap.len(), 1);
            assert_eq!(w.cmap.get(&vec![0u32]), Some(&2));
        }
    }

    #[test]
    fn reflection_lift_defect_matches_model() {
        // over F_3 the long-root word lift picks up a sign on two entries
        let a = Algebra::with_fields(Preset::Sl3, 3, 1, 3, 1).unwrap();
        let wall0 = &a.walls[0];
        assert_eq!(wall0.lift.t, vec![0, 1]);
        // and its square is still the image of -1 under the long coroot
        let sq = a.cover.mul(&wall0.lift, &wall0.lift);
        assert_eq!(sq, a.cover.torus(&a.cover.coweight_torus(&wall0.coroot, 1)));
    }

    #[test]
    fn central_coweights() {
        let sl3 = algebra(Preset::Sl3);
        let x = sl3.central_strict_negative(&[0]).unwrap();
        assert!(sl3.p_negative_strict(&x, &[0]));
        assert!(sl3.p_negative(&x, &[0]));
        assert!(!sl3.p_positive(&x, &[0]));
        // commutes with the Levi's wall lifts and torus
        let levi = sl3.levi(&[0]).unwrap();
        let lam = sl3.cover.translation(&x);
        for w in &levi.walls {
            assert_eq!(
                sl3.cover.mul(&lam, &w.lift),
                sl3.cover.mul(&w.lift, &lam)
            );
        }
        for u in levi.omega_lifts.iter().flatten() {
            assert_eq!(sl3.cover.mul(&lam, u), sl3.cover.mul(u, &lam));
        }
    }

    #[test]
    fn levi_walls() {
        let sl3 = algebra(Preset::Sl3);
        let levi = sl3.levi(&[1]).unwrap();
        assert_eq!(levi.walls.len(), 2);
        // the Levi's affine wall reflects in its own highest (= simple) root
        assert_eq!(levi.walls[0].root_coords, vec![0, 1]);
        assert_eq!(
            levi.walls[0].lift.x,
            levi.walls[0].coroot.iter().map(|c| -c).collect::<Vec<_>>()
        );
        // torus Levi has no walls
        let torus = sl3.levi(&[]).unwrap();
        assert!(torus.walls.is_empty());
        assert_eq!(torus.len(&torus.cover.translation(&[5, 3])), 0);
    }

    #[test]
    fn finite_orbits_of_coweights() {
        let sl2 = algebra(Preset::Sl2);
        let lam = sl2.cover.translation(&[1]);
        let orbit = sl2.finite_orbit(&lam);
        assert_eq!(orbit.len(), 2);
        assert!(orbit.contains(&sl2.cover.translation(&[-1])));
        // a torus point with trivial coweight can have a nontrivial orbit
        let t = sl2.cover.torus(&[1]);
        let orbit = sl2.finite_orbit(&t);
        assert_eq!(orbit.len(), 1);
    }
}
