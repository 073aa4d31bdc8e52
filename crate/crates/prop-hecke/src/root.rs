//! Root data for the built-in presets.
//!
//! A datum fixes the cocharacter lattice X_* = Z^rank with a chosen basis,
//! the simple roots as integer linear functionals on X_*, the simple coroots
//! as lattice vectors, and the residue field F_{p^f}.  Everything else
//! (positive roots, highest root, Coxeter matrix including the affine node)
//! is derived.  The semisimple part is required to be irreducible, so there
//! is exactly one affine node, attached to the highest root.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Sl2,
    Pgl2,
    Gl2,
    Sl3,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Preset> {
        match s.to_ascii_lowercase().as_str() {
            "sl2" => Ok(Preset::Sl2),
            "pgl2" => Ok(Preset::Pgl2),
            "gl2" => Ok(Preset::Gl2),
            "sl3" => Ok(Preset::Sl3),
            other => Err(Error::BadPreset(other.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Sl2 => "sl2",
            Preset::Pgl2 => "pgl2",
            Preset::Gl2 => "gl2",
            Preset::Sl3 => "sl3",
        }
    }

    /// Field parameters used by the verification suites.
    pub fn default_field(&self) -> (u32, u32) {
        match self {
            Preset::Sl2 | Preset::Pgl2 | Preset::Gl2 => (3, 1),
            Preset::Sl3 => (2, 1),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, fo: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fo, "{}", self.name())
    }
}

/// A root together with its coroot, both in the fixed coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Root {
    /// Linear functional on X_*; pairing is the dot product.
    pub alpha: Vec<i64>,
    /// Coroot as an element of X_*.
    pub coroot: Vec<i64>,
    /// Coordinates in the simple-root basis.
    pub simple_coords: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple_coords.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub preset: Preset,
    pub p: u32,
    pub f: u32,
    /// Size of the residue field.
    pub q: u32,
    /// Rank of the cocharacter lattice.
    pub rank: usize,
    /// Number of simple roots.
    pub srank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    /// All positive roots, simples first, sorted by (height, coordinates).
    pub positive: Vec<Root>,
    /// Index into `positive` of the highest root.
    pub highest: usize,
    /// Coxeter matrix over the affine generator set {0 = affine node,
    /// 1..=srank = finite nodes}; entry 0 encodes an infinite bond.
    pub coxeter: Vec<Vec<u32>>,
}

pub fn pair(alpha: &[i64], x: &[i64]) -> i64 {
    alpha.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn add_vec(a: &[i64], b: &[i64], scale: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + scale * y).collect()
}

impl RootDatum {
    pub fn new(preset: Preset, p: u32, f: u32) -> Result<RootDatum> {
        let (rank, simple_roots, simple_coroots): (usize, Vec<Vec<i64>>, Vec<Vec<i64>>) =
            match preset {
                // X_* spanned by the coroot
                Preset::Sl2 => (1, vec![vec![2]], vec![vec![1]]),
                // X_* spanned by the fundamental coweight; coroot is twice it
                Preset::Pgl2 => (1, vec![vec![1]], vec![vec![2]]),
                Preset::Gl2 => (2, vec![vec![1, -1]], vec![vec![1, -1]]),
                // X_* = coroot lattice in the basis of simple coroots
                Preset::Sl3 => (
                    2,
                    vec![vec![2, -1], vec![-1, 2]],
                    vec![vec![1, 0], vec![0, 1]],
                ),
            };
        let srank = simple_roots.len();
        // Cartan integrality
        for i in 0..srank {
            for j in 0..srank {
                let a = pair(&simple_roots[i], &simple_coroots[j]);
                if i == j {
                    assert_eq!(a, 2, "bad diagonal Cartan entry");
                }
            }
        }
        let positive = close_positive(&simple_roots, &simple_coroots);
        let highest = positive
            .iter()
            .enumerate()
            .max_by_key(|(_, r)| r.height())
            .map(|(i, _)| i)
            .unwrap();
        // irreducibility: the highest root must dominate every simple
        let top = &positive[highest];
        for i in 0..srank {
            if top.simple_coords[i] == 0 {
                return Err(Error::Config(format!(
                    "reducible semisimple part in preset {preset}"
                )));
            }
        }
        let coxeter = coxeter_matrix(&simple_roots, &simple_coroots, top);
        let q64 = (p as u64).pow(f);
        if q64 > 4096 {
            return Err(Error::BadField(format!("residue field too big: {q64}")));
        }
        Ok(RootDatum {
            preset,
            p,
            f,
            q: q64 as u32,
            rank,
            srank,
            simple_roots,
            simple_coroots,
            positive,
            highest,
            coxeter,
        })
    }

    pub fn preset_default(preset: Preset) -> Result<RootDatum> {
        let (p, f) = preset.default_field();
        RootDatum::new(preset, p, f)
    }

    pub fn highest_root(&self) -> &Root {
        &self.positive[self.highest]
    }

    /// Index of a positive root with the given functional, if present.
    pub fn find_root(&self, alpha: &[i64]) -> Option<usize> {
        self.positive.iter().position(|r| r.alpha == alpha)
    }

    /// Reflection s_beta(x) = x - <beta, x> beta^vee on the lattice.
    pub fn reflect(&self, root: &Root, x: &[i64]) -> Vec<i64> {
        add_vec(x, &root.coroot, -pair(&root.alpha, x))
    }
}

fn close_positive(simples: &[Vec<i64>], cosimples: &[Vec<i64>]) -> Vec<Root> {
    let srank = simples.len();
    let mut roots: Vec<Root> = (0..srank)
        .map(|i| {
            let mut sc = vec![0i64; srank];
            sc[i] = 1;
            Root {
                alpha: simples[i].clone(),
                coroot: cosimples[i].clone(),
                simple_coords: sc,
            }
        })
        .collect();
    // closure under simple reflections, keeping the positive side
    loop {
        let mut grew = false;
        let snapshot = roots.clone();
        for r in &snapshot {
            for i in 0..srank {
                // s_i(r): alpha' = alpha - <alpha, a_i^vee> a_i
                let c = pair(&r.alpha, &cosimples[i]);
                let alpha = add_vec(&r.alpha, &simples[i], -c);
                let ci = pair(&simples[i], &r.coroot);
                let coroot = add_vec(&r.coroot, &cosimples[i], -ci);
                let mut sc = r.simple_coords.clone();
                sc[i] -= c;
                if sc.iter().all(|&x| x >= 0) && sc.iter().any(|&x| x > 0) {
                    let cand = Root {
                        alpha,
                        coroot,
                        simple_coords: sc,
                    };
                    if !roots.contains(&cand) {
                        roots.push(cand);
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    roots.sort_by_key(|r| (r.height(), r.simple_coords.clone()));
    roots
}

fn bond_order(prod: i64) -> u32 {
    match prod {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        // an affine A1 bond
        4 => 0,
        other => panic!("impossible Cartan product {other}"),
    }
}

fn coxeter_matrix(simples: &[Vec<i64>], cosimples: &[Vec<i64>], top: &Root) -> Vec<Vec<u32>> {
    let n = simples.len() + 1;
    let mut m = vec![vec![2u32; n]; n];
    for i in 0..n {
        m[i][i] = 1;
    }
    for i in 0..simples.len() {
        for j in 0..simples.len() {
            if i != j {
                let prod = pair(&simples[i], &cosimples[j]) * pair(&simples[j], &cosimples[i]);
                m[i + 1][j + 1] = bond_order(prod);
            }
        }
        // affine node bonds through the highest root
        let prod = pair(&top.alpha, &cosimples[i]) * pair(&simples[i], &top.coroot);
        m[0][i + 1] = bond_order(prod);
        m[i + 1][0] = m[0][i + 1];
    }
    m
}
