//! Centralizers and normalizers of elementary abelian subgroups by linear
//! algebra, without enumerating the ambient group.
//!
//! With fixed lifts `g_j` of the generators, an element X normalizes E and
//! induces `φ ∈ GL_rank(p)` on it exactly when `X g_j = λ_j h_j X` for lifts
//! `h_j` of `φ(g_j)` and scalars λ_j. For each φ and each admissible tuple
//! of λ the solutions form a subspace, scanned exhaustively when small and
//! sampled otherwise.

use crate::error::{Error, Result};
use crate::fp::{self, Matrix};
use crate::gfq::{Fe, FieldSpec};
use crate::order::gl_order;
use crate::projmat::{self, GroupSpec, Mat, ProjMat};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashSet;

/// How an order was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Every solution space was scanned.
    Exact,
    /// Sampling was used and the closure reached the predicted order.
    MatchedPrediction,
    /// Sampling was used and the prediction was not reached.
    LowerBound,
}

#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Largest number of points scanned in one solution space.
    pub subspace: u64,
    /// Random trials per solution space when it is too large to scan.
    pub trials: usize,
    /// Largest closure computed.
    pub closure_cap: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { subspace: 1_000_000, trials: 10_000, closure_cap: 1_000_000, seed: 0 }
    }
}

impl Budget {
    pub fn with_subspace(subspace: u64) -> Budget {
        Budget { subspace, ..Budget::default() }
    }
}

/// Solutions of `X·s_j = λ_j·d_j·X` for all j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwinerSpace {
    pub n: usize,
    pub basis: Vec<Mat>,
}

impl IntertwinerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combine(&self, coeffs: &[Fe], f: &FieldSpec) -> Mat {
        let mut x = Mat::zero(self.n);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if !c.is_zero() {
                x = x.add(&b.scale(c, f), f);
            }
        }
        x
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalResult {
    #[serde(serialize_with = "crate::classify::serialize_big")]
    pub order: BigUint,
    #[serde(skip)]
    pub generators: Vec<ProjMat>,
    pub status: Status,
}

/// Null space of a matrix over a general finite field.
fn null_space(mut rows: Vec<Vec<Fe>>, ncols: usize, f: &FieldSpec) -> Vec<Vec<Fe>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, i);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let m = rows[i][c];
                for j in 0..ncols {
                    let v = f.mul(m, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Fe::ZERO; ncols];
            v[fc] = Fe::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[i][fc]);
            }
            v
        })
        .collect()
}

/// Basis of `{X : X·s_j = λ_j·d_j·X}`.
pub fn twisted_intertwiner_basis(src: &[Mat], dst: &[Mat], lambda: &[Fe], f: &FieldSpec) -> IntertwinerSpace {
    let n = src.first().map_or(0, |m| m.n());
    let nn = n * n;
    let mut rows = Vec::with_capacity(src.len() * nn);
    for ((s, d), &l) in src.iter().zip(dst).zip(lambda) {
        for i in 0..n {
            for k in 0..n {
                let mut row = vec![Fe::ZERO; nn];
                for m in 0..n {
                    let a = &mut row[i * n + m];
                    *a = f.add(*a, s.get(m, k));
                    let b = &mut row[m * n + k];
                    *b = f.sub(*b, f.mul(l, d.get(i, m)));
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let basis = null_space(rows, nn, f)
        .into_iter()
        .map(|v| Mat::from_entries(n, v).expect("n² entries"))
        .collect();
    IntertwinerSpace { n, basis }
}

/// Basis of `{X : X·g = χ(g)·g·X}` for the generators g with character
/// values χ.
pub fn intertwiner_basis(gens: &[ProjMat], chi: &[Fe], f: &FieldSpec) -> Result<IntertwinerSpace> {
    if chi.len() != gens.len() {
        return Err(Error::DimensionMismatch(format!("{} character values for {} generators", chi.len(), gens.len())));
    }
    let lifts: Vec<Mat> = gens.iter().map(|g| g.mat().clone()).collect();
    Ok(twisted_intertwiner_basis(&lifts, &lifts, chi, f))
}

/// Closure of found elements, grown one new generator at a time.
struct Collector {
    n: usize,
    gens: Vec<ProjMat>,
    elements: HashSet<ProjMat>,
    cap: usize,
    overflow: bool,
}

impl Collector {
    fn new(n: usize, cap: usize) -> Collector {
        let mut elements = HashSet::new();
        elements.insert(ProjMat::identity(n));
        Collector { n, gens: Vec::new(), elements, cap, overflow: false }
    }

    fn add(&mut self, g: ProjMat, f: &FieldSpec) {
        if self.elements.contains(&g) {
            return;
        }
        self.gens.push(g);
        if self.overflow {
            return;
        }
        match projmat::closure(&self.gens, self.n, f, self.cap) {
            Ok(all) => self.elements = all.into_iter().collect(),
            Err(_) => self.overflow = true,
        }
    }

    fn order(&self) -> Option<usize> {
        (!self.overflow).then_some(self.elements.len())
    }
}

fn scalar_of(m: &Mat) -> Result<Fe> {
    m.as_scalar().ok_or_else(|| Error::InvalidConfig("generator is not of order p projectively".into()))
}

fn check_elementary(e: &[ProjMat], p: u32, f: &FieldSpec) -> Result<()> {
    for (i, a) in e.iter().enumerate() {
        if !a.pow(p as u64, f).is_identity() || a.is_identity() {
            return Err(Error::InvalidConfig("a generator does not have order p".into()));
        }
        if e[..i].iter().any(|b| !a.commutes_with(b, f)) {
            return Err(Error::InvalidConfig("generators do not commute".into()));
        }
    }
    let n = e.first().map_or(1, |g| g.n());
    let want = (p as usize).pow(e.len() as u32);
    let got = projmat::closure(e, n, f, want + 1)?.len();
    if got != want {
        return Err(Error::InvalidConfig(format!("generators span a group of order {got}, not {want}")));
    }
    Ok(())
}

/// Every tuple taking its j-th entry from `choices[j]`.
fn tuples(choices: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        out = out.iter().flat_map(|t| c.iter().map(move |&x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Search state shared by the centralizer and normalizer computations.
struct Search<'a> {
    spec: &'a GroupSpec,
    budget: Budget,
    rng: ChaCha8Rng,
    /// Whether every decision so far came from an exhaustive scan.
    exhaustive: bool,
}

impl<'a> Search<'a> {
    fn new(spec: &'a GroupSpec, budget: Budget) -> Search<'a> {
        Search { spec, budget, rng: ChaCha8Rng::seed_from_u64(budget.seed), exhaustive: true }
    }

    fn field(&self) -> &FieldSpec {
        &self.spec.mfield
    }

    fn accept(&self, x: &Mat) -> bool {
        !x.det(self.field()).is_zero() && self.spec.contains(x)
    }

    fn scannable(&self, dim: usize) -> bool {
        (self.field().q() as u64).checked_pow(dim as u32).is_some_and(|s| s <= self.budget.subspace)
    }

    /// Counts the projective group elements in a space when it can be
    /// scanned, calling `visit` on each.
    fn scan(&self, space: &IntertwinerSpace, mut visit: impl FnMut(ProjMat) -> bool) -> usize {
        let f = self.field();
        let elems: Vec<Fe> = f.elements().collect();
        let q = elems.len();
        let dim = space.dim();
        let mut count = 0;
        // Lines through the origin: leading coefficient 1 at position `lead`.
        for lead in 0..dim {
            let rest = dim - lead - 1;
            let total = q.pow(rest as u32);
            for code in 0..total {
                let mut coeffs = vec![Fe::ZERO; dim];
                coeffs[lead] = Fe::ONE;
                let mut c = code;
                for slot in coeffs.iter_mut().skip(lead + 1) {
                    *slot = elems[c % q];
                    c /= q;
                }
                let x = space.combine(&coeffs, f);
                if self.accept(&x) {
                    count += 1;
                    if !visit(ProjMat::normalize_unchecked(x, f)) {
                        return count;
                    }
                }
            }
        }
        count
    }

    fn sample(&mut self, space: &IntertwinerSpace) -> Option<ProjMat> {
        let f = self.spec.mfield.clone();
        let q = f.q();
        for _ in 0..self.budget.trials {
            let coeffs: Vec<Fe> = (0..space.dim()).map(|_| Fe(self.rng.gen_range(0..q))).collect();
            let x = space.combine(&coeffs, &f);
            if self.accept(&x) {
                return Some(ProjMat::normalize_unchecked(x, &f));
            }
        }
        None
    }

    /// Some element of the space in the group, if one is found.
    fn witness(&mut self, space: &IntertwinerSpace) -> Option<ProjMat> {
        if space.dim() == 0 {
            return None;
        }
        if self.scannable(space.dim()) {
            let mut found = None;
            self.scan(space, |g| {
                found = Some(g);
                false
            });
            found
        } else {
            self.exhaustive = false;
            self.sample(space)
        }
    }

    /// An element inducing φ (given as images of the source lifts), trying
    /// every admissible tuple of scalars.
    fn realize(&mut self, src: &[Mat], dst: &[Mat], p: u32) -> Result<Option<ProjMat>> {
        let f = self.spec.mfield.clone();
        let mut choices = Vec::new();
        for (s, d) in src.iter().zip(dst) {
            let ratio = f.div(scalar_of(&s.pow(p as u64, &f))?, scalar_of(&d.pow(p as u64, &f))?)?;
            let roots = f.pth_roots(ratio, p);
            if roots.is_empty() {
                return Ok(None);
            }
            choices.push(roots);
        }
        for lambda in tuples(&choices) {
            let space = twisted_intertwiner_basis(src, dst, &lambda, &f);
            if let Some(x) = self.witness(&space) {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

fn status_for(exhaustive: bool, order: &BigUint, predicted: Option<&BigUint>) -> Status {
    if exhaustive {
        Status::Exact
    } else if predicted == Some(order) {
        Status::MatchedPrediction
    } else {
        Status::LowerBound
    }
}

/// The centralizer of E in the projective group.
pub fn projective_centralizer(e: &[ProjMat], spec: &GroupSpec, budget: Budget, predicted: Option<&BigUint>) -> Result<LocalResult> {
    let f = spec.mfield.clone();
    let p = elementary_prime(e, &f)?;
    check_elementary(e, p, &f)?;
    let mut search = Search::new(spec, budget);
    let lifts: Vec<Mat> = e.iter().map(|g| g.mat().clone()).collect();
    let chars = tuples(&vec![f.pth_roots(Fe::ONE, p); e.len()]);
    let mut collector = Collector::new(spec.n, budget.closure_cap);
    let mut exact_count = 0usize;
    for chi in chars {
        let space = twisted_intertwiner_basis(&lifts, &lifts, &chi, &f);
        if space.dim() == 0 {
            continue;
        }
        if search.scannable(space.dim()) {
            let mut found = Vec::new();
            exact_count += search.scan(&space, |g| {
                found.push(g);
                true
            });
            for g in found {
                collector.add(g, &f);
            }
        } else {
            search.exhaustive = false;
            for _ in 0..8 {
                if let Some(g) = search.sample(&space) {
                    collector.add(g, &f);
                }
            }
        }
    }
    let (order, status) = if search.exhaustive {
        (BigUint::from(exact_count), Status::Exact)
    } else {
        let order = BigUint::from(collector.order().ok_or_else(|| Error::BudgetExceeded {
            lower_bound: format!(">{}", budget.closure_cap),
        })?);
        let status = status_for(false, &order, predicted);
        (order, status)
    };
    Ok(LocalResult { order, generators: collector.gens, status })
}

fn elementary_prime(e: &[ProjMat], f: &FieldSpec) -> Result<u32> {
    let g = e.first().ok_or_else(|| Error::InvalidConfig("empty generator list".into()))?;
    let o = g.elem_order(1 << 20, f)?;
    if !crate::gfq::is_prime(o) {
        return Err(Error::InvalidConfig(format!("generator has non-prime order {o}")));
    }
    Ok(o as u32)
}

fn image_lifts(lifts: &[Mat], phi: &Matrix, f: &FieldSpec) -> Vec<Mat> {
    let n = lifts[0].n();
    (0..lifts.len())
        .map(|j| {
            let mut h = Mat::identity(n);
            for (i, l) in lifts.iter().enumerate() {
                if phi[i][j] > 0 {
                    h = h.mul(&l.pow(phi[i][j] as u64, f), f);
                }
            }
            h
        })
        .collect()
}

fn automorphisms(rank: usize, p: u32) -> Result<Vec<Matrix>> {
    let size = gl_order(rank as u32, p as u64);
    if size > BigUint::from(10_000_000u64) {
        return Err(Error::BudgetExceeded { lower_bound: format!("|Aut(E)| = {size}") });
    }
    let cap = size.to_usize().unwrap_or(usize::MAX);
    let gens = fp::gl_generators(rank, p);
    let mut all = if gens.is_empty() {
        vec![fp::identity(rank)]
    } else {
        fp::matrix_closure(&gens, p, cap).expect("GL closure within its order")
    };
    all.sort();
    Ok(all)
}

/// The normalizer of E: the centralizer together with one witness per
/// realizable automorphism of E.
pub fn normalizer_via_aut(e: &[ProjMat], spec: &GroupSpec, budget: Budget, predicted: Option<&BigUint>) -> Result<LocalResult> {
    let f = spec.mfield.clone();
    let p = elementary_prime(e, &f)?;
    let cen = projective_centralizer(e, spec, budget, None)?;
    let mut search = Search::new(spec, budget);
    search.exhaustive = cen.status == Status::Exact;
    let lifts: Vec<Mat> = e.iter().map(|g| g.mat().clone()).collect();
    let rank = e.len();
    let mut collector = Collector::new(spec.n, budget.closure_cap);
    for g in &cen.generators {
        collector.add(g.clone(), &f);
    }
    let mut realized: HashSet<Matrix> = HashSet::new();
    realized.insert(fp::identity(rank));
    let mut realized_gens: Vec<Matrix> = Vec::new();
    let mut failed: Vec<Matrix> = Vec::new();
    for phi in automorphisms(rank, p)? {
        if realized.contains(&phi) {
            continue;
        }
        if failed.iter().any(|psi| realized.contains(&fp::mat_mul(&phi, &fp::inverse(psi, p).expect("automorphism"), p))) {
            continue;
        }
        let dst = image_lifts(&lifts, &phi, &f);
        match search.realize(&lifts, &dst, p)? {
            Some(x) => {
                collector.add(x, &f);
                realized_gens.push(phi);
                realized = fp::matrix_closure(&realized_gens, p, usize::MAX)
                    .expect("uncapped")
                    .into_iter()
                    .collect();
                realized.insert(fp::identity(rank));
            }
            None => failed.push(phi),
        }
    }
    let counted = &cen.order * BigUint::from(realized.len());
    let order = if search.exhaustive {
        counted
    } else {
        collector.order().map_or(counted.clone(), |o| BigUint::from(o).max(counted))
    };
    let status = status_for(search.exhaustive, &order, predicted);
    Ok(LocalResult { order, generators: collector.gens, status })
}

/// An element conjugating ⟨from⟩ onto ⟨to⟩, if one exists.
pub fn conjugating_element(from: &[ProjMat], to: &[ProjMat], spec: &GroupSpec, budget: Budget) -> Result<Option<ProjMat>> {
    let f = spec.mfield.clone();
    if from.len() != to.len() || from.is_empty() {
        return Err(Error::DimensionMismatch("generator lists differ in length".into()));
    }
    let p = elementary_prime(from, &f)?;
    let src: Vec<Mat> = from.iter().map(|g| g.mat().clone()).collect();
    let tgt: Vec<Mat> = to.iter().map(|g| g.mat().clone()).collect();
    let mut search = Search::new(spec, budget);
    for phi in automorphisms(from.len(), p)? {
        let dst = image_lifts(&tgt, &phi, &f);
        if let Some(x) = search.realize(&src, &dst, p)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
