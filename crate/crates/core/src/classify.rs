//! Conjugacy classes of elementary abelian p-subgroups of PGL_n(q) and
//! PGU_n(q) with predicted centralizer and normalizer structure.
//!
//! Every class is `Γ̄_r × Λ` for a toral Λ of PGL_{n/p^r}; r = 0 gives the
//! toral classes. An algebraic class splits into finite classes indexed by
//! the twisted orbits of `N/C°` on `C/C°`:
//!
//! * toral: `N/C° ≅ Aff(W)`, and the relevant elements are the affine
//!   symmetries with linear part `φ^{-1}` where `φ = q` or `−q`, up to
//!   conjugacy;
//! * nontoral: the component-group engine on `F_p^{2r} ⊕ V`.
//!
//! For a class with twist w, `|C| = |(C°)^{wF}|·|(C/C°)^{wF}|` and
//! `|N| = |(C°)^{wF}|·|N/C°|/|class of w|`, where `(C°)^{wF}` is a product of
//! GL or GU factors read off from the cycles of w on the weights.

use crate::compgrp::{self, ActionSpace, QuadForm};
use crate::error::{Error, Result};
use crate::fp::{self, Matrix, Vector};
use crate::gamma;
use crate::gfq::{self, mod_inverse};
use crate::order::{self, gl_order, gu_order};
use crate::par::Exec;
use crate::projmat::{Form, GroupSpec, Mat, ProjMat};
use crate::toral::{self, WeightMultiset};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use crate::order::descriptor_order;

/// Frame cap for affine symmetry groups computed during classification.
pub const AFFINE_CAP: usize = 200_000;

/// Which branch of the case analysis applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    /// p = 2, linear, q ≡ 1 mod 4.
    LinearOneModFour,
    /// p = 2, linear, q ≡ 3 mod 4 (necessarily an odd power).
    LinearThreeModFour,
    /// p = 2, unitary, q ≡ 3 mod 4.
    UnitaryThreeModFour,
    /// p = 2, unitary, q ≡ 1 mod 4.
    UnitaryOneModFour,
    /// Odd p, linear, q ≡ 1 mod p.
    LinearSplit,
    /// Odd p, unitary, q ≡ −1 mod p.
    UnitarySplit,
    /// Odd p without the congruence: every class is toral.
    ToralOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseKey {
    pub form: Form,
    pub p: u32,
    /// q mod 4 for p = 2, q mod p otherwise.
    pub residue: u64,
    /// Whether q is an even power of its characteristic.
    pub even_power: bool,
    pub case: Case,
}

impl CaseKey {
    pub fn new(form: Form, q: u64, p: u32) -> Result<CaseKey> {
        let (ell, e) = gfq::prime_power(q).ok_or_else(|| Error::InvalidConfig(format!("q = {q} is not a prime power")))?;
        if !gfq::is_prime(p as u64) {
            return Err(Error::NonPrimeCharacteristic(p as u64));
        }
        if ell == p as u64 {
            return Err(Error::DefiningCharacteristic { p, q: q as u32 });
        }
        let even_power = e % 2 == 0;
        let (residue, case) = if p == 2 {
            let m = q % 4;
            let case = match (form, m) {
                (Form::Linear, 1) => Case::LinearOneModFour,
                (Form::Linear, _) => Case::LinearThreeModFour,
                (Form::Unitary, 3) => Case::UnitaryThreeModFour,
                (Form::Unitary, _) => Case::UnitaryOneModFour,
            };
            (m, case)
        } else {
            let m = q % p as u64;
            let case = match form {
                Form::Linear if m == 1 => Case::LinearSplit,
                Form::Unitary if m == p as u64 - 1 => Case::UnitarySplit,
                _ => Case::ToralOnly,
            };
            (m, case)
        };
        Ok(CaseKey { form, p, residue, even_power, case })
    }

    /// Whether the Steinberg map acts on the symplectic part through a
    /// quadratic form.
    pub fn orthogonal_twist(&self) -> bool {
        matches!(self.case, Case::LinearThreeModFour | Case::UnitaryOneModFour)
    }
}

impl fmt::Display for CaseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = self.form;
        match self.case {
            Case::LinearOneModFour | Case::LinearThreeModFour | Case::UnitaryThreeModFour | Case::UnitaryOneModFour => {
                write!(f, "{form}, p = 2, q ≡ {} mod 4", self.residue)
            }
            Case::LinearSplit => write!(f, "linear, q ≡ 1 mod {}", self.p),
            Case::UnitarySplit => write!(f, "unitary, q ≡ −1 mod {}", self.p),
            Case::ToralOnly => write!(f, "{form}, q ≡ {} mod {}, toral only", self.residue, self.p),
        }
    }
}

/// Witt type of the form whose orthogonal group stabilizes the principal
/// class in the twisted cases. Hyperbolic for every rank: checked by brute
/// force for r = 1 (PGL_2(7), PGU_2(5)) and by local computation for r = 2
/// (PGL_4(3)).
pub fn principal_form_plus(_form: Form, _r: u32) -> bool {
    true
}

/// Admissible Γ-ranks r with `p^r | n`.
pub fn existence_check(n: usize, q: u64, p: u32, form: Form) -> Result<Vec<u32>> {
    let key = CaseKey::new(form, q, p)?;
    if key.case == Case::ToralOnly {
        return Ok(Vec::new());
    }
    Ok((1..=gfq::valuation(n as u64, p as u64)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Toral,
    Nontoral,
}

/// A structure descriptor and the exact order it evaluates to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Structure {
    pub descriptor: String,
    #[serde(serialize_with = "serialize_big")]
    pub order: BigUint,
}

impl Structure {
    /// Builds the descriptor and checks that it evaluates to `order`.
    fn checked(descriptor: String, order: BigUint) -> Result<Structure> {
        let parsed = descriptor_order(&descriptor)?;
        if parsed != order {
            return Err(Error::MalformedDescriptor(format!(
                "{descriptor} evaluates to {parsed}, expected {order}"
            )));
        }
        Ok(Structure { descriptor, order })
    }
}

/// Serializes an integer as a bare JSON number of arbitrary size.
pub fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw = serde_json::value::RawValue::from_string(v.to_string()).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRecord {
    pub kind: Kind,
    pub r: u32,
    /// Rank of the elementary abelian group: `2r + rank(Λ)`.
    pub rank: usize,
    /// The toral weights: the whole subgroup when toral, the Λ factor in
    /// PGL_{n/p^r} otherwise.
    pub lambda_w: WeightMultiset,
    pub splitting_label: String,
    /// principal, gamma-twisted, b-twisted or nonsplit.
    pub tag: String,
    /// Representative twist: the point of C/C° (nontoral) or the
    /// translation part of the affine symmetry (toral).
    pub twist: Vector,
    pub realizable: bool,
    pub realizable_reason: String,
    pub centralizer: Structure,
    pub normalizer: Structure,
    #[serde(serialize_with = "serialize_mats")]
    pub generators: Vec<ProjMat>,
}

/// Matrices as row-major lists of packed field elements.
pub fn serialize_mats<S: Serializer>(mats: &[ProjMat], s: S) -> std::result::Result<S::Ok, S::Error> {
    let flat: Vec<Vec<u32>> = mats.iter().map(|m| m.mat().entries().iter().map(|x| x.0).collect()).collect();
    flat.serialize(s)
}

impl ClassRecord {
    pub fn is_principal(&self) -> bool {
        self.tag == "principal"
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn pow_str(p: u32, e: usize) -> String {
    if e == 1 {
        format!("{p}")
    } else {
        format!("{p}^{e}")
    }
}

/// `(C°)^{σ}` for σ acting on the distinct weights by `u ↦ l0·u + v`.
fn twisted_torus(w: &WeightMultiset, l0: u32, v: &[u32], spec: &GroupSpec, k: usize) -> (String, BigUint) {
    let q = spec.q();
    let z = spec.center_order();
    let pname = match spec.form {
        Form::Linear => "PGL",
        Form::Unitary => "PGU",
    };
    if w.d == 0 {
        let ord = match spec.form {
            Form::Linear => order::pgl_order(k as u32, q),
            Form::Unitary => order::pgu_order(k as u32, q),
        };
        let descr = if k == 1 { "1".to_string() } else { format!("{pname}_{k}({q})") };
        return (descr, ord);
    }
    let p = w.p;
    let support: BTreeMap<Vector, usize> = w.support().into_iter().collect();
    let mut seen: HashMap<Vector, bool> = HashMap::new();
    let mut factors: BTreeMap<(usize, u32, bool), usize> = BTreeMap::new();
    for (u, &m) in &support {
        if seen.contains_key(u) {
            continue;
        }
        let mut c = 0u32;
        let mut x = u.clone();
        loop {
            seen.insert(x.clone(), true);
            c += 1;
            x = fp::vec_add(&fp::vec_scale(&x, l0, p), v, p);
            if &x == u {
                break;
            }
        }
        let unitary = spec.form == Form::Unitary && c % 2 == 1;
        *factors.entry((m, c, unitary)).or_insert(0) += 1;
    }
    let mut ord = BigUint::one();
    let mut parts = Vec::new();
    for (&(m, c, unitary), &count) in &factors {
        let qc = q.pow(c);
        let f = if unitary { gu_order(m as u32, qc) } else { gl_order(m as u32, qc) };
        ord *= f.pow(count as u32);
        let nm = if unitary { "GU" } else { "GL" };
        let atom = format!("{nm}_{m}({qc})");
        parts.push(if count > 1 { format!("{atom}^{count}") } else { atom });
    }
    ord /= big(z);
    (format!("({})/{z}", parts.join(" × ")), ord)
}

fn log_p(mut n: usize, p: u32) -> usize {
    let mut e = 0;
    while n > 1 {
        n /= p as usize;
        e += 1;
    }
    e
}

fn l0_for(spec: &GroupSpec, p: u32) -> u32 {
    let q = spec.q() % p as u64;
    let phi = match spec.form {
        Form::Linear => q,
        Form::Unitary => (p as u64 - q) % p as u64,
    };
    mod_inverse(phi, p as u64).expect("p does not divide q") as u32
}

fn is_scalar(l: &Matrix, c: u32) -> bool {
    l.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == if i == j { c } else { 0 }))
}

/// Finite classes splitting from the toral class of `w`.
pub fn toral_records(w: &WeightMultiset, spec: &GroupSpec) -> Result<Vec<ClassRecord>> {
    let p = w.p;
    let l0 = l0_for(spec, p);
    let aff = toral::affine_symmetries_capped(w, AFFINE_CAP)?;
    let twists: Vec<Vector> =
        aff.elements.iter().filter(|(l, _)| is_scalar(l, l0)).map(|(_, t)| t.clone()).collect();
    if twists.is_empty() {
        return Ok(Vec::new());
    }
    // Conjugating x ↦ l0·x + v by (M, s) gives translation part (1−l0)s + Mv.
    let one_minus = (1 + p - l0) % p;
    let mut class_of: HashMap<Vector, usize> = HashMap::new();
    let mut classes: Vec<Vec<Vector>> = Vec::new();
    for t in &twists {
        if class_of.contains_key(t) {
            continue;
        }
        let id = classes.len();
        let mut members: Vec<Vector> = Vec::new();
        for (m, s) in &aff.elements {
            let img = fp::vec_add(&fp::vec_scale(s, one_minus, p), &fp::mat_vec(m, t, p), p);
            if !class_of.contains_key(&img) {
                class_of.insert(img.clone(), id);
                members.push(img);
            }
        }
        members.sort();
        classes.push(members);
    }
    classes.sort();
    let fixed = aff.translations.iter().filter(|t| fp::vec_scale(t, l0, p) == **t).count();
    let r1 = log_p(aff.translations.len(), p);
    let fixed_exp = log_p(fixed, p);
    let split = l0 == 1;
    let mut out = Vec::new();
    for (i, members) in classes.iter().enumerate() {
        let v = &members[0];
        let (c0, c0_ord) = twisted_torus(w, l0, v, spec, w.n);
        let cent_aff = aff.order() / members.len();
        let principal = split && v.iter().all(|&x| x == 0);
        let c_descr = if fixed > 1 { format!("({c0}).{}", pow_str(p, fixed_exp)) } else { c0.clone() };
        let c_ord = &c0_ord * big(fixed as u64);
        let n_ord = &c0_ord * big(cent_aff as u64);
        let n_descr = if principal {
            let lin = aff.linear_order();
            match (r1, lin) {
                (0, 1) => c0.clone(),
                (0, _) => format!("({c0}).{lin}"),
                (_, 1) => format!("({c0}).{}", pow_str(p, r1)),
                _ => format!("({c0}).({}:{lin})", pow_str(p, r1)),
            }
        } else if cent_aff > 1 {
            format!("({c0}).{cent_aff}")
        } else {
            c0.clone()
        };
        let tag = if !split {
            "nonsplit"
        } else if principal {
            "principal"
        } else {
            "b-twisted"
        };
        let mut rec = ClassRecord {
            kind: Kind::Toral,
            r: 0,
            rank: w.d,
            lambda_w: w.clone(),
            splitting_label: format!("E_{}", i + 1),
            tag: tag.to_string(),
            twist: v.clone(),
            realizable: true,
            realizable_reason: if principal {
                "diagonal representative over the matrix field".into()
            } else {
                format!("twisted by an affine symmetry with linear part {l0}·I")
            },
            centralizer: Structure::checked(c_descr, c_ord)?,
            normalizer: Structure::checked(n_descr, n_ord)?,
            generators: Vec::new(),
        };
        if principal {
            rec.generators = realize_principal(&rec, spec)?;
        }
        out.push(rec);
    }
    Ok(out)
}

/// Basis of the translation stabilizer and the pivot columns of that basis.
fn translation_basis(w: &WeightMultiset) -> (Vec<Vector>, Vec<usize>) {
    let stab = translation_stabilizer_nonzero(w);
    if stab.is_empty() {
        return (Vec::new(), Vec::new());
    }
    fp::rref(&stab, w.p)
}

fn translation_stabilizer_nonzero(w: &WeightMultiset) -> Vec<Vector> {
    if w.d == 0 {
        return Vec::new();
    }
    toral::translation_stabilizer(w).into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect()
}

/// Order of the descriptor for `N_{PGL_k}(Λ)/C_{PGL_k}(Λ)` acting on weights.
fn weyl_descr(lin: usize, d: usize, p: u32) -> String {
    if d > 0 && BigUint::from(lin) == gl_order(d as u32, p as u64) {
        format!("GL_{d}({p})")
    } else {
        lin.to_string()
    }
}

/// Finite classes splitting from `Γ̄_r × Λ` with Λ a toral class of PGL_k.
pub fn nontoral_records(r: u32, lambda: &WeightMultiset, spec: &GroupSpec, key: &CaseKey) -> Result<Vec<ClassRecord>> {
    let p = lambda.p;
    let k = lambda.n;
    let d = lambda.d;
    let ru = r as usize;
    let (vbasis, pivots) = translation_basis(lambda);
    let r1 = vbasis.len();
    let aff = if d == 0 {
        None
    } else {
        Some(toral::affine_symmetries_capped(lambda, AFFINE_CAP)?)
    };
    let lin = aff.as_ref().map_or(1, |a| a.linear_order());
    let mut space = ActionSpace::new(p, ru, r1)?;
    let twist = key.orthogonal_twist().then(|| QuadForm::new(ru, principal_form_plus(key.form, r)));
    space.add_symplectic(twist);
    let mut restricted: Vec<Matrix> = Vec::new();
    if let Some(a) = &aff {
        for l in &a.linear_parts {
            let m: Matrix = (0..r1)
                .map(|i| (0..r1).map(|j| fp::mat_vec(l, &vbasis[j], p)[pivots[i]]).collect())
                .collect();
            if m != fp::identity(r1) && !restricted.contains(&m) {
                restricted.push(m);
            }
        }
    }
    let image_is_full_gl = r1 > 0
        && fp::matrix_closure(&restricted, p, usize::MAX).map(|g| g.len() as u64)
            == gl_order(r1 as u32, p as u64).to_u64();
    let image_order = if r1 == 0 {
        1
    } else {
        fp::matrix_closure(&restricted, p, usize::MAX).map_or(1, |g| g.len())
    };
    space.add_translation_linear(&restricted);
    space.add_shears();
    let classes = compgrp::f_twisted_classes(&space);

    let pr = |e: usize| big(p as u64).pow(e as u32);
    let sp = order::sp_order(r, p as u64);
    let comp_order = pr(2 * ru) * pr(r1);
    let nc0 = &comp_order * pr(2 * ru * d) * &sp * big(lin as u64);
    let gamma = format!("Gamma_{r}({p})");
    let shear_exp = |e: usize| if e == 0 { None } else { Some(format!("{p}^{{{}×{}}}", 2 * ru, e)) };
    let weyl = weyl_descr(lin, d, p);
    let mut out = Vec::new();
    for (i, cls) in classes.iter().enumerate() {
        let x = &cls.representative[..2 * ru];
        let b = &cls.representative[2 * ru..];
        let mut t = vec![0u32; d];
        for (j, &bj) in b.iter().enumerate() {
            t = fp::vec_add(&t, &fp::vec_scale(&vbasis[j], bj, p), p);
        }
        let (c0, c0_ord) = twisted_torus(lambda, 1, &t, spec, k);
        let b_zero = b.iter().all(|&y| y == 0);
        let x_zero = x.iter().all(|&y| y == 0);
        let tag = if b_zero && x_zero {
            "principal"
        } else if b_zero {
            "gamma-twisted"
        } else {
            "b-twisted"
        };
        let c_ord = &c0_ord * &comp_order;
        let n_ord = &c0_ord * &nc0 / big(cls.size as u64);
        let inner = if c0 == "1" { gamma.clone() } else { format!("{gamma} × {c0}") };
        let c_descr = if r1 > 0 { format!("({inner}).{}", pow_str(p, r1)) } else { format!("({inner})") };
        let sym = if !b_zero {
            // Stabilizer of b in the image on V, times the kernel.
            let orbit = cls.size / (p as usize).pow(2 * r);
            let stab = lin / orbit;
            let kernel = lin / image_order;
            if image_is_full_gl {
                let parabolic = if r1 == 1 {
                    None
                } else {
                    Some(format!("{}:GL_{}({p})", pow_str(p, r1 - 1), r1 - 1))
                };
                match (kernel, parabolic) {
                    (1, None) => None,
                    (kk, None) => Some(kk.to_string()),
                    (1, Some(pa)) => Some(pa),
                    (kk, Some(pa)) => Some(format!("{kk} × {pa}")),
                }
            } else if stab > 1 {
                Some(stab.to_string())
            } else {
                None
            }
        } else if lin > 1 {
            Some(weyl.clone())
        } else {
            None
        };
        let sp_part = if !b_zero {
            format!("Sp_{}({p})", 2 * r)
        } else if let Some(q0) = twist {
            let plus = if x_zero { q0.plus } else { !q0.plus };
            format!("SO{}_{}(2)", if plus { "+" } else { "-" }, 2 * r)
        } else if x_zero {
            format!("Sp_{}({p})", 2 * r)
        } else if r == 1 {
            pow_str(p, 1)
        } else {
            format!("{}:Sp_{}({p})", pow_str(p, 2 * ru - 1), 2 * r - 2)
        };
        let top = match sym {
            Some(s) => format!("({sp_part} × {s})"),
            None => format!("({sp_part})"),
        };
        let shear_rank = if b_zero { d } else { d - 1 };
        let quotient = match shear_exp(shear_rank) {
            Some(sh) => format!("({sh}:{top})"),
            None => top,
        };
        let n_descr = format!("{c_descr}.{quotient}");
        let mut rec = ClassRecord {
            kind: Kind::Nontoral,
            r,
            rank: 2 * ru + d,
            lambda_w: lambda.clone(),
            splitting_label: format!("E_{}", i + 1),
            tag: tag.to_string(),
            twist: cls.representative.clone(),
            realizable: true,
            realizable_reason: if tag == "principal" {
                format!("Γ̄_{r} × Λ with p^r = {} dividing n", (p as usize).pow(r))
            } else {
                format!("twisted class of size {} in the component group", cls.size)
            },
            centralizer: Structure::checked(c_descr, c_ord)?,
            normalizer: Structure::checked(n_descr, n_ord)?,
            generators: Vec::new(),
        };
        if tag == "principal" {
            rec.generators = realize_principal(&rec, spec)?;
        }
        out.push(rec);
    }
    Ok(out)
}

/// Generators of the principal representative: the Γ̄_r generators together
/// with `λ ⊗ I_{p^r}` for the diagonal generators λ of Λ.
pub fn realize_principal(record: &ClassRecord, spec: &GroupSpec) -> Result<Vec<ProjMat>> {
    if !record.is_principal() {
        return Err(Error::NotRealizable(format!("{} is not a principal class", record.splitting_label)));
    }
    let p = record.lambda_w.p;
    if record.kind == Kind::Toral {
        return toral::realize_in_group(&record.lambda_w, spec);
    }
    let r = record.r;
    let k = record.lambda_w.n;
    let f = &spec.mfield;
    let beta = toral::diagonal_root(p, spec)?;
    let g = gamma::gamma_generators_with_root(p, r, k, beta, f)?;
    let mut gens = g.interleaved();
    if record.lambda_w.d > 0 {
        let spec_k = GroupSpec::new(spec.form, k, spec.q())?;
        let id = Mat::identity((p as usize).pow(r));
        for l in toral::realize_in_group(&record.lambda_w, &spec_k)? {
            gens.push(ProjMat::new(Mat::kron(l.mat(), &id, f), f)?);
        }
    }
    Ok(gens)
}

/// Every class of elementary abelian p-subgroups, ordered by rank.
pub fn classify(n: usize, q: u64, p: u32, form: Form) -> Result<Vec<ClassRecord>> {
    classify_with(n, q, p, form, Exec::default())
}

pub fn classify_with(n: usize, q: u64, p: u32, form: Form, exec: Exec) -> Result<Vec<ClassRecord>> {
    if n < 2 {
        return Err(Error::InvalidConfig("n must be at least 2".into()));
    }
    let key = CaseKey::new(form, q, p)?;
    let spec = GroupSpec::new(form, n, q)?;
    let levels = toral::enumerate_levels(n, p, n - 1, exec)?;
    let mut jobs: Vec<(u32, WeightMultiset)> =
        levels[n].iter().filter(|w| w.d >= 1).map(|w| (0, w.clone())).collect();
    for r in existence_check(n, q, p, form)? {
        let k = n / (p as usize).pow(r);
        jobs.extend(levels[k].iter().map(|w| (r, w.clone())));
    }
    let results = exec.map(&jobs, |(r, w)| {
        if *r == 0 {
            toral_records(w, &spec)
        } else {
            nontoral_records(*r, w, &spec, &key)
        }
    });
    let mut out = Vec::new();
    for res in results {
        out.extend(res?);
    }
    out.sort_by_key(|rec| rec.rank);
    Ok(out)
}

/// Count of classes per rank.
pub fn counts_by_rank(records: &[ClassRecord]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for rec in records {
        *m.entry(rec.rank).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(recs: &[ClassRecord], rank: usize) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = recs
            .iter()
            .filter(|r| r.rank == rank)
            .map(|r| (r.centralizer.order.to_u64().unwrap(), r.normalizer.order.to_u64().unwrap()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn existence_examples() {
        assert_eq!(existence_check(15, 11, 5, Form::Linear).unwrap(), vec![1]);
        assert_eq!(existence_check(3, 4, 3, Form::Linear).unwrap(), vec![1]);
        assert!(existence_check(3, 5, 3, Form::Linear).unwrap().is_empty());
        assert!(matches!(existence_check(4, 4, 2, Form::Linear), Err(Error::DefiningCharacteristic { .. })));
    }

    #[test]
    fn pgl2_5() {
        let recs = classify(2, 5, 2, Form::Linear).unwrap();
        assert_eq!(orders(&recs, 1), vec![(8, 8), (12, 12)]);
        assert_eq!(orders(&recs, 2), vec![(4, 8), (4, 24)]);
    }

    #[test]
    fn pgl2_7_twisted() {
        let recs = classify(2, 7, 2, Form::Linear).unwrap();
        let principal = recs.iter().find(|r| r.rank == 2 && r.is_principal()).unwrap();
        assert_eq!(principal.normalizer.order, big(8));
        assert_eq!(orders(&recs, 2), vec![(4, 8), (4, 24)]);
    }

    #[test]
    fn pgl3_odd() {
        let recs = classify(3, 4, 3, Form::Linear).unwrap();
        assert_eq!(orders(&recs, 1), vec![(27, 54), (63, 63), (180, 180)]);
        assert_eq!(orders(&recs, 2), vec![(9, 27), (9, 54), (9, 216)]);
        let recs = classify(3, 5, 3, Form::Linear).unwrap();
        assert_eq!(orders(&recs, 1), vec![(24, 48)]);
        assert!(orders(&recs, 2).is_empty());
    }

    #[test]
    fn pgu3_2() {
        let recs = classify(3, 2, 3, Form::Unitary).unwrap();
        assert_eq!(orders(&recs, 1), vec![(9, 9), (18, 18), (27, 54)]);
        assert_eq!(orders(&recs, 2), vec![(9, 27), (9, 54), (9, 216)]);
    }

    #[test]
    fn pgl4_5_families() {
        let recs = classify(4, 5, 2, Form::Linear).unwrap();
        let nontoral: Vec<&ClassRecord> = recs.iter().filter(|r| r.kind == Kind::Nontoral).collect();
        let fam = |r: u32, d: usize| nontoral.iter().filter(|x| x.r == r && x.lambda_w.d == d).count();
        assert_eq!(fam(2, 0), 2);
        assert_eq!(fam(1, 0), 2);
        assert_eq!(fam(1, 1), 3);
    }
}
