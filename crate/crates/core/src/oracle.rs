//! Brute-force ground truth for small groups.
//!
//! The whole group is enumerated by closure, elementary abelian p-subgroups
//! are built rank by rank from commuting elements of order p, and classes,
//! centralizers and normalizers are computed by full scans. Nothing here
//! depends on the classifier.

use crate::classify::{self, ClassRecord};
use crate::error::{Error, Result};
use crate::gfq::Fe;
use crate::par::Exec;
use crate::projmat::{Form, GroupSpec, Mat, ProjMat};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};

/// Default enumeration cap.
pub const GROUP_CAP: u64 = 1_000_000;

/// Sorted element ids of a subgroup.
pub type Subgroup = Vec<u32>;

/// A fully enumerated group with conjugation action by its generators.
#[derive(Debug, Clone)]
pub struct GroupTable {
    pub spec: GroupSpec,
    pub elements: Vec<ProjMat>,
    index: HashMap<ProjMat, u32>,
    pub generators: Vec<ProjMat>,
    /// `x ↦ g x g^{-1}` on element ids, one per generator.
    conj: Vec<Vec<u32>>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn id(&self, g: &ProjMat) -> Option<u32> {
        self.index.get(g).copied()
    }

    pub fn element(&self, id: u32) -> &ProjMat {
        &self.elements[id as usize]
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let f = &self.spec.mfield;
        self.index[&self.element(a).mul(self.element(b), f)]
    }

    /// Closure of the given elements inside the table.
    pub fn generated(&self, gens: &[u32]) -> Subgroup {
        let mut seen: HashSet<u32> = HashSet::new();
        let id = self.index[&ProjMat::identity(self.spec.n)];
        seen.insert(id);
        let mut queue = vec![id];
        let mut i = 0;
        while i < queue.len() {
            for &g in gens {
                let y = self.mul(queue[i], g);
                if seen.insert(y) {
                    queue.push(y);
                }
            }
            i += 1;
        }
        queue.sort_unstable();
        queue
    }

    /// Image of a subgroup under conjugation by generator `k`.
    fn conjugate(&self, s: &[u32], k: usize) -> Subgroup {
        let mut out: Vec<u32> = s.iter().map(|&x| self.conj[k][x as usize]).collect();
        out.sort_unstable();
        out
    }
}

fn closure_table(gens: &[ProjMat], spec: &GroupSpec, cap: u64, exec: Exec) -> Result<(Vec<ProjMat>, HashMap<ProjMat, u32>)> {
    let f = &spec.mfield;
    let id = ProjMat::identity(spec.n);
    let mut index: HashMap<ProjMat, u32> = HashMap::new();
    index.insert(id.clone(), 0);
    let mut elements = vec![id];
    let mut frontier = 0usize;
    while frontier < elements.len() {
        let end = elements.len();
        let batch = &elements[frontier..end];
        let products: Vec<Vec<ProjMat>> = exec.map(batch, |x| gens.iter().map(|g| x.mul(g, f)).collect());
        for y in products.into_iter().flatten() {
            if !index.contains_key(&y) {
                index.insert(y.clone(), elements.len() as u32);
                elements.push(y);
                if elements.len() as u64 > cap {
                    return Err(Error::CapExceeded { order: format!(">{cap}"), cap });
                }
            }
        }
        frontier = end;
    }
    Ok((elements, index))
}

fn permutation_mat(perm: &[usize]) -> Mat {
    Mat::permutation(perm)
}

fn standard_generators(spec: &GroupSpec) -> Result<Vec<ProjMat>> {
    let n = spec.n;
    let f = &spec.mfield;
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut gens = vec![
        ProjMat::new(permutation_mat(&swap), f)?,
        ProjMat::new(permutation_mat(&cycle), f)?,
    ];
    match spec.form {
        Form::Linear => {
            let mut d = vec![Fe::ONE; n];
            d[0] = f.primitive_element();
            gens.push(ProjMat::new(Mat::diag(&d), f)?);
            let mut t = Mat::identity(n);
            t.set(0, 1, Fe::ONE);
            gens.push(ProjMat::new(t, f)?);
        }
        Form::Unitary => {
            let q = spec.q();
            let zeta = f.pow(f.primitive_element(), q - 1);
            let mut d = vec![Fe::ONE; n];
            d[0] = zeta;
            gens.push(ProjMat::new(Mat::diag(&d), f)?);
            // Unitary 2×2 blocks (a b; −b̄ ā), added only when they enlarge
            // the group generated so far.
            let norm = |x: Fe| f.mul(x, spec.bar(x));
            let elems: Vec<Fe> = f.elements().collect();
            let mut current: HashSet<ProjMat> = crate::projmat::closure(&gens, n, f, GROUP_CAP as usize)?.into_iter().collect();
            for &a in &elems {
                for &b in &elems {
                    if f.add(norm(a), norm(b)) != Fe::ONE {
                        continue;
                    }
                    let mut m = Mat::identity(n);
                    m.set(0, 0, a);
                    m.set(0, 1, b);
                    m.set(1, 0, f.neg(spec.bar(b)));
                    m.set(1, 1, spec.bar(a));
                    let g = ProjMat::new(m, f)?;
                    if !current.contains(&g) {
                        gens.push(g);
                        current = crate::projmat::closure(&gens, n, f, GROUP_CAP as usize)?.into_iter().collect();
                    }
                }
            }
            // Over small fields the blocks can all be monomial; scan every
            // matrix for the missing generators.
            let total = (elems.len() as u64).checked_pow((n * n) as u32).unwrap_or(u64::MAX);
            if BigUint::from(current.len()) != spec.order() && total <= 1 << 24 {
                for code in 0..total {
                    let mut c = code;
                    let entries: Vec<Fe> = (0..n * n)
                        .map(|_| {
                            let e = elems[(c % elems.len() as u64) as usize];
                            c /= elems.len() as u64;
                            e
                        })
                        .collect();
                    let m = Mat::from_entries(n, entries)?;
                    if m.det(f).is_zero() || !spec.unitary_check(&m) {
                        continue;
                    }
                    let g = ProjMat::new(m, f)?;
                    if !current.contains(&g) {
                        gens.push(g);
                        current = crate::projmat::closure(&gens, n, f, GROUP_CAP as usize)?.into_iter().collect();
                        if BigUint::from(current.len()) == spec.order() {
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(gens)
}

/// The full group by closure from standard generators.
pub fn enumerate_group(spec: &GroupSpec, cap: u64) -> Result<GroupTable> {
    enumerate_group_with(spec, cap, Exec::default())
}

pub fn enumerate_group_with(spec: &GroupSpec, cap: u64, exec: Exec) -> Result<GroupTable> {
    let expected = spec.order();
    if expected > BigUint::from(cap) {
        return Err(Error::CapExceeded { order: expected.to_string(), cap });
    }
    let generators = standard_generators(spec)?;
    let (elements, index) = closure_table(&generators, spec, cap, exec)?;
    if BigUint::from(elements.len()) != expected {
        return Err(Error::DimensionMismatch(format!(
            "closure has {} elements, expected {expected}",
            elements.len()
        )));
    }
    let f = &spec.mfield;
    let conj = generators
        .iter()
        .map(|g| {
            let gi = g.inv(f);
            exec.map(&elements, |x| index[&g.mul(x, f).mul(&gi, f)])
        })
        .collect();
    Ok(GroupTable { spec: spec.clone(), elements, index, generators, conj })
}

/// Ids of the elements of order exactly p.
pub fn elements_of_order(t: &GroupTable, p: u32) -> Vec<u32> {
    let f = &t.spec.mfield;
    let exec = Exec::default();
    let flags = exec.map(&t.elements, |x| !x.is_identity() && x.pow(p as u64, f).is_identity());
    flags.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32).collect()
}

/// A conjugacy class of subgroups.
#[derive(Debug, Clone, Serialize)]
pub struct SubgroupClass {
    pub rank: usize,
    pub representative: Subgroup,
    /// Ids of a minimal generating set of the representative.
    pub generators: Vec<u32>,
    pub members: Vec<Subgroup>,
}

impl SubgroupClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

fn orbit(t: &GroupTable, s: &Subgroup) -> Vec<Subgroup> {
    let mut seen: HashSet<Subgroup> = HashSet::new();
    seen.insert(s.clone());
    let mut out = vec![s.clone()];
    let mut i = 0;
    while i < out.len() {
        for k in 0..t.conj.len() {
            let y = t.conjugate(&out[i], k);
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
        i += 1;
    }
    out.sort();
    out
}

fn rank_of(size: usize, p: u32) -> usize {
    let mut r = 0;
    let mut m = size;
    while m > 1 {
        m /= p as usize;
        r += 1;
    }
    r
}

/// Conjugacy classes of nontrivial elementary abelian p-subgroups, rank by
/// rank. Each class of rank k+1 is found by extending a representative of
/// rank k by a commuting element of order p.
pub fn elem_abelian_classes(t: &GroupTable, p: u32) -> Vec<SubgroupClass> {
    let f = &t.spec.mfield;
    let order_p = elements_of_order(t, p);
    let mut seen: HashMap<Subgroup, usize> = HashMap::new();
    let mut classes: Vec<SubgroupClass> = Vec::new();
    let mut level: Vec<usize> = Vec::new();
    for &x in &order_p {
        let s = t.generated(&[x]);
        if seen.contains_key(&s) {
            continue;
        }
        let members = orbit(t, &s);
        let id = classes.len();
        for m in &members {
            seen.insert(m.clone(), id);
        }
        classes.push(SubgroupClass { rank: 1, representative: s, generators: vec![x], members });
        level.push(id);
    }
    while !level.is_empty() {
        let mut next = Vec::new();
        for &ci in &level {
            let rep = classes[ci].representative.clone();
            let gens = classes[ci].generators.clone();
            let gm: Vec<&ProjMat> = gens.iter().map(|&g| t.element(g)).collect();
            let members: HashSet<u32> = rep.iter().copied().collect();
            let cands: Vec<u32> = Exec::default().filter_map_range(order_p.len(), |i| {
                let y = order_p[i];
                if members.contains(&y) {
                    return None;
                }
                let ym = t.element(y);
                gm.iter().all(|g| g.commutes_with(ym, f)).then_some(y)
            });
            for y in cands {
                let mut g2 = gens.clone();
                g2.push(y);
                let s = t.generated(&g2);
                if seen.contains_key(&s) {
                    continue;
                }
                let members = orbit(t, &s);
                let id = classes.len();
                for m in &members {
                    seen.insert(m.clone(), id);
                }
                classes.push(SubgroupClass { rank: rank_of(s.len(), p), representative: s, generators: g2, members });
                next.push(id);
            }
        }
        level = next;
    }
    classes.sort_by(|a, b| (a.rank, &a.representative).cmp(&(b.rank, &b.representative)));
    classes
}

/// Every nontrivial elementary abelian p-subgroup.
pub fn all_elem_abelian_subgroups(t: &GroupTable, p: u32) -> Vec<Subgroup> {
    let mut out: Vec<Subgroup> = elem_abelian_classes(t, p).into_iter().flat_map(|c| c.members).collect();
    out.sort();
    out
}

/// Partition of a family of subgroups into conjugacy classes.
pub fn subgroup_conjugacy_classes(t: &GroupTable, subs: &[Subgroup]) -> Vec<(Subgroup, usize)> {
    let mut seen: HashSet<Subgroup> = HashSet::new();
    let mut out = Vec::new();
    for s in subs {
        if seen.contains(s) {
            continue;
        }
        let o = orbit(t, s);
        out.push((o[0].clone(), o.len()));
        seen.extend(o);
    }
    out
}

/// Elements commuting with every generator.
pub fn brute_centralizer(t: &GroupTable, gens: &[u32]) -> Vec<u32> {
    let f = &t.spec.mfield;
    let gm: Vec<&ProjMat> = gens.iter().map(|&g| t.element(g)).collect();
    Exec::default().filter_map_range(t.order(), |i| {
        let x = &t.elements[i];
        gm.iter().all(|g| g.commutes_with(x, f)).then_some(i as u32)
    })
}

/// Elements conjugating the subgroup `s` (generated by `gens`) to itself.
pub fn brute_normalizer(t: &GroupTable, s: &[u32], gens: &[u32]) -> Vec<u32> {
    let f = &t.spec.mfield;
    let set: HashSet<u32> = s.iter().copied().collect();
    Exec::default().filter_map_range(t.order(), |i| {
        let x = &t.elements[i];
        let xi = x.inv(f);
        gens.iter()
            .all(|&g| t.id(&x.mul(t.element(g), f).mul(&xi, f)).is_some_and(|y| set.contains(&y)))
            .then_some(i as u32)
    })
}

/// Rank, centralizer order and normalizer order of one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassSignature {
    pub rank: usize,
    pub centralizer: u64,
    pub normalizer: u64,
}

/// Brute-force signatures, with orbit-stabilizer checked for each class.
pub fn oracle_signatures(t: &GroupTable, p: u32) -> Result<Vec<ClassSignature>> {
    let mut out = Vec::new();
    for c in elem_abelian_classes(t, p) {
        let cen = brute_centralizer(t, &c.generators).len() as u64;
        let nor = brute_normalizer(t, &c.representative, &c.generators).len();
        if nor * c.size() != t.order() {
            return Err(Error::DimensionMismatch(format!(
                "orbit-stabilizer fails: {} · {} ≠ {}",
                c.size(),
                nor,
                t.order()
            )));
        }
        out.push(ClassSignature { rank: c.rank, centralizer: cen, normalizer: nor as u64 });
    }
    out.sort();
    Ok(out)
}

/// One disagreement between the classifier and brute force.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub claim: String,
    pub expected: String,
    pub found: String,
}

/// Result of checking a classification against brute force.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub status: String,
    pub checked_against_oracle: bool,
    pub group_order: u64,
    pub oracle: Vec<ClassSignature>,
    pub classifier: Vec<ClassSignature>,
    pub matched: usize,
    /// Per-rank class counts found by brute force.
    pub counts: BTreeMap<usize, usize>,
    pub principal_checks: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn record_signature(r: &ClassRecord) -> Result<ClassSignature> {
    let small = |v: &BigUint| v.to_u64().ok_or_else(|| Error::CapacityExceeded("order does not fit in 64 bits".into()));
    Ok(ClassSignature { rank: r.rank, centralizer: small(&r.centralizer.order)?, normalizer: small(&r.normalizer.order)? })
}

/// Runs the classifier and brute force on the same group and compares the
/// multisets of (rank, |C|, |N|) and the principal representatives.
pub fn compare_with_classifier(n: usize, q: u64, p: u32, form: Form, cap: u64) -> Result<ComparisonReport> {
    let spec = GroupSpec::new(form, n, q)?;
    let records = classify::classify(n, q, p, form)?;
    let table = enumerate_group(&spec, cap)?;
    compare_records(&table, p, &records)
}

/// As [`compare_with_classifier`] for an already enumerated group.
pub fn compare_records(table: &GroupTable, p: u32, records: &[ClassRecord]) -> Result<ComparisonReport> {
    let spec = &table.spec;
    let oracle = oracle_signatures(table, p)?;
    let mut classifier: Vec<ClassSignature> = records.iter().map(record_signature).collect::<Result<_>>()?;
    classifier.sort();
    let mut mismatches = Vec::new();
    let mut remaining: BTreeMap<ClassSignature, i64> = BTreeMap::new();
    for s in &oracle {
        *remaining.entry(*s).or_insert(0) += 1;
    }
    let mut matched = 0;
    for s in &classifier {
        let e = remaining.entry(*s).or_insert(0);
        if *e > 0 {
            matched += 1;
        }
        *e -= 1;
    }
    for (s, c) in &remaining {
        let what = format!("rank {} class with |C| = {}, |N| = {}", s.rank, s.centralizer, s.normalizer);
        if *c > 0 {
            mismatches.push(Mismatch { claim: what, expected: format!("{c} more predicted"), found: "missing".into() });
        } else if *c < 0 {
            mismatches.push(Mismatch { claim: what, expected: "absent".into(), found: format!("{} extra predicted", -c) });
        }
    }
    let mut counts = BTreeMap::new();
    for s in &oracle {
        *counts.entry(s.rank).or_insert(0) += 1;
    }
    let mut principal_checks = 0;
    for rec in records.iter().filter(|r| r.is_principal()) {
        principal_checks += 1;
        let label = format!("{} r = {} rank {}", rec.splitting_label, rec.r, rec.rank);
        let mut fail = |expected: String, found: String| {
            mismatches.push(Mismatch { claim: format!("principal {label}"), expected, found })
        };
        if !rec.generators.iter().all(|g| spec.is_steinberg_fixed(g)) {
            fail("Steinberg-fixed generators".into(), "a generator moves".into());
            continue;
        }
        let ids: Option<Vec<u32>> = rec.generators.iter().map(|g| table.id(g)).collect();
        let Some(ids) = ids else {
            fail("generators inside the group".into(), "generator outside".into());
            continue;
        };
        let s = table.generated(&ids);
        let expected = (p as usize).pow(rec.rank as u32);
        if s.len() != expected {
            fail(format!("order {expected}"), format!("order {}", s.len()));
            continue;
        }
        let sig = record_signature(rec)?;
        let c = brute_centralizer(table, &ids).len() as u64;
        let nn = brute_normalizer(table, &s, &ids).len() as u64;
        if (c, nn) != (sig.centralizer, sig.normalizer) {
            fail(format!("|C| = {}, |N| = {}", sig.centralizer, sig.normalizer), format!("|C| = {c}, |N| = {nn}"));
        }
    }
    Ok(ComparisonReport {
        status: if mismatches.is_empty() { "pass".into() } else { "fail".into() },
        checked_against_oracle: true,
        group_order: table.order() as u64,
        oracle,
        classifier,
        matched,
        counts,
        principal_checks,
        mismatches,
    })
}
