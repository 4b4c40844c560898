//! Structural checks on toral classes shared by the integration and acceptance suites.
#![allow(dead_code)]

use elabsub_core::fp::{self, Vector};
use elabsub_core::oracle::{self, GroupTable};
use elabsub_core::order::gl_order;
use elabsub_core::projmat::GroupSpec;
use elabsub_core::toral::{self, WeightMultiset};
use num_bigint::BigUint;

/// A disconnected class splits as `D_{r_1} × H` with H connected and
/// `p^{r_1}` equal to the translation stabilizer order; a connected class
/// refuses to split.
pub fn check_decomposition(w: &WeightMultiset) -> Result<(), String> {
    let stab = toral::translation_stabilizer(w).len();
    match toral::decompose_disconnected(w) {
        Ok((r1, h)) => {
            if stab <= 1 {
                return Err(format!("{:?}: connected class decomposed", w.weights));
            }
            if (w.p as usize).pow(r1 as u32) != stab {
                return Err(format!("{:?}: r1 = {r1} but stabilizer {stab}", w.weights));
            }
            if h.d > 0 && toral::translation_stabilizer(&h).len() != 1 {
                return Err(format!("{:?}: factor H is disconnected", w.weights));
            }
            Ok(())
        }
        Err(e) if stab > 1 => Err(format!("{:?}: {e}", w.weights)),
        Err(_) => Ok(()),
    }
}

/// Nonzero exponent vectors whose eigenvalue fibres are not all of size n/p.
pub fn unbalanced_elements(w: &WeightMultiset) -> Vec<Vector> {
    let total = (w.p as usize).pow(w.d as u32);
    (1..total)
        .map(|i| fp::vec_from_index(i, w.d, w.p))
        .filter(|c| {
            let sizes = w.fibre_sizes(c);
            sizes.iter().any(|&s| s * w.p as usize != w.n)
        })
        .collect()
}

/// A connected class has an unbalanced element, and unbalanced elements
/// contain a generating set.
pub fn check_generator_choice(w: &WeightMultiset) -> Result<(), String> {
    if toral::translation_stabilizer(w).len() > 1 {
        return Ok(());
    }
    let u = unbalanced_elements(w);
    if u.is_empty() {
        return Err(format!("{:?}: every element balanced", w.weights));
    }
    if fp::rank(&u, w.p) != w.d {
        return Err(format!("{:?}: unbalanced elements span rank {}", w.weights, fp::rank(&u, w.p)));
    }
    Ok(())
}

/// Runs both checks over the toral classes of PGL_n for n ≤ n_max and
/// returns the number of classes examined.
pub fn check_levels(p: u32, n_max: usize) -> Result<usize, String> {
    let levels = toral::enumerate_levels(n_max, p, n_max - 1, elabsub_core::par::Exec::default()).map_err(|e| e.to_string())?;
    let mut seen = 0;
    for n in 2..=n_max {
        let classes: Vec<&WeightMultiset> = levels[n].iter().filter(|w| w.d >= 1).collect();
        for w in &classes {
            check_decomposition(w)?;
            check_generator_choice(w)?;
            seen += 1;
        }
        let rank1_disconnected = classes.iter().filter(|w| w.d == 1 && toral::translation_stabilizer(w).len() > 1).count();
        let want = usize::from(n % p as usize == 0);
        if rank1_disconnected != want {
            return Err(format!("p = {p} n = {n}: {rank1_disconnected} disconnected rank-1 classes"));
        }
    }
    Ok(seen)
}

/// Finite centralizer of a split toral class: `|stab| · ∏ |GL_{m_i}(q)| / (q − 1)`.
pub fn predicted_centralizer(w: &WeightMultiset, q: u64) -> BigUint {
    let mut c = BigUint::from(toral::translation_stabilizer(w).len());
    for (_, m) in w.support() {
        c *= gl_order(m as u32, q);
    }
    c / BigUint::from(q - 1)
}

/// Compares the predicted centralizer with brute force for every toral
/// class realizable in the table's group.
pub fn check_centralizers(table: &GroupTable, p: u32) -> Result<usize, String> {
    let spec: &GroupSpec = &table.spec;
    let q = spec.q();
    let classes = toral::enumerate_toral_classes(spec.n, p, spec.n - 1).map_err(|e| e.to_string())?;
    for w in &classes {
        let gens = toral::realize_in_group(w, spec).map_err(|e| e.to_string())?;
        let ids: Vec<u32> = gens
            .iter()
            .map(|g| table.id(g).ok_or_else(|| format!("{:?} not in group", w.weights)))
            .collect::<Result<_, _>>()?;
        let brute = oracle::brute_centralizer(table, &ids).len();
        let want = predicted_centralizer(w, q);
        if BigUint::from(brute) != want {
            return Err(format!("{:?} in PGL_{}({q}): brute {brute}, predicted {want}", w.weights, spec.n));
        }
    }
    Ok(classes.len())
}
