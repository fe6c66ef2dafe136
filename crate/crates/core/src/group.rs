//! Finite abelian groups `Z_m1 x ... x Z_mk`, their characters and subgroups.
//!
//! A character is stored by its exponent vector `c`; it pairs with an element
//! `a` as `prod zeta_{m_i}^{c_i a_i}`. The dual group therefore has the same
//! invariant factors as the group.

use crate::error::{Error, Result};
use crate::lattice::{integer_kernel, smith_normal_form, IntMatrix};
use crate::scalars::RootOfUnity;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, ToPrimitive};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

/// Element as residues `0 <= a_i < m_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrpElt(pub Vec<u64>);

impl FinAbGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::InvalidInput("invariant factors must be positive".into()));
        }
        Ok(FinAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn zero(&self) -> GrpElt {
        GrpElt(vec![0; self.factors.len()])
    }

    /// Reduces arbitrary integer coordinates into the group.
    pub fn element(&self, coords: &[i64]) -> Result<GrpElt> {
        if coords.len() != self.factors.len() {
            return Err(Error::GroupMismatch);
        }
        Ok(GrpElt(coords.iter().zip(&self.factors).map(|(&a, &m)| a.rem_euclid(m as i64) as u64).collect()))
    }

    pub fn contains(&self, a: &GrpElt) -> bool {
        a.0.len() == self.factors.len() && a.0.iter().zip(&self.factors).all(|(x, m)| x < m)
    }

    fn check(&self, a: &GrpElt) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, a: &GrpElt, b: &GrpElt) -> GrpElt {
        GrpElt(a.0.iter().zip(&b.0).zip(&self.factors).map(|((x, y), m)| (x + y) % m).collect())
    }

    pub fn neg(&self, a: &GrpElt) -> GrpElt {
        GrpElt(a.0.iter().zip(&self.factors).map(|(x, m)| (m - x) % m).collect())
    }

    pub fn sub(&self, a: &GrpElt, b: &GrpElt) -> GrpElt {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &GrpElt, k: i64) -> GrpElt {
        GrpElt(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &m)| ((x as i128 * k as i128).rem_euclid(m as i128)) as u64)
                .collect(),
        )
    }

    /// Every element, in lexicographic order of residues.
    pub fn elements(&self) -> Vec<GrpElt> {
        let mut out = vec![Vec::new()];
        for &m in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p: Vec<u64>| {
                    (0..m).map(move |x| {
                        let mut p = p.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(GrpElt).collect()
    }

    /// Position of `a` in [`elements`](Self::elements).
    pub fn index_of(&self, a: &GrpElt) -> usize {
        a.0.iter().zip(&self.factors).fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize)
    }

    pub fn element_order(&self, a: &GrpElt) -> u64 {
        a.0.iter()
            .zip(&self.factors)
            .map(|(&x, &m)| m / num_integer::gcd(x, m))
            .fold(1, num_integer::lcm)
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().copied().fold(1, num_integer::lcm)
    }

    pub fn character(&self, exponents: &[i64]) -> Result<Character> {
        Ok(Character { group: self.clone(), exponents: self.element(exponents)?.0 })
    }

    pub fn trivial_character(&self) -> Character {
        Character { group: self.clone(), exponents: vec![0; self.factors.len()] }
    }

    /// All characters in the order of [`elements`](Self::elements).
    pub fn characters(&self) -> Vec<Character> {
        self.elements().into_iter().map(|e| Character { group: self.clone(), exponents: e.0 }).collect()
    }

    /// Product group `self x other`.
    pub fn product(&self, other: &FinAbGroup) -> FinAbGroup {
        FinAbGroup { factors: self.factors.iter().chain(&other.factors).copied().collect() }
    }
}

/// Character of a [`FinAbGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    group: FinAbGroup,
    exponents: Vec<u64>,
}

impl Character {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// The character viewed as an element of the dual group.
    pub fn as_element(&self) -> GrpElt {
        GrpElt(self.exponents.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&c| c == 0)
    }

    pub fn mul(&self, other: &Character) -> Character {
        Character { group: self.group.clone(), exponents: self.group.add(&self.as_element(), &other.as_element()).0 }
    }

    pub fn inv(&self) -> Character {
        Character { group: self.group.clone(), exponents: self.group.neg(&self.as_element()).0 }
    }
}

/// `chi(a) = prod zeta_{m_i}^{c_i a_i}`.
pub fn character_value(chi: &Character, a: &GrpElt) -> Result<RootOfUnity> {
    chi.group.check(a)?;
    Ok(pairing(&chi.group, &chi.exponents, &a.0))
}

/// Pairing of two residue vectors; symmetric in its arguments.
pub fn pairing(g: &FinAbGroup, c: &[u64], a: &[u64]) -> RootOfUnity {
    let mut r = RootOfUnity::ONE;
    for ((&ci, &ai), &m) in c.iter().zip(a).zip(&g.factors) {
        r = r * RootOfUnity::new(m, ((ci as u128 * ai as u128) % m as u128) as i64);
    }
    r
}

/// Subgroup of a finite abelian group with a Smith basis.
///
/// `basis[j]` has order `basis_orders[j] > 1` and the subgroup is the internal
/// direct sum of the cyclic groups they generate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ambient: FinAbGroup,
    generators: Vec<GrpElt>,
    generator_orders: Vec<u64>,
    basis: Vec<GrpElt>,
    basis_orders: Vec<u64>,
    coords: BTreeMap<GrpElt, Vec<u64>>,
}

impl Subgroup {
    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[GrpElt] {
        &self.generators
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.generator_orders
    }

    pub fn basis(&self) -> &[GrpElt] {
        &self.basis
    }

    pub fn basis_orders(&self) -> &[u64] {
        &self.basis_orders
    }

    pub fn order(&self) -> u64 {
        self.basis_orders.iter().product()
    }

    /// The subgroup as an abstract group `Z_s1 x ... x Z_sr`.
    pub fn intrinsic_group(&self) -> FinAbGroup {
        FinAbGroup { factors: self.basis_orders.clone() }
    }

    pub fn contains(&self, a: &GrpElt) -> bool {
        self.coords.contains_key(a)
    }

    /// Coordinates of `a` in the Smith basis.
    pub fn coordinates(&self, a: &GrpElt) -> Option<&[u64]> {
        self.coords.get(a).map(Vec::as_slice)
    }

    /// Elements, in lexicographic order of their coordinates.
    pub fn elements(&self) -> Vec<GrpElt> {
        let mut v: Vec<(&Vec<u64>, &GrpElt)> = self.coords.iter().map(|(e, c)| (c, e)).collect();
        v.sort();
        v.into_iter().map(|(_, e)| e.clone()).collect()
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.ambient.order()
    }
}

/// Subgroup generated by `gens`, with a Smith basis computed from the relation lattice.
pub fn subgroup_from_generators(g: &FinAbGroup, gens: &[GrpElt]) -> Result<Subgroup> {
    for x in gens {
        g.check(x)?;
    }
    let n = g.rank();
    let k = gens.len();
    // relations: kernel of [gens | diag(m)] projected onto the generator coordinates
    let stacked = IntMatrix::from_fn(n, k + n, |i, j| {
        if j < k {
            gens[j].0[i].into()
        } else if j - k == i {
            g.factors[i].into()
        } else {
            0.into()
        }
    });
    let ker = integer_kernel(&stacked);
    let relations = IntMatrix::from_fn(k, ker.cols(), |i, j| ker[(i, j)].clone());
    let smith = smith_normal_form(&relations);
    let diag = smith.diagonal();
    let mut basis = Vec::new();
    let mut basis_orders = Vec::new();
    for i in 0..k {
        let d = diag.get(i).and_then(|x| x.to_u64()).unwrap_or(0);
        assert!(d != 0, "finite group relations have full rank");
        if d.is_one() {
            continue;
        }
        let coeffs: Vec<i64> = (0..k).map(|j| smith.p_inv[(j, i)].to_i64().expect("small coefficient")).collect();
        let mut y = vec![0i64; n];
        for (j, c) in coeffs.iter().enumerate() {
            for (t, yt) in y.iter_mut().enumerate() {
                *yt = (*yt + (c.rem_euclid(g.factors[t] as i64)) * gens[j].0[t] as i64) % g.factors[t] as i64;
            }
        }
        basis.push(g.element(&y)?);
        basis_orders.push(d);
    }
    let generator_orders = gens.iter().map(|x| g.element_order(x)).collect();
    let intrinsic = FinAbGroup { factors: basis_orders.clone() };
    let mut coords = BTreeMap::new();
    for c in intrinsic.elements() {
        let mut e = g.zero();
        for (b, &ci) in basis.iter().zip(&c.0) {
            e = g.add(&e, &g.scale(b, ci as i64));
        }
        coords.insert(e, c.0);
    }
    debug_assert_eq!(coords.len() as u64, intrinsic.order());
    Ok(Subgroup { ambient: g.clone(), generators: gens.to_vec(), generator_orders, basis, basis_orders, coords })
}

/// Restriction of a character of the dual group to a subgroup of it, written
/// in the subgroup's Smith coordinates: component `j` is `e` with
/// `chi(eta_j) = zeta_{s_j}^e`.
pub fn psi_restrict(chi: &Character, sub: &Subgroup) -> Result<Character> {
    if chi.group != sub.ambient {
        return Err(Error::NotSubgroup);
    }
    let h = sub.intrinsic_group();
    let mut exps = Vec::with_capacity(h.rank());
    for (eta, &s) in sub.basis.iter().zip(&sub.basis_orders) {
        let v = character_value(chi, eta)?;
        exps.push(v.exponent_over(s).ok_or(Error::NotSubgroup)? as i64);
    }
    h.character(&exps)
}
