//! Sheaf axioms, stalks and sheafification for presheaves of abelian groups.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::{Presheaf, SheafError};
use crate::exactla::{kernel, subquotient, CyclicSum, GroupMap, IntMatrix, Subquotient};
use crate::finspace::{PointSet, SpaceError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Gluing,
    Locality,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Gluing => write!(f, "gluing"),
            Axiom::Locality => write!(f, "locality"),
        }
    }
}

/// A failure of a sheaf axiom at one open, against its canonical cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafViolation {
    pub open: Vec<String>,
    pub axiom: Axiom,
    /// For locality: a nonzero section over `open` restricting to zero everywhere.
    /// For gluing: a compatible family on the cover members with no glue.
    pub witness: Vec<(Vec<String>, Vec<BigInt>)>,
}

impl fmt::Display for SheafViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {:?}; witness:", self.axiom, self.open)?;
        for (open, coords) in &self.witness {
            let c: Vec<String> = coords.iter().map(BigInt::to_string).collect();
            write!(f, " {:?} -> [{}]", open, c.join(", "))?;
        }
        Ok(())
    }
}

/// `F_x` with the germ maps `F(U) -> F_x` for every open `U ∋ x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stalk {
    pub value: CyclicSum,
    /// Keyed by open index.
    pub germs: BTreeMap<usize, GroupMap>,
}

fn block_diagonal_free(parts: &[CyclicSum]) -> Vec<usize> {
    parts
        .iter()
        .scan(0, |acc, g| {
            let o = *acc;
            *acc += g.ngens();
            Some(o)
        })
        .collect()
}

impl Presheaf<GroupMap> {
    fn laws_hold(&self) -> Result<(), SheafError> {
        match self.check_presheaf_laws().first() {
            None => Ok(()),
            Some(v) => Err(SheafError::PresheafLawsViolated(v.to_string())),
        }
    }

    /// Checks gluing and locality at every open against the cover by minimal
    /// opens of its points. On a finite space any cover of `U_x` contains
    /// `U_x` itself, so this implies the axioms for all covers.
    pub fn check_sheaf_axioms(&self) -> Result<Vec<SheafViolation>, SheafError> {
        self.laws_hold()?;
        let x = &self.space;
        let mut out = Vec::new();
        for (u, &open) in x.opens().iter().enumerate().skip(1) {
            let mut members: Vec<usize> =
                open.iter().map(|p| x.open_index(x.minimal_open(p)).expect("minimal opens are open")).collect();
            members.sort_unstable();
            members.dedup();
            if members.contains(&u) {
                continue;
            }
            out.extend(self.check_cover(u, &members)?);
        }
        Ok(out)
    }

    /// Gluing and locality for one cover of open `u` by opens `members`.
    pub fn check_cover(&self, u: usize, members: &[usize]) -> Result<Vec<SheafViolation>, SheafError> {
        let x = &self.space;
        let opens = x.opens();
        let (phi, psi) = self.equalizer_maps(u, members);
        let name = |i: usize| x.set_labels(opens[i]);
        let mut out = Vec::new();
        let ker = kernel(&phi)?;
        if !ker.group().is_trivial() {
            out.push(SheafViolation { open: name(u), axiom: Axiom::Locality, witness: vec![(name(u), ker.lift(0))] });
        }
        let glue = subquotient(&psi, &phi)?;
        if !glue.group().is_trivial() {
            let family = glue.lift(0);
            let sources: Vec<CyclicSum> = members.iter().map(|&m| self.values[m].clone()).collect();
            let offsets = block_diagonal_free(&sources);
            let witness = members
                .iter()
                .zip(&offsets)
                .zip(&sources)
                .map(|((&m, &o), g)| (name(m), family[o..o + g.ngens()].to_vec()))
                .collect();
            out.push(SheafViolation { open: name(u), axiom: Axiom::Gluing, witness });
        }
        Ok(out)
    }

    /// `φ: F(U) -> ⊕ F(U_i)` and `ψ: ⊕ F(U_i) -> ⊕_{i<j} F(U_i ∩ U_j)`.
    fn equalizer_maps(&self, u: usize, members: &[usize]) -> (GroupMap, GroupMap) {
        let opens = self.space.opens();
        let parts: Vec<CyclicSum> = members.iter().map(|&m| self.values[m].clone()).collect();
        let phi_blocks: Vec<Vec<Option<GroupMap>>> = members.iter().map(|&m| vec![Some(self.restrictions[&(m, u)].clone())]).collect();
        let phi = GroupMap::from_blocks(&[self.values[u].clone()], &parts, &phi_blocks).expect("restrictions match values");
        let mut pair_targets = Vec::new();
        let mut psi_blocks = Vec::new();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let meet = opens[members[i]].intersection(opens[members[j]]);
                let w = self.space.open_index(meet).expect("intersections of opens are open");
                pair_targets.push(self.values[w].clone());
                let mut row = vec![None; members.len()];
                row[i] = Some(self.restrictions[&(w, members[i])].neg());
                row[j] = Some(self.restrictions[&(w, members[j])].clone());
                psi_blocks.push(row);
            }
        }
        let psi = GroupMap::from_blocks(&parts, &pair_targets, &psi_blocks).expect("restrictions match values");
        (phi, psi)
    }

    pub fn is_sheaf(&self) -> Result<bool, SheafError> {
        Ok(self.check_sheaf_axioms()?.is_empty())
    }

    /// The stalk at point `x`, attained at the minimal open `U_x`.
    pub fn stalk(&self, x: usize) -> Result<Stalk, SheafError> {
        if x >= self.space.npoints() {
            return Err(SpaceError::UnknownPoint(x.to_string()).into());
        }
        let ux = self.space.open_index(self.space.minimal_open(x)).expect("minimal opens are open");
        let germs = self
            .space
            .opens()
            .iter()
            .enumerate()
            .filter(|(_, o)| o.contains(x))
            .map(|(v, _)| (v, self.restrictions[&(ux, v)].clone()))
            .collect();
        Ok(Stalk { value: self.values[ux].clone(), germs })
    }

    pub fn stalk_of(&self, label: &str) -> Result<Stalk, SheafError> {
        let x = self.space.point(label)?;
        self.stalk(x)
    }

    /// Compatible germ families over `open`: the kernel of
    /// `(s_x) ↦ (ρ_{U_x,U_y}(s_y) - s_x)` over pairs `x ⊏ y` in `open`.
    fn compatible_families(&self, open: PointSet) -> Result<(Vec<usize>, Subquotient), SheafError> {
        let x = &self.space;
        let pts: Vec<usize> = open.iter().collect();
        let mins: Vec<usize> = pts.iter().map(|&p| x.open_index(x.minimal_open(p)).expect("open")).collect();
        let parts: Vec<CyclicSum> = mins.iter().map(|&m| self.values[m].clone()).collect();
        let mut targets = Vec::new();
        let mut blocks = Vec::new();
        for (i, &p) in pts.iter().enumerate() {
            for (j, &q) in pts.iter().enumerate() {
                if i != j && x.leq(p, q) {
                    targets.push(parts[i].clone());
                    let mut row = vec![None; pts.len()];
                    row[i] = Some(GroupMap::scalar(&parts[i], -1));
                    row[j] = Some(self.restrictions[&(mins[i], mins[j])].clone());
                    blocks.push(row);
                }
            }
        }
        let constraint = GroupMap::from_blocks(&parts, &targets, &blocks)?;
        Ok((mins, kernel(&constraint)?))
    }

    /// Sheafification by compatible families of germs, with the unit maps
    /// `F(U) -> F~(U)` indexed like the opens.
    pub fn sheafify_with_unit(&self) -> Result<(Presheaf<GroupMap>, Vec<GroupMap>), SheafError> {
        self.laws_hold()?;
        let x = self.space.clone();
        let opens = x.opens().to_vec();
        let families: Vec<(Vec<usize>, Subquotient)> =
            opens.iter().map(|&o| self.compatible_families(o)).collect::<Result<_, _>>()?;
        let values: Vec<CyclicSum> = families.iter().map(|(_, k)| k.group().to_cyclic()).collect();
        let mut given = BTreeMap::new();
        for (u, &ou) in opens.iter().enumerate().skip(1) {
            for (v, &ov) in opens.iter().enumerate() {
                if !ou.is_subset(ov) {
                    continue;
                }
                // Truncation of families from the points of V to those of U.
                let src = families[v].1.ambient();
                let dst = families[u].1.ambient();
                let vpts: Vec<usize> = ov.iter().collect();
                let src_off = block_diagonal_free(&families[v].0.iter().map(|&m| self.values[m].clone()).collect::<Vec<_>>());
                let dst_off = block_diagonal_free(&families[u].0.iter().map(|&m| self.values[m].clone()).collect::<Vec<_>>());
                let mut m = IntMatrix::zeros(dst.ngens(), src.ngens());
                for (k, p) in ou.iter().enumerate() {
                    let l = vpts.iter().position(|&q| q == p).expect("U is inside V");
                    let width = self.values[families[u].0[k]].ngens();
                    for t in 0..width {
                        m[(dst_off[k] + t, src_off[l] + t)] = BigInt::from(1);
                    }
                }
                let truncate = GroupMap::new(src.clone(), dst.clone(), m)?;
                given.insert((u, v), crate::exactla::induced_map(&families[v].1, &families[u].1, &truncate)?);
            }
        }
        let sheaf = Presheaf::new(x.clone(), values, given)?;
        let units = opens
            .iter()
            .enumerate()
            .map(|(u, &ou)| {
                let (mins, fam) = &families[u];
                let parts: Vec<CyclicSum> = mins.iter().map(|&m| self.values[m].clone()).collect();
                let blocks: Vec<Vec<Option<GroupMap>>> = mins.iter().map(|&m| vec![Some(self.restrictions[&(m, u)].clone())]).collect();
                let into_families = GroupMap::from_blocks(&[self.values[u].clone()], &parts, &blocks)?;
                let cols = (0..self.values[u].ngens())
                    .map(|j| {
                        let mut e = vec![BigInt::from(0); self.values[u].ngens()];
                        e[j] = BigInt::from(1);
                        fam.project(&into_families.apply(&e)).ok_or_else(|| {
                            SheafError::PresheafLawsViolated(format!("section over {:?} does not give a compatible family", x.set_labels(ou)))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let target = fam.group().to_cyclic();
                Ok(GroupMap::new(self.values[u].clone(), target.clone(), IntMatrix::from_columns(target.ngens(), &cols))?)
            })
            .collect::<Result<Vec<_>, SheafError>>()?;
        Ok((sheaf, units))
    }

    pub fn sheafify(&self) -> Result<Presheaf<GroupMap>, SheafError> {
        Ok(self.sheafify_with_unit()?.0)
    }

    /// True when every unit map `F(U) -> F~(U)` is an isomorphism.
    pub fn is_isomorphic_to_sheafification(&self) -> Result<bool, SheafError> {
        Ok(self.sheafify_with_unit()?.1.iter().all(GroupMap::is_isomorphism))
    }

    /// Values in canonical form, open by open.
    pub fn canonical_values(&self) -> Vec<crate::exactla::FgAbGroup> {
        self.values.iter().map(CyclicSum::canonical).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::FiniteSpace;
    use crate::exactla::FgAbGroup;

    fn z() -> CyclicSum {
        CyclicSum::free(1)
    }

    #[test]
    fn constant_presheaf_on_two_points_fails_gluing() {
        let x = FiniteSpace::discrete(&["a", "b"]).unwrap();
        let f = Presheaf::<GroupMap>::constant(x, z());
        let v = f.check_sheaf_axioms().unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axiom, Axiom::Gluing);
        assert_eq!(v[0].open, vec!["a".to_string(), "b".to_string()]);
        // The unglueable family has different values on the two points.
        assert_ne!(v[0].witness[0].1, v[0].witness[1].1);
    }

    #[test]
    fn zero_restrictions_fail_locality() {
        let x = FiniteSpace::discrete(&["a", "b"]).unwrap();
        let top = CyclicSum::free(2);
        let f = Presheaf::from_fn(
            x,
            |s| if s.len() == 2 { top.clone() } else { CyclicSum::zero() },
            |u, v| if u == v { GroupMap::identity(&if u.len() == 2 { top.clone() } else { CyclicSum::zero() }) } else { GroupMap::zero(top.clone(), CyclicSum::zero()) },
        )
        .unwrap();
        let v = f.check_sheaf_axioms().unwrap();
        assert!(v.iter().any(|w| w.axiom == Axiom::Locality && w.open.len() == 2));
    }

    #[test]
    fn pseudocircle_constant_sheaf_is_a_sheaf() {
        let f = Presheaf::constant_sheaf(FiniteSpace::pseudocircle(), &z());
        assert!(f.is_sheaf().unwrap());
        assert!(f.is_isomorphic_to_sheafification().unwrap());
        let s = f.stalk_of("c").unwrap();
        assert_eq!(s.value, z());
        assert_eq!(s.germs.len(), 2);
    }

    #[test]
    fn sheafification_of_constant_presheaf() {
        let x = FiniteSpace::discrete(&["a", "b"]).unwrap();
        let f = Presheaf::<GroupMap>::constant(x, z());
        let g = f.sheafify().unwrap();
        assert_eq!(g.global_sections().canonical(), FgAbGroup::free(2));
        assert!(g.is_sheaf().unwrap());
        assert!(g.is_isomorphic_to_sheafification().unwrap());
        assert!(!f.is_isomorphic_to_sheafification().unwrap());
    }

    #[test]
    fn sierpinski_stalks() {
        let f = Presheaf::<GroupMap>::constant(FiniteSpace::sierpinski(), z());
        assert_eq!(f.stalk_of("b").unwrap().value, z());
        assert_eq!(f.stalk_of("a").unwrap().germs.len(), 2);
    }
}
