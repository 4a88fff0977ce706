//! Splitting structured presheaves into one presheaf per fixed neighborhood.

use std::collections::BTreeMap;

use super::{Presheaf, SheafError};
use crate::strcat::{Alignment, Carrier, Component, StructuredFamily, StructuredHom};

/// `F_p(U) = F(U)_p` with the `p`-components of the restrictions.
///
/// Every nonempty open must carry a partitionable family with the same
/// index set and tags, and every restriction must align `p` with `p`.
pub fn decompose_structured(f: &Presheaf<StructuredHom>) -> Result<Vec<Presheaf<Component>>, SheafError> {
    let x = f.space();
    let opens = x.opens();
    let top = f.global_sections();
    let tags = top.tags();
    for (u, &open) in opens.iter().enumerate().skip(1) {
        let fam = f.value(u);
        if !fam.is_partitionable() {
            return Err(SheafError::NotPartitionable { open: x.set_labels(open) });
        }
        if fam.len() != tags.len() {
            return Err(SheafError::IndexSetMismatch {
                open: x.set_labels(open),
                reason: format!("{} entries instead of {}", fam.len(), tags.len()),
            });
        }
        for (i, (found, expected)) in fam.tags().into_iter().zip(&tags).enumerate() {
            if &found != expected {
                return Err(SheafError::TagMismatch { open: x.set_labels(open), p: i + 1, expected: expected.clone(), found });
            }
        }
    }
    for (&(u, v), r) in f.restrictions() {
        if u != 0 && !r.alignment().is_identity() {
            return Err(SheafError::IndexSetMismatch {
                open: x.set_labels(opens[u]),
                reason: format!("restriction from {:?} permutes the indices", x.set_labels(opens[v])),
            });
        }
    }
    (1..=tags.len())
        .map(|p| {
            let values: Vec<Carrier> = (0..opens.len())
                .map(|u| match f.value(u).entry(p) {
                    Some(e) => e.carrier.clone(),
                    None => top.entry(p).expect("index in range").carrier.terminal_like(),
                })
                .collect();
            let given: BTreeMap<(usize, usize), Component> =
                f.restrictions().iter().filter(|((u, _), _)| *u != 0).map(|(&k, r)| (k, r.component(p).clone())).collect();
            Presheaf::new(x.clone(), values, given)
        })
        .collect()
}

/// Reassembles component presheaves on one space into a structured presheaf.
pub fn bundle(parts: &[Presheaf<Component>]) -> Result<Presheaf<StructuredHom>, SheafError> {
    let Some(first) = parts.first() else {
        return Err(SheafError::IndexSetMismatch { open: Vec::new(), reason: "no components".into() });
    };
    let x = first.space().clone();
    if parts.iter().any(|p| p.space() != &x) {
        return Err(SheafError::IndexSetMismatch { open: Vec::new(), reason: "components live on different spaces".into() });
    }
    let family = |u: usize| -> Result<StructuredFamily, SheafError> {
        StructuredFamily::from_carriers(parts.iter().map(|p| p.value(u).clone()).collect(), true)
            .map_err(|e| SheafError::Composition(e.to_string()))
    };
    let values = (0..x.nopens()).map(family).collect::<Result<Vec<_>, _>>()?;
    let mut given = BTreeMap::new();
    for &(u, v) in first.restrictions().keys() {
        if u == 0 {
            continue;
        }
        let comps = parts.iter().map(|p| p.restriction(u, v).expect("same space").clone()).collect();
        let hom = StructuredHom::new(values[v].clone(), values[u].clone(), Alignment::identity(parts.len()), comps)
            .map_err(|e| SheafError::Composition(e.to_string()))?;
        given.insert((u, v), hom);
    }
    Presheaf::new(x, values, given)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{CyclicSum, GroupMap};
    use crate::finspace::FiniteSpace;
    use crate::sheaf::ToKind;

    fn group_component(f: &Presheaf<GroupMap>) -> Presheaf<Component> {
        f.map(|g| Carrier::Group(g.clone()), |a| Component::Group(a.clone())).unwrap()
    }

    #[test]
    fn sierpinski_pair_splits() {
        let x = FiniteSpace::sierpinski();
        let z = Presheaf::<GroupMap>::constant(x.clone(), CyclicSum::free(1));
        let z2 = Presheaf::<GroupMap>::constant(x, CyclicSum::cyclic(2));
        let f = bundle(&[group_component(&z), group_component(&z2)]).unwrap();
        let parts = decompose_structured(&f).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].to_groups().unwrap(), z);
        assert_eq!(parts[1].to_groups().unwrap(), z2);
        assert!(parts.iter().all(|p| p.check_presheaf_laws().is_empty()));
    }

    #[test]
    fn single_entry_round_trip() {
        let f = Presheaf::constant_sheaf(FiniteSpace::pseudocircle(), &CyclicSum::free(1));
        let s = bundle(&[group_component(&f)]).unwrap();
        let parts = decompose_structured(&s).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].to_groups().unwrap(), f);
        assert_eq!(bundle(&parts).unwrap(), s);
    }

    #[test]
    fn non_partitionable_is_rejected() {
        let x = FiniteSpace::one_point();
        let fam = StructuredFamily::from_carriers(vec![Carrier::Group(CyclicSum::free(1))], false).unwrap();
        let f = Presheaf::<StructuredHom>::constant(x, fam);
        assert!(matches!(decompose_structured(&f), Err(SheafError::NotPartitionable { .. })));
    }
}
