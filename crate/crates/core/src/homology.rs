//! Homology of a [`ChainComplex`] through certified Smith normal forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cube::GeometricComplex;
use crate::euler::graded_euler;
use crate::ring::{Ring, RingTag, Zhalf, Zp};
use crate::snf::{smith_normal_form, SnfError};
use crate::tqft::{apply_tqft, ChainComplex, TqftError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("not a complex: d∘d is nonzero on degree {0}")]
    NotAComplex(i32),
    #[error(transparent)]
    Snf(#[from] SnfError),
    #[error(transparent)]
    Tqft(#[from] TqftError),
    #[error("Zp:{0} is not supported")]
    UnsupportedPrime(u64),
}

/// Homology in one degree: free rank and torsion invariant factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub ring: String,
    pub t: i64,
    pub degrees: BTreeMap<i32, DegreeHomology>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<String>,
    /// Number of Smith forms computed and certified along the way.
    #[serde(skip)]
    pub certified: usize,
}

impl HomologySummary {
    pub fn degree(&self, i: i32) -> DegreeHomology {
        self.degrees.get(&i).cloned().unwrap_or_default()
    }

    pub fn total_rank(&self) -> usize {
        self.degrees.values().map(|h| h.rank).sum()
    }

    /// Degrees with nonzero homology.
    pub fn support(&self) -> Vec<i32> {
        self.degrees.iter().filter(|(_, h)| !h.is_zero()).map(|(&i, _)| i).collect()
    }

    /// The first degree where the two summaries differ, treating missing
    /// degrees as zero. Ring and `t` are not compared.
    pub fn first_difference(&self, other: &HomologySummary) -> Option<i32> {
        let keys: std::collections::BTreeSet<i32> = self.degrees.keys().chain(other.degrees.keys()).copied().collect();
        keys.into_iter().find(|&i| self.degree(i) != other.degree(i))
    }

    pub fn same_groups(&self, other: &HomologySummary) -> bool {
        self.first_difference(other).is_none()
    }
}

/// Computes homology degree by degree. Every Smith form is certified by
/// replaying its operation log; a failure aborts the computation.
pub fn homology<R: Ring>(cc: &ChainComplex<R>) -> Result<HomologySummary, HomologyError> {
    if let Some(&i) = cc.d_squared_failures().first() {
        return Err(HomologyError::NotAComplex(i));
    }
    let forms = cc.differentials.iter().map(smith_normal_form).collect::<Result<Vec<_>, _>>()?;
    let mut degrees = BTreeMap::new();
    for (k, i) in cc.degrees().enumerate() {
        let out_rank = forms.get(k).map_or(0, |f| f.rank());
        let incoming = k.checked_sub(1).map(|p| &forms[p]);
        let in_rank = incoming.map_or(0, |f| f.rank());
        let torsion = incoming.map_or_else(Vec::new, |f| f.torsion().iter().filter_map(|d| d.torsion_label()).collect());
        degrees.insert(i, DegreeHomology { rank: cc.ranks[k] - out_rank - in_rank, torsion });
    }
    Ok(HomologySummary { ring: R::name(), t: cc.t, degrees, euler: None, certified: forms.len() })
}

fn summary<R: Ring>(gc: &GeometricComplex, t: i64) -> Result<HomologySummary, HomologyError> {
    let cc = apply_tqft::<R>(gc, t)?;
    let mut h = homology(&cc)?;
    h.euler = graded_euler(&cc).ok().map(|p| p.to_string());
    Ok(h)
}

macro_rules! over_prime {
    ($p:expr, $gc:expr, $t:expr, $($q:literal)*) => {
        match $p {
            $($q => summary::<Zp<$q>>($gc, $t),)*
            other => Err(HomologyError::UnsupportedPrime(other)),
        }
    };
}

/// Applies `A_t` over the ring named by `tag` and computes homology, with
/// the graded Euler characteristic attached when `t = 0`.
pub fn homology_over(tag: RingTag, gc: &GeometricComplex, t: i64) -> Result<HomologySummary, HomologyError> {
    match tag {
        RingTag::Q => summary::<BigRational>(gc, t),
        RingTag::Z => summary::<BigInt>(gc, t),
        RingTag::Zhalf => summary::<Zhalf>(gc, t),
        RingTag::Zp(p) => over_prime!(p, gc, t, 2 3 5 7 11 13 17 19 23 29 31 37 41 43 47 101 1009 65521),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{CubeOptions, GeometricComplex};
    use crate::diagram::library::*;
    use crate::diagram::VTangleDiagram;
    use crate::tqft::apply_tqft;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn hom<R: Ring>(d: &VTangleDiagram, t: i64) -> HomologySummary {
        let gc = GeometricComplex::build(d, &CubeOptions::default()).unwrap();
        homology(&apply_tqft::<R>(&gc, t).unwrap()).unwrap()
    }

    fn ranks(h: &HomologySummary) -> Vec<(i32, usize)> {
        h.degrees.iter().filter(|(_, v)| v.rank > 0).map(|(&i, v)| (i, v.rank)).collect()
    }

    #[test]
    fn unknot() {
        let h = hom::<BigInt>(&VTangleDiagram::unknot(), 0);
        assert_eq!(ranks(&h), vec![(0, 2)]);
        assert_eq!(h.ring, "Z");
    }

    #[test]
    fn virtual_trefoil_lee() {
        let h = hom::<BigRational>(&virtual_trefoil(), 1);
        assert_eq!(ranks(&h), vec![(0, 2)]);
        assert_eq!(h.degrees.len(), 3);
    }

    #[test]
    fn trefoil_khovanov_over_z() {
        // right-handed trefoil: Z in degrees 0 (twice), 2, 3 and Z/2 in degree 3
        let h = hom::<BigInt>(&trefoil(), 0);
        assert_eq!(ranks(&h), vec![(0, 2), (2, 1), (3, 1)]);
        let torsion: Vec<(i32, Vec<u64>)> =
            h.degrees.iter().filter(|(_, v)| !v.torsion.is_empty()).map(|(&i, v)| (i, v.torsion.clone())).collect();
        assert_eq!(torsion, vec![(3, vec![2])]);
    }

    #[test]
    fn hopf_lee_rank() {
        let h = hom::<BigRational>(&hopf_link(), 1);
        assert_eq!(h.total_rank(), 4);
    }

    #[test]
    fn json_shape() {
        let h = hom::<BigRational>(&virtual_trefoil(), 1);
        let v = serde_json::to_value(&h).unwrap();
        assert_eq!(v["ring"], "Q");
        assert_eq!(v["degrees"]["0"]["rank"], 2);
        assert!(v.get("euler").is_none());
    }

    #[test]
    fn differences() {
        let a = hom::<BigRational>(&VTangleDiagram::unknot(), 0);
        let b = hom::<BigRational>(&kinked_unknot(), 0);
        assert!(a.same_groups(&b));
        let c = hom::<BigRational>(&unlink(2), 0);
        assert_eq!(a.first_difference(&c), Some(0));
    }

    #[test]
    fn runtime_rings() {
        let gc = GeometricComplex::build(&trefoil(), &CubeOptions::default()).unwrap();
        for p in crate::ring::SUPPORTED_PRIMES {
            let h = homology_over(RingTag::Zp(p), &gc, 0).unwrap();
            assert_eq!(h.ring, format!("Zp:{p}"));
            let expected = if p == 2 { 6 } else { 4 };
            assert_eq!(h.total_rank(), expected, "p = {p}");
        }
        let h = homology_over(RingTag::Zhalf, &gc, 1).unwrap();
        assert_eq!(h.total_rank(), 2);
        assert!(h.euler.is_none());
        let h = homology_over(RingTag::Z, &gc, 0).unwrap();
        assert_eq!(h.euler.as_deref(), Some("q + q^3 + q^5 - q^9"));
        assert!(matches!(homology_over(RingTag::Zp(53), &gc, 0), Err(HomologyError::UnsupportedPrime(53))));
    }

    #[test]
    fn rejects_non_complex() {
        let mut opts = CubeOptions::default();
        opts.corrupt_sign = Some(("00".parse().unwrap(), 0));
        let gc = GeometricComplex::build(&hopf_link(), &opts).unwrap();
        let cc = apply_tqft::<BigInt>(&gc, 0).unwrap();
        assert!(matches!(homology(&cc), Err(HomologyError::NotAComplex(_))));
    }
}
