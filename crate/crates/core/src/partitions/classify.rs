use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmod::Submodule;

use super::flags::FlagData;

/// The classification schemes: intersection dimension against the
/// maximal flag piece or the lower one, the quadratic-span dimension,
/// and the Z/p^2 intersection types with or without the torsion
/// refinement mu.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// dim_F_p (W ∩ D_g); requires e = 1 and D_g.
    Ordinary,
    /// dim_F_p (W ∩ D_{g-1}); requires e = 1 and D_{g-1}.
    NonOrdinary,
    /// dim over the quadratic extension of the omega-closure of W.
    OmegaSpan,
    /// abstract type of W ∩ D_g over Z/p^2, encoded as (j, k).
    PairType,
    /// abstract type of W ∩ D_{g-1} plus mu = dim(pW ∩ D_{g-1}).
    PairTypeMu,
}

/// Classification result; exactly one shape per scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PartitionLabel {
    Dim(usize),
    OmegaDim(usize),
    Pair(usize, usize),
    PairMu(usize, usize, usize),
}

impl std::fmt::Display for PartitionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PartitionLabel::Dim(j) => write!(f, "j={j}"),
            PartitionLabel::OmegaDim(i) => write!(f, "omega-dim={i}"),
            PartitionLabel::Pair(j, k) => write!(f, "(j,k)=({j},{k})"),
            PartitionLabel::PairMu(j, k, mu) => write!(f, "(j,k,mu)=({j},{k},{mu})"),
        }
    }
}

/// Computes the label of one enumerated submodule under a scheme.
pub fn classify(w: &Submodule, flags: &FlagData, scheme: Scheme) -> Result<PartitionLabel> {
    let e = flags.ctx().e();
    match scheme {
        Scheme::Ordinary => {
            if e != 1 {
                return Err(Error::domain("ordinary scheme needs the F_p model"));
            }
            let d = flags
                .d_g
                .as_ref()
                .ok_or_else(|| Error::domain("flag lacks D_g"))?;
            Ok(PartitionLabel::Dim(w.intersect(d).module_type().a))
        }
        Scheme::NonOrdinary => {
            if e != 1 {
                return Err(Error::domain("non-ordinary scheme needs the F_p model"));
            }
            let d = flags
                .d_g1
                .as_ref()
                .ok_or_else(|| Error::domain("flag lacks D_{g-1}"))?;
            Ok(PartitionLabel::Dim(w.intersect(d).module_type().a))
        }
        Scheme::OmegaSpan => {
            let f = flags
                .fp2
                .as_ref()
                .ok_or_else(|| Error::domain("flag lacks the quadratic structure"))?;
            Ok(PartitionLabel::OmegaDim(f.omega_span_dim(w)))
        }
        Scheme::PairType => {
            if e != 2 {
                return Err(Error::domain("pair-type scheme needs the Z/p^2 model"));
            }
            let d = flags
                .d_g
                .as_ref()
                .ok_or_else(|| Error::domain("flag lacks D_g"))?;
            let t = w.intersect(d).module_type();
            Ok(PartitionLabel::Pair(t.b, t.a + t.b))
        }
        Scheme::PairTypeMu => {
            if e != 2 {
                return Err(Error::domain("pair-type scheme needs the Z/p^2 model"));
            }
            let d = flags
                .d_g1
                .as_ref()
                .ok_or_else(|| Error::domain("flag lacks D_{g-1}"))?;
            let t = w.intersect(d).module_type();
            let mu_part = w.mul_p().intersect(d);
            debug_assert_eq!(mu_part.module_type().b, 0);
            Ok(PartitionLabel::PairMu(t.b, t.a + t.b, mu_part.module_type().a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::flags::{ordinary_fp, ordinary_zp2};

    #[test]
    fn self_intersection_is_full() {
        let flags = ordinary_fp(3, 2).unwrap();
        let d = flags.d_g.clone().unwrap();
        let label = classify(&d, &flags, Scheme::Ordinary).unwrap();
        assert_eq!(label, PartitionLabel::Dim(3));
    }

    #[test]
    fn scheme_ring_mismatch_is_an_error() {
        let flags = ordinary_zp2(3, 2).unwrap();
        let d = flags.d_g.clone().unwrap();
        assert!(classify(&d, &flags, Scheme::Ordinary).is_err());
        let label = classify(&d, &flags, Scheme::PairType).unwrap();
        assert_eq!(label, PartitionLabel::Pair(3, 3));
    }
}
