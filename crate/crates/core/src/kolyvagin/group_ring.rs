use crate::report::{CheckRecord, Provenance, VerificationReport};

/// An element of the integral group ring Z[G] for a cyclic group G of
/// order n; coefficient i sits on g^i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElem {
    coeffs: Vec<i64>,
}

impl GroupRingElem {
    pub fn zero(order: usize) -> Self {
        GroupRingElem {
            coeffs: vec![0; order],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// g^i.
    pub fn generator_power(order: usize, i: usize) -> Self {
        let mut e = GroupRingElem::zero(order);
        e.coeffs[i % order] = 1;
        e
    }

    pub fn identity(order: usize) -> Self {
        GroupRingElem::generator_power(order, 0)
    }

    /// The derivative element sum_{i=0}^{n-1} i g^i.
    pub fn derivative(order: usize) -> Self {
        GroupRingElem {
            coeffs: (0..order).map(|i| i as i64).collect(),
        }
    }

    /// The norm element sum g^i.
    pub fn norm(order: usize) -> Self {
        GroupRingElem {
            coeffs: vec![1; order],
        }
    }

    pub fn add(&self, rhs: &GroupRingElem) -> GroupRingElem {
        assert_eq!(self.order(), rhs.order());
        GroupRingElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &GroupRingElem) -> GroupRingElem {
        assert_eq!(self.order(), rhs.order());
        GroupRingElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: i64) -> GroupRingElem {
        GroupRingElem {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Convolution product in Z[G].
    pub fn mul(&self, rhs: &GroupRingElem) -> GroupRingElem {
        let n = self.order();
        assert_eq!(n, rhs.order());
        let mut out = GroupRingElem::zero(n);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out.coeffs[(i + j) % n] += a * b;
            }
        }
        out
    }
}

impl std::fmt::Display for GroupRingElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => c.to_string(),
                1 => format!("{c}g"),
                _ => format!("{c}g^{i}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Checks the group-ring derivative identity for a cyclic group of order
/// p_like + 1:
///   (g - 1) D = (p_like + 1) * 1 - Norm,
/// where D = sum i g^i. This is the telescoped form; the classical
/// display carries the opposite global sign, which the report records.
pub fn derivative_identity(p_like: u64) -> VerificationReport {
    let order = (p_like + 1) as usize;
    let mut report =
        VerificationReport::new("derivative-identity").with_param("p_like", p_like);

    let d = GroupRingElem::derivative(order);
    let g = GroupRingElem::generator_power(order, 1);
    let lhs = g.mul(&d).sub(&d);
    let rhs = GroupRingElem::identity(order)
        .scale(order as i64)
        .sub(&GroupRingElem::norm(order));
    report.push(CheckRecord::new(
        format!("(g - 1) D = (p+1) - Norm in Z[Z/{order}]"),
        format!("{rhs}"),
        format!("{lhs}"),
        Provenance::Paper,
        "2.9 telescoped",
    ));
    report.push(CheckRecord::info(
        "sign convention: the verified identity is the negative of the displayed form",
        "global sign -1",
        "2.9 sign",
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_expansions() {
        // p = 2: D = g + 2g^2, (g-1)D = 3 - (1 + g + g^2)
        let d = GroupRingElem::derivative(3);
        assert_eq!(d.coeffs(), &[0, 1, 2]);
        let g = GroupRingElem::generator_power(3, 1);
        let lhs = g.mul(&d).sub(&d);
        assert_eq!(lhs.coeffs(), &[2, -1, -1]);
    }

    #[test]
    fn p_equals_one() {
        // D = g; (g-1)g = 1 - g = 2*1 - (1+g)
        let rep = derivative_identity(1);
        assert!(rep.pass);
    }

    #[test]
    fn identity_holds_up_to_100() {
        for p_like in 1..=100u64 {
            assert!(derivative_identity(p_like).pass, "p_like = {p_like}");
        }
    }
}
