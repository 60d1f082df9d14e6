//! Arithmetic in ℤₙ: units, the affine group `x ↦ ax + b`, and the CRT
//! coordinate split of a composite modulus.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmony::HarmonicSystem;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended Euclid: `(g, x, y)` with `a·x + b·y = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a / b) * y)
    }
}

/// Multiplicative inverse of `a` modulo `n`, if it exists.
pub fn mod_inverse(a: u32, n: u32) -> Option<u32> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(i64::from(a % n), i64::from(n));
    (g == 1).then(|| x.rem_euclid(i64::from(n)) as u32)
}

/// Reduce a signed integer into `[0, n)`.
pub fn reduce(x: i64, n: u32) -> u32 {
    x.rem_euclid(i64::from(n)) as u32
}

/// The units of ℤₙ in ascending order. `units(1)` is empty.
pub fn units(n: u32) -> Vec<u32> {
    (1..n).filter(|&a| gcd(a.into(), n.into()) == 1).collect()
}

/// A residue of ℤₙ together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PitchClass {
    value: u32,
    modulus: u32,
}

impl PitchClass {
    pub fn new(value: u32, modulus: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ModulusTooSmall { n: 0, min: 1 });
        }
        if value >= modulus {
            return Err(Error::ResidueOutOfRange { value, n: modulus });
        }
        Ok(Self { value, modulus })
    }

    /// Any integer, reduced into range.
    pub fn wrapping(value: i64, modulus: u32) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self {
            value: reduce(value, modulus),
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    fn check(self, other: Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.shift(i64::from(other.value)))
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.shift(-i64::from(other.value)))
    }

    /// Transpose by an integer number of steps.
    pub fn shift(self, steps: i64) -> Self {
        Self::wrapping(i64::from(self.value) + steps, self.modulus)
    }
}

impl fmt::Display for PitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `f(x) = a·x + b (mod n)` with `a` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineMap {
    a: u32,
    b: u32,
    n: u32,
}

impl AffineMap {
    pub fn new(a: u32, b: u32, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ModulusTooSmall { n, min: 1 });
        }
        if a >= n && n > 1 {
            return Err(Error::ResidueOutOfRange { value: a, n });
        }
        if b >= n {
            return Err(Error::ResidueOutOfRange { value: b, n });
        }
        if gcd(a.into(), n.into()) != 1 {
            return Err(Error::NotAUnit { a, n });
        }
        Ok(Self { a, b, n })
    }

    pub fn identity(n: u32) -> Self {
        Self { a: 1 % n, b: 0, n }
    }

    /// Every element of Aff(ℤₙ), ordered by `(a, b)`.
    pub fn all(n: u32) -> impl Iterator<Item = AffineMap> {
        units(n)
            .into_iter()
            .flat_map(move |a| (0..n).map(move |b| AffineMap { a, b, n }))
    }

    pub fn multiplier(self) -> u32 {
        self.a
    }

    pub fn offset(self) -> u32 {
        self.b
    }

    pub fn modulus(self) -> u32 {
        self.n
    }

    /// Apply to a raw residue (no modulus check).
    pub fn image(self, x: u32) -> u32 {
        ((u64::from(self.a) * u64::from(x) + u64::from(self.b)) % u64::from(self.n)) as u32
    }

    pub fn apply(self, x: PitchClass) -> Result<PitchClass> {
        if x.modulus != self.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: x.modulus,
            });
        }
        Ok(PitchClass {
            value: self.image(x.value),
            modulus: self.n,
        })
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(self, other: AffineMap) -> Result<AffineMap> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = u64::from(self.n);
        let a = u64::from(self.a) * u64::from(other.a) % n;
        let b = (u64::from(self.a) * u64::from(other.b) + u64::from(self.b)) % n;
        Ok(AffineMap {
            a: a as u32,
            b: b as u32,
            n: self.n,
        })
    }

    pub fn invert(self) -> AffineMap {
        let inv = mod_inverse(self.a, self.n).expect("multiplier is a unit");
        let b = reduce(-(i64::from(inv) * i64::from(self.b)), self.n);
        AffineMap {
            a: inv,
            b,
            n: self.n,
        }
    }

    pub fn is_identity(self) -> bool {
        self.a == 1 % self.n && self.b == 0
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {}x + {} (mod {})", self.a, self.b, self.n)
    }
}

/// A split `ℤₙ ≅ ℤ_{n₁} × … × ℤ_{n_k}` with its primitive tones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtBasis {
    n: u32,
    factors: Vec<u32>,
    basis_tones: Vec<u32>,
}

impl CrtBasis {
    /// Solve for the tones `e_i ≡ 1 (mod n_i)`, `e_i ≡ 0 (mod n_j)` for `j ≠ i`.
    pub fn decompose(n: u32, factors: &[u32]) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidFactors {
            factors: factors.to_vec(),
            reason: reason.to_owned(),
        };
        if factors.len() < 2 {
            return Err(invalid("need at least two factors"));
        }
        if factors.iter().any(|&f| f < 2) {
            return Err(invalid("every factor must be at least 2"));
        }
        let product = factors
            .iter()
            .try_fold(1u64, |acc, &f| acc.checked_mul(u64::from(f)));
        if product != Some(u64::from(n)) {
            return Err(invalid(&format!("product does not equal {n}")));
        }
        for (i, &x) in factors.iter().enumerate() {
            for &y in &factors[i + 1..] {
                if gcd(x.into(), y.into()) != 1 {
                    return Err(invalid(&format!("{x} and {y} are not coprime")));
                }
            }
        }
        let basis_tones = factors
            .iter()
            .map(|&ni| {
                let cofactor = n / ni;
                let inv = mod_inverse(cofactor % ni, ni).expect("coprime factors");
                ((u64::from(cofactor) * u64::from(inv)) % u64::from(n)) as u32
            })
            .collect();
        Ok(Self {
            n,
            factors: factors.to_vec(),
            basis_tones,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    /// Primitive tones, one per factor, in factor order.
    pub fn basis_tones(&self) -> &[u32] {
        &self.basis_tones
    }

    /// `Φ(x) = (x mod n₁, …, x mod n_k)`.
    pub fn coordinates(&self, x: PitchClass) -> Result<Vec<u32>> {
        if x.modulus() != self.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: x.modulus(),
            });
        }
        Ok(self.factors.iter().map(|&f| x.value() % f).collect())
    }

    /// `Φ⁻¹`: recombine coordinates through the primitive tones.
    pub fn recombine(&self, coords: &[u32]) -> Result<PitchClass> {
        if coords.len() != self.factors.len() {
            return Err(Error::InvalidFactors {
                factors: self.factors.clone(),
                reason: format!("expected {} coordinates, got {}", self.factors.len(), coords.len()),
            });
        }
        let n = u64::from(self.n);
        let value = coords
            .iter()
            .zip(&self.factors)
            .zip(&self.basis_tones)
            .fold(0u64, |acc, ((&c, &f), &e)| {
                (acc + u64::from(c % f) * u64::from(e)) % n
            });
        PitchClass::new(value as u32, self.n)
    }

    /// The anchor system built from the two unit coordinates: `t` is the tone
    /// at `(0,1)`, `s` the tone at `(1,0)`. Its generator is always 1.
    pub fn canonical_system(&self) -> Result<HarmonicSystem> {
        match self.basis_tones[..] {
            [s, t] => HarmonicSystem::new(self.n, t, s),
            _ => Err(Error::NotTwoFactors(self.factors.len())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pc(v: u32, n: u32) -> PitchClass {
        PitchClass::new(v, n).unwrap()
    }

    fn map(a: u32, b: u32, n: u32) -> AffineMap {
        AffineMap::new(a, b, n).unwrap()
    }

    #[test]
    fn units_of_small_moduli() {
        assert_eq!(units(10), vec![1, 3, 7, 9]);
        assert_eq!(units(12), vec![1, 5, 7, 11]);
        assert_eq!(units(7), vec![1, 2, 3, 4, 5, 6]);
        assert!(units(1).is_empty());
    }

    #[test]
    fn affine_apply_examples() {
        assert_eq!(map(5, 1, 12).apply(pc(4, 12)).unwrap().value(), 9);
        assert_eq!(map(1, 0, 12).apply(pc(7, 12)).unwrap().value(), 7);
        assert_eq!(map(11, 0, 12).apply(pc(3, 12)).unwrap().value(), 9);
        assert_eq!(
            map(5, 1, 12).apply(pc(3, 10)),
            Err(Error::ModulusMismatch { left: 12, right: 10 })
        );
    }

    #[test]
    fn affine_compose_examples() {
        assert_eq!(map(5, 1, 12).compose(map(11, 0, 12)).unwrap(), map(7, 1, 12));
        assert_eq!(map(11, 0, 12).compose(map(5, 0, 12)).unwrap(), map(7, 0, 12));
        let g = map(7, 3, 12);
        assert_eq!(AffineMap::identity(12).compose(g).unwrap(), g);
        assert!(map(1, 0, 12).compose(map(1, 0, 10)).is_err());
    }

    #[test]
    fn affine_invert_examples() {
        assert_eq!(map(5, 1, 12).invert(), map(5, 7, 12));
        assert_eq!(map(1, 3, 12).invert(), map(1, 9, 12));
        assert_eq!(map(3, 0, 10).invert(), map(7, 0, 10));
    }

    #[test]
    fn affine_rejects_non_units() {
        assert_eq!(AffineMap::new(4, 0, 12), Err(Error::NotAUnit { a: 4, n: 12 }));
        assert!(AffineMap::new(1, 12, 12).is_err());
        assert_eq!(AffineMap::all(12).count(), 48);
        assert_eq!(AffineMap::all(10).count(), 40);
    }

    /// Brute-force scan for the residue with the given coordinates.
    fn scan_for(n: u32, factors: &[u32], target: &[u32]) -> u32 {
        (0..n)
            .find(|x| factors.iter().zip(target).all(|(&f, &c)| x % f == c))
            .unwrap()
    }

    #[test]
    fn crt_basis_tones() {
        assert_eq!(CrtBasis::decompose(12, &[3, 4]).unwrap().basis_tones(), &[4, 9]);
        assert_eq!(CrtBasis::decompose(10, &[2, 5]).unwrap().basis_tones(), &[5, 6]);

        let oracle = [scan_for(15, &[3, 5], &[1, 0]), scan_for(15, &[3, 5], &[0, 1])];
        assert_eq!(oracle, [10, 6]);
        assert_eq!(CrtBasis::decompose(15, &[3, 5]).unwrap().basis_tones(), &oracle);

        let three = CrtBasis::decompose(30, &[2, 3, 5]).unwrap();
        for (i, &e) in three.basis_tones().iter().enumerate() {
            let mut unit = vec![0; 3];
            unit[i] = 1;
            assert_eq!(e, scan_for(30, &[2, 3, 5], &unit));
        }
    }

    #[test]
    fn crt_rejects_bad_factors() {
        assert!(CrtBasis::decompose(12, &[2, 6]).is_err());
        assert!(CrtBasis::decompose(12, &[3, 5]).is_err());
        assert!(CrtBasis::decompose(7, &[7]).is_err());
        assert!(CrtBasis::decompose(12, &[1, 12]).is_err());
    }

    #[test]
    fn crt_coordinates() {
        let b12 = CrtBasis::decompose(12, &[3, 4]).unwrap();
        assert_eq!(b12.coordinates(pc(1, 12)).unwrap(), vec![1, 1]);
        assert_eq!(b12.coordinates(pc(0, 12)).unwrap(), vec![0, 0]);
        let b10 = CrtBasis::decompose(10, &[2, 5]).unwrap();
        assert_eq!(b10.coordinates(pc(3, 10)).unwrap(), vec![1, 3]);
        assert_eq!(b10.recombine(&[1, 3]).unwrap().value(), 3);
    }

    #[test]
    fn canonical_anchor_systems() {
        let sys = |n, f: &[u32]| {
            let s = CrtBasis::decompose(n, f).unwrap().canonical_system().unwrap();
            (s.t(), s.s(), s.q())
        };
        assert_eq!(sys(12, &[3, 4]), (9, 4, 1));
        assert_eq!(sys(10, &[2, 5]), (6, 5, 1));
        assert_eq!(sys(15, &[3, 5]), (6, 10, 1));
        assert_eq!(
            CrtBasis::decompose(30, &[2, 3, 5]).unwrap().canonical_system(),
            Err(Error::NotTwoFactors(3))
        );
    }

    fn coprime_split() -> impl Strategy<Value = (u32, Vec<u32>)> {
        prop_oneof![
            Just((6, vec![2, 3])),
            Just((10, vec![2, 5])),
            Just((12, vec![3, 4])),
            Just((12, vec![4, 3])),
            Just((15, vec![3, 5])),
            Just((20, vec![4, 5])),
            Just((30, vec![2, 3, 5])),
            Just((36, vec![4, 9])),
        ]
    }

    proptest! {
        #[test]
        fn crt_is_additive_homomorphism((n, factors) in coprime_split(), x in 0u32..1000, y in 0u32..1000) {
            let basis = CrtBasis::decompose(n, &factors).unwrap();
            let (x, y) = (PitchClass::wrapping(x.into(), n), PitchClass::wrapping(y.into(), n));
            let sum = basis.coordinates(x.checked_add(y).unwrap()).unwrap();
            let cx = basis.coordinates(x).unwrap();
            let cy = basis.coordinates(y).unwrap();
            let expected: Vec<u32> = factors.iter().enumerate().map(|(i, f)| (cx[i] + cy[i]) % f).collect();
            prop_assert_eq!(sum, expected);
        }

        #[test]
        fn crt_is_bijective((n, factors) in coprime_split()) {
            let basis = CrtBasis::decompose(n, &factors).unwrap();
            let mut seen = std::collections::HashSet::new();
            for x in 0..n {
                let c = basis.coordinates(pc(x, n)).unwrap();
                prop_assert_eq!(basis.recombine(&c).unwrap().value(), x);
                prop_assert!(seen.insert(c));
            }
        }

        #[test]
        fn compose_with_inverse_is_identity(n in 2u32..40, a in 0u32..40, b in 0u32..40) {
            let a = a % n;
            prop_assume!(gcd(a.into(), n.into()) == 1);
            let f = map(a, b % n, n);
            prop_assert!(f.compose(f.invert()).unwrap().is_identity());
            prop_assert!(f.invert().compose(f).unwrap().is_identity());
        }

        #[test]
        fn differences_scale_by_multiplier(n in 2u32..40, a in 0u32..40, b in 0u32..40, x in 0u32..40, y in 0u32..40) {
            let a = a % n;
            prop_assume!(gcd(a.into(), n.into()) == 1);
            let f = map(a, b % n, n);
            let (x, y) = (x % n, y % n);
            let lhs = reduce(i64::from(f.image(y)) - i64::from(f.image(x)), n);
            let rhs = reduce(i64::from(a) * (i64::from(y) - i64::from(x)), n);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn canonical_generator_is_one((n, factors) in coprime_split()) {
            prop_assume!(factors.len() == 2);
            let sys = CrtBasis::decompose(n, &factors).unwrap().canonical_system().unwrap();
            prop_assert_eq!((sys.t() + sys.s()) % n, 1);
        }
    }
}
