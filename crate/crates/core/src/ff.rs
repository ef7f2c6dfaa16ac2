//! Exact arithmetic in prime-power finite fields GF(p^m).
//!
//! Fields are constructed from their order `q = p^m` with a deterministic
//! modulus: the lexicographically smallest monic irreducible polynomial of
//! degree `m` over GF(p), comparing coefficients low-order first. Elements
//! are coefficient vectors with a canonical integer index (base-`p` digits,
//! low-order first) so they can double as row/column labels of incidence
//! matrices.

use thiserror::Error;

/// Errors from field construction and arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),
    #[error("operands belong to different fields: GF({0}) vs GF({1})")]
    FieldMismatch(u64, u64),
}

/// Decomposes `n` as `p^m` with `p` prime, if possible.
///
/// Deterministic trial division; `None` signals "not a prime power".
pub fn is_prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = smallest_prime_factor(n);
    let mut rest = n;
    let mut m = 0u32;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    if rest == 1 {
        Some((p, m))
    } else {
        None
    }
}

/// True iff `n` is prime (deterministic trial division).
pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

fn smallest_prime_factor(n: u64) -> u64 {
    debug_assert!(n >= 2);
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// A finite field GF(p^m) with a fixed irreducible modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus of degree `m`, coefficients low-order first (length m+1).
    /// For m = 1 this is the polynomial `x`, and elements are residues mod p.
    modulus: Vec<u64>,
}

/// An element of a [`FiniteField`], tagged with its owning field's order.
///
/// Ordering and equality follow the canonical integer index
/// `sum coeffs[i] * p^i`, so sorting elements sorts their indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    q: u64,
    /// Length m, entries reduced mod p, low-order first.
    coeffs: Vec<u64>,
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Index order: compare digits high-order first.
        self.q
            .cmp(&other.q)
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl FieldElement {
    /// Order of the owning field.
    pub fn field_order(&self) -> u64 {
        self.q
    }

    /// Coefficients, low-order first.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl FiniteField {
    /// Builds GF(q) for a prime power `q`.
    ///
    /// The modulus is the lexicographically smallest monic irreducible
    /// polynomial of degree `m` over GF(p), coefficients compared low-order
    /// first, so two calls with the same `q` produce identical fields.
    pub fn new(q: u64) -> Result<Self, FfError> {
        let (p, m) = is_prime_power(q).ok_or(FfError::NotPrimePower(q))?;
        let modulus = if m == 1 {
            vec![0, 1] // the polynomial x: elements are residues mod p
        } else {
            find_irreducible(p, m)
        };
        Ok(FiniteField { p, m, q, modulus })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, low-order first (length m+1, monic).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.element_from_index(0).unwrap()
    }

    pub fn one(&self) -> FieldElement {
        self.element_from_index(1).unwrap()
    }

    /// Element whose base-p digit expansion (low-order first) is `idx`.
    pub fn element_from_index(&self, idx: u64) -> Option<FieldElement> {
        if idx >= self.q {
            return None;
        }
        let mut coeffs = vec![0u64; self.m as usize];
        let mut rest = idx;
        for c in coeffs.iter_mut() {
            *c = rest % self.p;
            rest /= self.p;
        }
        Some(FieldElement { q: self.q, coeffs })
    }

    /// Canonical integer index of `e` (base-p digits, low-order first).
    pub fn index_of(&self, e: &FieldElement) -> u64 {
        let mut idx = 0u64;
        for &c in e.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    /// All q elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.element_from_index(i).unwrap())
    }

    fn check_owned(&self, e: &FieldElement) -> Result<(), FfError> {
        if e.q != self.q {
            return Err(FfError::FieldMismatch(self.q, e.q));
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FfError> {
        self.check_owned(a)?;
        self.check_owned(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        Ok(FieldElement { q: self.q, coeffs })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement, FfError> {
        self.check_owned(a)?;
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| if x == 0 { 0 } else { self.p - x })
            .collect();
        Ok(FieldElement { q: self.q, coeffs })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FfError> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FfError> {
        self.check_owned(a)?;
        self.check_owned(b)?;
        let m = self.m as usize;
        // Schoolbook product, degree <= 2m-2, then reduce mod the modulus.
        let mut prod = vec![0u128; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] += (x as u128) * (y as u128);
            }
        }
        let mut prod: Vec<u64> = prod.iter().map(|&v| (v % self.p as u128) as u64).collect();
        poly_rem(&mut prod, &self.modulus, self.p);
        prod.resize(m, 0);
        Ok(FieldElement {
            q: self.q,
            coeffs: prod,
        })
    }

    /// Multiplicative inverse, computed as a^(q-2).
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FfError> {
        self.check_owned(a)?;
        if a.coeffs.iter().all(|&c| c == 0) {
            return Err(FfError::DivisionByZero(self.q));
        }
        self.pow(a, self.q - 2)
    }

    /// `a^e` by square-and-multiply; `a^0 = 1` for every `a`.
    pub fn pow(&self, a: &FieldElement, e: u64) -> Result<FieldElement, FfError> {
        self.check_owned(a)?;
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// The set `{ a^e : a in GF(q)* }`, deduplicated and sorted by index,
    /// with zero adjoined iff `include_zero`.
    pub fn power_residues(&self, e: u32, include_zero: bool) -> Vec<FieldElement> {
        let mut set = std::collections::BTreeSet::new();
        if include_zero {
            set.insert(self.zero());
        }
        for a in self.elements().skip(1) {
            set.insert(self.pow(&a, e as u64).unwrap());
        }
        set.into_iter().collect()
    }
}

/// Remainder of `f` (low-order first, any length) modulo monic `g`, in place.
fn poly_rem(f: &mut Vec<u64>, g: &[u64], p: u64) {
    let gd = g.len() - 1;
    debug_assert_eq!(g[gd], 1, "divisor must be monic");
    while f.len() > gd {
        let lead = *f.last().unwrap();
        let shift = f.len() - 1 - gd;
        if lead != 0 {
            for i in 0..gd {
                let sub = (lead as u128 * g[i] as u128) % p as u128;
                let cur = f[shift + i] as u128;
                f[shift + i] = ((cur + p as u128 - sub) % p as u128) as u64;
            }
        }
        f.pop();
    }
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

/// True iff monic `f` (degree >= 1, low-order first) has no monic divisor of
/// degree in [1, deg(f)/2]. Trial division; degree-1 divisors double as the
/// root check.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    debug_assert!(deg >= 1 && f[deg] == 1);
    for d in 1..=(deg / 2) {
        // All monic divisors of degree d: p^d candidates.
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u64; d + 1];
            let mut rest = idx;
            for c in g.iter_mut().take(d) {
                *c = rest % p;
                rest /= p;
            }
            g[d] = 1;
            let mut rem = f.to_vec();
            poly_rem(&mut rem, &g, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree m over GF(p),
/// coefficients compared low-order first.
fn find_irreducible(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    // Enumerate coefficient tuples (c_0, ..., c_{m-1}) in lex order with c_0
    // most significant, i.e. the classic odometer on the reversed digits.
    let total = p.checked_pow(m as u32).expect("field order fits u64");
    for j in 0..total {
        let mut f = vec![0u64; m + 1];
        let mut rest = j;
        for i in (0..m).rev() {
            f[i] = rest % p;
            rest /= p;
        }
        f[m] = 1;
        // A polynomial with zero constant term has root 0: skip early.
        if f[0] == 0 {
            continue;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of degree m over GF(p) always exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(is_prime_power(4), Some((2, 2)));
        assert_eq!(is_prime_power(2917), Some((2917, 1)));
        assert_eq!(is_prime_power(12), None);
        assert_eq!(is_prime_power(1), None);
        assert_eq!(is_prime_power(343), Some((7, 3)));
        assert_eq!(is_prime_power(65536), Some((2, 16)));
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        let f = FiniteField::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn prime_field_is_residues() {
        let f = FiniteField::new(7).unwrap();
        assert_eq!(f.degree(), 1);
        assert_eq!(f.modulus(), &[0, 1]);
        let three = f.element_from_index(3).unwrap();
        let five = f.element_from_index(5).unwrap();
        assert_eq!(f.inv(&three).unwrap(), five);
    }

    #[test]
    fn not_prime_power_rejected() {
        assert_eq!(FiniteField::new(6).unwrap_err(), FfError::NotPrimePower(6));
    }

    #[test]
    fn gf4_x_times_x_plus_1_is_1() {
        let f = FiniteField::new(4).unwrap();
        let x = f.element_from_index(2).unwrap();
        let x1 = f.element_from_index(3).unwrap();
        assert_eq!(f.mul(&x, &x1).unwrap(), f.one());
    }

    #[test]
    fn pow_zero_is_one() {
        for q in [2u64, 4, 7, 9, 27] {
            let f = FiniteField::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(&a, 0).unwrap(), f.one());
            }
        }
    }

    #[test]
    fn inv_of_zero_fails() {
        let f = FiniteField::new(9).unwrap();
        assert_eq!(f.inv(&f.zero()).unwrap_err(), FfError::DivisionByZero(9));
    }

    #[test]
    fn field_mismatch_detected() {
        let f7 = FiniteField::new(7).unwrap();
        let f9 = FiniteField::new(9).unwrap();
        let a = f7.element_from_index(2).unwrap();
        let b = f9.element_from_index(2).unwrap();
        assert!(matches!(f7.add(&a, &b), Err(FfError::FieldMismatch(7, 9))));
    }

    #[test]
    fn quadratic_residues_gf7() {
        let f = FiniteField::new(7).unwrap();
        let idx: Vec<u64> = f
            .power_residues(2, false)
            .iter()
            .map(|e| f.index_of(e))
            .collect();
        assert_eq!(idx, vec![1, 2, 4]);
    }

    #[test]
    fn quartic_residues_gf13_with_zero() {
        let f = FiniteField::new(13).unwrap();
        let idx: Vec<u64> = f
            .power_residues(4, true)
            .iter()
            .map(|e| f.index_of(e))
            .collect();
        assert_eq!(idx, vec![0, 1, 3, 9]);
    }

    #[test]
    fn quartic_residues_gf37_size() {
        let f = FiniteField::new(37).unwrap();
        assert_eq!(f.power_residues(4, false).len(), 9);
    }

    #[test]
    fn field_axioms_small_orders() {
        // Closure of the multiplication table, inverses, and the order of the
        // multiplicative group, for every prime power q <= 128.
        for q in 2..=128u64 {
            if is_prime_power(q).is_none() {
                continue;
            }
            let f = FiniteField::new(q).unwrap();
            let elems: Vec<_> = f.elements().collect();
            for a in &elems {
                for b in &elems {
                    let ab = f.mul(a, b).unwrap();
                    assert!(f.index_of(&ab) < q);
                }
                if *a != f.zero() {
                    let ai = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, &ai).unwrap(), f.one());
                    assert_eq!(f.pow(a, q - 1).unwrap(), f.one());
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_order_up_to_2048() {
        for q in [169u64, 243, 343, 625, 1024, 2048, 2047_u64] {
            if is_prime_power(q).is_none() {
                continue;
            }
            let f = FiniteField::new(q).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(&a, q - 1).unwrap(), f.one());
            }
        }
    }

    #[test]
    fn quadratic_residue_count_odd_prime_powers() {
        for q in (3..=2048u64).step_by(2) {
            match is_prime_power(q) {
                Some((p, _)) if p != 2 => {}
                _ => continue,
            }
            let f = FiniteField::new(q).unwrap();
            assert_eq!(
                f.power_residues(2, false).len() as u64,
                (q - 1) / 2,
                "q={q}"
            );
        }
    }

    #[test]
    fn make_field_deterministic() {
        for q in [8u64, 9, 16, 25, 27, 49, 64, 81, 121, 128] {
            let a = FiniteField::new(q).unwrap();
            let b = FiniteField::new(q).unwrap();
            assert_eq!(a.modulus(), b.modulus());
        }
    }

    #[test]
    fn distributivity_gf27() {
        let f = FiniteField::new(27).unwrap();
        let elems: Vec<_> = f.elements().collect();
        for a in elems.iter().step_by(3) {
            for b in elems.iter().step_by(4) {
                for c in elems.iter().step_by(5) {
                    let lhs = f.mul(a, &f.add(b, c).unwrap()).unwrap();
                    let rhs = f
                        .add(&f.mul(a, b).unwrap(), &f.mul(a, c).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
