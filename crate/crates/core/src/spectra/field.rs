use crate::error::{Error, Result};

/// Field orders with a built-in construction.
pub const SUPPORTED_ORDERS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

/// A finite field of small order with elements `0..q`. Prime powers
/// `p^k` encode `a₀ + a₁x + …` as the base-`p` digits of the element.
#[derive(Debug, Clone)]
pub struct FiniteField {
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self> {
        // (p, k, modulus coefficients a₀..a_{k−1} of x^k = −(a₀ + a₁x + …))
        let (p, k, modulus): (usize, usize, &[usize]) = match q {
            2 | 3 | 5 | 7 => (q, 1, &[]),
            4 => (2, 2, &[1, 1]),    // x² + x + 1
            8 => (2, 3, &[1, 1, 0]), // x³ + x + 1
            9 => (3, 2, &[1, 0]),    // x² + 1
            _ => return Err(Error::domain(format!("unsupported field order {q}; supported: {SUPPORTED_ORDERS:?}"))),
        };
        let digits = |mut a: usize| {
            let mut d = vec![0; k];
            for slot in d.iter_mut() {
                *slot = a % p;
                a /= p;
            }
            d
        };
        let encode = |d: &[usize]| d.iter().rev().fold(0, |acc, &x| acc * p + x);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum);
                // schoolbook product, then reduce the high coefficients
                let mut prod = vec![0; 2 * k - 1];
                for i in 0..k {
                    for j in 0..k {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                for deg in (k..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for (i, &m) in modulus.iter().enumerate() {
                        prod[deg - k + i] = (prod[deg - k + i] + (p - 1) * c * m) % p;
                    }
                }
                mul[a * q + b] = encode(&prod[..k]);
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).expect("additive inverse")).collect();
        Ok(Self { q, add, mul, neg })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn dot(&self, x: &[usize], y: &[usize]) -> usize {
        x.iter().zip(y).fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    /// Nonzero vectors of `GF(q)^dim` whose first nonzero coordinate is 1,
    /// one per projective point.
    pub fn projective_points(&self, dim: usize) -> Vec<Vec<usize>> {
        let total = self.q.pow(dim as u32);
        (1..total)
            .map(|mut code| {
                let mut v = vec![0; dim];
                for slot in v.iter_mut().rev() {
                    *slot = code % self.q;
                    code /= self.q;
                }
                v
            })
            .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
            .collect()
    }

    /// Scales `v` so that its first nonzero coordinate is 1.
    pub fn normalize(&self, v: &[usize]) -> Option<Vec<usize>> {
        let lead = *v.iter().find(|&&x| x != 0)?;
        let inv = (1..self.q).find(|&b| self.mul(lead, b) == 1).expect("field inverse");
        Some(v.iter().map(|&x| self.mul(x, inv)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_hold() {
        for q in SUPPORTED_ORDERS {
            let f = FiniteField::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!((0..q).filter(|&b| f.mul(a, b) == 1).count(), 1, "q={q} a={a}");
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
        assert!(FiniteField::new(6).is_err());
    }

    #[test]
    fn projective_point_counts() {
        for q in SUPPORTED_ORDERS {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.projective_points(3).len(), q * q + q + 1);
            assert_eq!(f.projective_points(4).len(), (q + 1) * (q * q + 1));
        }
    }
}
