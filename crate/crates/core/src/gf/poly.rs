//! Dense polynomials over the prime field F_p, little-endian coefficient
//! vectors with no trailing zeros. Only what the irreducibility test needs.

pub(crate) type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p64 = u64::from(p);
    let mut b = u64::from(base % p);
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        exp >>= 1;
    }
    acc as u32
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = u64::from(inv_mod(m[dm], p));
    let p64 = u64::from(p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = u64::from(*r.last().unwrap()) * lead_inv % p64;
        for (i, &mi) in m.iter().enumerate() {
            let t = c * u64::from(mi) % p64;
            r[shift + i] = ((u64::from(r[shift + i]) + p64 - t) % p64) as u32;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = u64::from(p);
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p64;
        }
    }
    let prod: Poly = prod.into_iter().map(|c| c as u32).collect();
    rem(&prod, m, p)
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m` for k = 1..=max_k, by repeated p-th powering.
fn frobenius_powers(m: &[u32], p: u32, max_k: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(max_k);
    let mut cur = rem(&[0, 1], m, p);
    for _ in 0..max_k {
        // cur <- cur^p
        let mut acc: Poly = vec![1];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        cur = acc;
        out.push(cur.clone());
    }
    out
}

/// Ben-Or style test: a degree-n polynomial is irreducible iff it shares no
/// factor with `x^(p^k) - x` for every k <= n/2.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let n = m.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    for xk in frobenius_powers(m, p, n / 2) {
        let g = gcd(m, &sub(&xk, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        // x^2 + 1 over F_3 is irreducible, x^2 - 1 is not.
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[2, 0, 1], 3));
        // x^3 - x + 1 is irreducible over F_3.
        assert!(is_irreducible(&[1, 2, 0, 1], 3));
        // (x^2 + 1)^2 has no roots but is reducible.
        assert!(!is_irreducible(&[1, 0, 2, 0, 1], 3));
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // Number of monic irreducible quartics over F_3 is (81 - 9) / 4 = 18.
        let mut count = 0;
        for c in 0..81u32 {
            let m = vec![c % 3, (c / 3) % 3, (c / 9) % 3, (c / 27) % 3, 1];
            if is_irreducible(&m, 3) {
                count += 1;
            }
        }
        assert_eq!(count, 18);
    }
}
