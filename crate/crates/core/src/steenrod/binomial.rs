use super::Prime;

/// `binom(x, y) mod p` as the product of base-`p` digit binomials.
///
/// Vanishes as soon as some digit of `y` exceeds the matching digit of `x`.
pub fn binom_mod_p(mut x: u64, mut y: u64, p: Prime) -> u32 {
    let pp = p.get() as u64;
    let mut acc = 1 % p.get();
    while y > 0 {
        let (xi, yi) = (x % pp, y % pp);
        if yi > xi {
            return 0;
        }
        acc = p.mul(acc, small_binom(xi as u32, yi as u32, p));
        if acc == 0 {
            return 0;
        }
        x /= pp;
        y /= pp;
    }
    acc
}

/// `binom(x, y) mod p` for `y <= x < p`; denominators are units mod `p`.
fn small_binom(x: u32, y: u32, p: Prime) -> u32 {
    let y = y.min(x - y);
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 0..y {
        num = p.mul(num, x - i);
        den = p.mul(den, i + 1);
    }
    p.mul(num, p.inv(den).expect("digit factorials are units"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exact_binom(x: u64, y: u64) -> u128 {
        if y > x {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..y.min(x - y) {
            acc = acc * (x - i) as u128 / (i + 1) as u128;
        }
        acc
    }

    #[test]
    fn documented_values() {
        assert_eq!(binom_mod_p(5, 2, Prime::THREE), 1);
        assert_eq!(binom_mod_p(17, 0, Prime::FIVE), 1);
        assert_eq!(binom_mod_p(0, 0, Prime::TWO), 1);
        assert_eq!(binom_mod_p(1, 2, Prime::TWO), 0);
        // binom(7, 2) = 21 = 1 mod 5
        assert_eq!(binom_mod_p(7, 2, Prime::FIVE), 1);
    }

    proptest! {
        #[test]
        fn agrees_with_exact_binomials(x in 0u64..60, y in 0u64..60, pi in 0usize..4) {
            let p = [Prime::TWO, Prime::THREE, Prime::FIVE, Prime::new(7).unwrap()][pi];
            let expected = (exact_binom(x, y) % p.get() as u128) as u32;
            prop_assert_eq!(binom_mod_p(x, y, p), expected);
        }
    }
}
