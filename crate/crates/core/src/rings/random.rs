//! Seeded random rings: products of builder factors in a random basis.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, PrimeField};
use crate::linalg::rank;
use crate::steenrod::Prime;

use super::{build_cp, build_hp, build_product, build_sphere, build_truncated_poly, GradedAlgebra, Matrix};

/// Total rank (sum of Betti numbers) allowed for generated rings.
pub const MAX_TOTAL_RANK: usize = 12;

fn factor_menu(p: Prime) -> Vec<GradedAlgebra<PrimeField>> {
    let f = PrimeField(p);
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push(build_sphere(n, f).unwrap());
    }
    for m in 1..=6 {
        out.push(build_cp(m, f).unwrap());
    }
    for m in 1..=3 {
        out.push(build_hp(m, f).unwrap());
    }
    for k in 1..=12 {
        for q in 2..=6 {
            if let Ok(a) = build_truncated_poly(k, q, f) {
                out.push(a);
            }
        }
    }
    out
}

fn total_rank<F: Field>(a: &GradedAlgebra<F>) -> usize {
    a.dims().iter().sum()
}

fn random_invertible(f: &PrimeField, d: usize, rng: &mut ChaCha8Rng) -> Matrix<u32> {
    let p = f.0.get();
    loop {
        let m: Matrix<u32> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(0..p)).collect()).collect();
        if rank(f, &m, d) == d {
            return m;
        }
    }
}

/// A random ring over `Z_p` with total rank at most [`MAX_TOTAL_RANK`]:
/// one or two factors from the builder menu, then a random invertible
/// change of basis in every degree.
pub fn random_ring(p: Prime, rng: &mut ChaCha8Rng) -> GradedAlgebra<PrimeField> {
    let f = PrimeField(p);
    let menu = factor_menu(p);
    let base = loop {
        let a = menu.choose(rng).unwrap();
        if rng.gen_bool(0.5) {
            break a.clone();
        }
        let b = menu.choose(rng).unwrap();
        if total_rank(a) * total_rank(b) <= MAX_TOTAL_RANK {
            break build_product(a, b).expect("same field");
        }
    };
    // degree 0 keeps the unit
    let mut change: Vec<Matrix<u32>> = base.dims().iter().map(|&d| random_invertible(&f, d, rng)).collect();
    change[0] = vec![vec![1]];
    let mut out = base.change_basis(&change).expect("invertible change of basis");
    out.set_name(format!("random[{}]", base.name()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::validate;
    use rand::SeedableRng;

    #[test]
    fn random_rings_validate_and_repeat() {
        for p in [2, 3, 5] {
            let p = Prime::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let mut again = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..20 {
                let a = random_ring(p, &mut rng);
                assert!(total_rank(&a) <= MAX_TOTAL_RANK);
                assert!(validate(&a).passed(), "{}", a.name());
                assert_eq!(a, random_ring(p, &mut again));
            }
        }
    }
}
