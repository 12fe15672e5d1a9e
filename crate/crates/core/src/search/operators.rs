use rand::Rng;

use crate::error::{Error, Result};
use crate::sequence::SpinSequence;

/// One-point crossover with the cut drawn uniformly from `1..=N-1`.
pub fn combine<R: Rng + ?Sized>(p1: &SpinSequence, p2: &SpinSequence, rng: &mut R) -> Result<SpinSequence> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch(p1.len(), p2.len()));
    }
    let cut = rng.random_range(1..p1.len());
    combine_at(p1, p2, cut)
}

/// `p1[..cut]` followed by `p2[cut..]`.
pub fn combine_at(p1: &SpinSequence, p2: &SpinSequence, cut: usize) -> Result<SpinSequence> {
    p1.splice(p2, cut)
}

/// Flips each position independently with probability `p_mut`.
pub fn mutate<R: Rng + ?Sized>(seq: &mut SpinSequence, p_mut: f64, rng: &mut R) {
    for i in 0..seq.len() {
        if rng.random::<f64>() < p_mut {
            seq.flip(i);
        }
    }
}

/// Index of the lowest-energy entry among `size` uniform draws (with
/// replacement); the first drawn wins ties.
pub fn tournament<R: Rng + ?Sized>(energies: &[i64], size: usize, rng: &mut R) -> usize {
    let mut winner = rng.random_range(0..energies.len());
    for _ in 1..size {
        let c = rng.random_range(0..energies.len());
        if energies[c] < energies[winner] {
            winner = c;
        }
    }
    winner
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn seq(s: &str) -> SpinSequence {
        s.parse().unwrap()
    }

    #[test]
    fn combine_examples() {
        assert_eq!(combine_at(&seq("++++"), &seq("----"), 2).unwrap(), seq("++--"));
        let p = seq("+-++-");
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            assert_eq!(combine(&p, &p, &mut rng).unwrap(), p);
        }
        let child = combine_at(&seq("+++++"), &seq("-----"), 4).unwrap();
        assert_eq!(child, seq("++++-"));
        assert!(combine(&seq("++"), &seq("+++"), &mut rng).is_err());
    }

    #[test]
    fn combine_cut_is_uniform_and_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b) = (seq("++++++"), seq("------"));
        let mut counts = [0usize; 6];
        for _ in 0..50_000 {
            let c = combine(&a, &b, &mut rng).unwrap();
            let cut = c.spins().iter().take_while(|&&s| s == 1).count();
            counts[cut] += 1;
        }
        assert_eq!(counts[0], 0);
        for &c in &counts[1..] {
            assert!((c as f64 - 10_000.0).abs() < 400.0, "{counts:?}");
        }
    }

    #[test]
    fn mutate_extremes_and_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let base = seq("+-+-++--+");
        let mut s = base.clone();
        mutate(&mut s, 0.0, &mut rng);
        assert_eq!(s, base);
        mutate(&mut s, 1.0, &mut rng);
        assert_eq!(s, base.negated());

        let n = 20;
        let p = 1.0 / n as f64;
        let trials = 100_000;
        let mut total = 0usize;
        for _ in 0..trials {
            let mut s = SpinSequence::all_up(n).unwrap();
            mutate(&mut s, p, &mut rng);
            total += s.spins().iter().filter(|&&x| x == -1).count();
        }
        let mean = total as f64 / trials as f64;
        let sd = (n as f64 * p * (1.0 - p) / trials as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn tournament_prefers_lower_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let energies = [10, 1, 10, 10];
        let wins = (0..40_000).filter(|_| tournament(&energies, 2, &mut rng) == 1).count();
        // P(index 1 drawn at least once in two draws) = 1 - (3/4)^2 = 7/16.
        assert!((wins as f64 / 40_000.0 - 7.0 / 16.0).abs() < 0.01);
        assert_eq!(tournament(&[5], 2, &mut rng), 0);
    }
}
