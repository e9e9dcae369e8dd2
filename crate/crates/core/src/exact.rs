//! Exact classical probability over finite equiprobable spaces.
//!
//! Everything here is rational arithmetic; no floating point is used.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, from_biguint, from_u64, is_probability, Rational};
use crate::{Error, Result};

/// `m/n`: favourable over equally possible cases.
pub fn classical_probability(favourable: u64, total: u64) -> Result<Rational> {
    if total == 0 {
        return Err(Error::domain("no equally possible cases"));
    }
    if favourable > total {
        return Err(Error::domain("more favourable cases than cases"));
    }
    Ok(Rational::new(favourable.into(), total.into()))
}

/// A finite set of `size` equally possible outcomes with named events.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteEventSpace {
    size: usize,
    events: BTreeMap<String, BTreeSet<usize>>,
}

impl FiniteEventSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::domain("event space needs at least one outcome"));
        }
        Ok(Self { size, events: BTreeMap::new() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn add_event(&mut self, name: &str, outcomes: impl IntoIterator<Item = usize>) -> Result<()> {
        if self.events.contains_key(name) {
            return Err(Error::parameter(alloc::format!("event `{name}` already defined")));
        }
        let set: BTreeSet<usize> = outcomes.into_iter().collect();
        if let Some(&max) = set.iter().next_back() {
            if max >= self.size {
                return Err(Error::domain(alloc::format!(
                    "outcome {max} outside space of {} outcomes",
                    self.size
                )));
            }
        }
        self.events.insert(name.to_string(), set);
        Ok(())
    }

    /// Adds the event made of every outcome satisfying `pred`.
    pub fn add_event_where(&mut self, name: &str, pred: impl Fn(usize) -> bool) -> Result<()> {
        let outcomes: Vec<usize> = (0..self.size).filter(|&i| pred(i)).collect();
        self.add_event(name, outcomes)
    }

    pub fn event(&self, name: &str) -> Result<&BTreeSet<usize>> {
        self.events.get(name).ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    pub fn event_names(&self) -> impl Iterator<Item = &str> {
        self.events.keys().map(String::as_str)
    }

    pub fn probability(&self, name: &str) -> Result<Rational> {
        let count = self.event(name)?.len() as u64;
        classical_probability(count, self.size as u64)
    }
}

/// Decodes outcome `index` of a product space with the given axis sizes into
/// coordinates, first axis varying slowest.
pub fn product_coordinates(index: usize, dims: &[usize]) -> Vec<usize> {
    let mut coords = vec![0; dims.len()];
    let mut rest = index;
    for (slot, &d) in coords.iter_mut().zip(dims).rev() {
        *slot = rest % d;
        rest /= d;
    }
    coords
}

/// Probability of the union of the named events by inclusion and exclusion
/// over every non-empty sub-family.
pub fn union_probability(space: &FiniteEventSpace, names: &[&str]) -> Result<Rational> {
    if names.is_empty() {
        return Err(Error::parameter("union of no events"));
    }
    if names.len() > 24 {
        return Err(Error::Size("inclusion-exclusion over more than 24 events".into()));
    }
    let sets: Vec<&BTreeSet<usize>> = names.iter().map(|n| space.event(n)).collect::<Result<_>>()?;
    let mut signed_count: i64 = 0;
    for mask in 1u32..(1u32 << sets.len()) {
        let mut members = (0..sets.len()).filter(|i| mask & (1 << i) != 0);
        let first = members.next().expect("mask is non-empty");
        let mut inter: BTreeSet<usize> = sets[first].clone();
        for i in members {
            inter.retain(|x| sets[i].contains(x));
        }
        let count = inter.len() as i64;
        if mask.count_ones() % 2 == 1 {
            signed_count += count;
        } else {
            signed_count -= count;
        }
    }
    Ok(Rational::new(signed_count.into(), (space.size() as i64).into()))
}

/// P(a | given) = |a ∩ given| / |given|.
pub fn conditional_probability(space: &FiniteEventSpace, a: &str, given: &str) -> Result<Rational> {
    let a = space.event(a)?;
    let g = space.event(given)?;
    if g.is_empty() {
        return Err(Error::UndefinedConditional);
    }
    let both = a.intersection(g).count() as u64;
    classical_probability(both, g.len() as u64)
}

/// P(AB) = P(B) P(A|B).
pub fn joint_probability(p_given: &Rational, p_conditional: &Rational) -> Result<Rational> {
    if !is_probability(p_given) || !is_probability(p_conditional) {
        return Err(Error::domain("probabilities must lie in [0, 1]"));
    }
    Ok(p_given * p_conditional)
}

/// Mutually exclusive causes `B_i` with priors `P(B_i)` and likelihoods `P(A|B_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauseSystem {
    priors: Vec<Rational>,
    likelihoods: Vec<Rational>,
}

impl CauseSystem {
    pub fn new(priors: Vec<Rational>, likelihoods: Vec<Rational>) -> Result<Self> {
        if priors.is_empty() {
            return Err(Error::parameter("a cause system needs at least one cause"));
        }
        if priors.len() != likelihoods.len() {
            return Err(Error::Dimension { expected: priors.len(), found: likelihoods.len() });
        }
        if !priors.iter().chain(&likelihoods).all(is_probability) {
            return Err(Error::domain("priors and likelihoods must lie in [0, 1]"));
        }
        if rational::sum(&priors) != Rational::one() {
            return Err(Error::domain("priors must sum to exactly 1"));
        }
        Ok(Self { priors, likelihoods })
    }

    /// Equal priors `1/k` over the given likelihoods.
    pub fn uniform(likelihoods: Vec<Rational>) -> Result<Self> {
        let k = likelihoods.len() as u64;
        if k == 0 {
            return Err(Error::parameter("a cause system needs at least one cause"));
        }
        let prior = Rational::new(1.into(), k.into());
        Self::new(vec![prior; k as usize], likelihoods)
    }

    pub fn priors(&self) -> &[Rational] {
        &self.priors
    }

    pub fn likelihoods(&self) -> &[Rational] {
        &self.likelihoods
    }
}

/// Σ P(B_i) P(A|B_i).
pub fn total_probability(system: &CauseSystem) -> Rational {
    system.priors.iter().zip(&system.likelihoods).fold(Rational::zero(), |acc, (p, l)| acc + p * l)
}

/// Posterior probabilities P(B_i | A).
pub fn bayes_posteriors(system: &CauseSystem) -> Result<Vec<Rational>> {
    let total = total_probability(system);
    if total.is_zero() {
        return Err(Error::UndefinedPosterior);
    }
    Ok(system.priors.iter().zip(&system.likelihoods).map(|(p, l)| p * l / &total).collect())
}

/// Number of ordered outcomes of `dice` fair `faces`-sided dice showing `target` points.
pub fn dice_sum_count(dice: u32, faces: u32, target: u64) -> Result<BigUint> {
    if dice == 0 || faces < 2 {
        return Err(Error::domain("need at least one die with at least two faces"));
    }
    let max = dice as u64 * faces as u64;
    if target < dice as u64 || target > max {
        return Ok(BigUint::zero());
    }
    // ways[s] = outcomes of the dice rolled so far summing to s
    let mut ways = vec![BigUint::one()];
    for _ in 0..dice {
        let mut next = vec![BigUint::zero(); ways.len() + faces as usize];
        for (s, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for face in 1..=faces as usize {
                next[s + face] += w;
            }
        }
        ways = next;
    }
    Ok(ways[target as usize].clone())
}

/// Fair share of the stakes for the gambler who still needs `needed_a` rounds
/// against an opponent needing `needed_b`, each round won with probability `p`.
pub fn points_division(needed_a: u32, needed_b: u32, p: &Rational) -> Result<Rational> {
    if needed_a == 0 || needed_b == 0 {
        return Err(Error::domain("each gambler must still need at least one round"));
    }
    if !p.is_positive() || *p >= Rational::one() {
        return Err(Error::domain("round probability must lie strictly between 0 and 1"));
    }
    let q = Rational::one() - p;
    let (na, nb) = (needed_a as usize, needed_b as usize);
    // share[a][b]: A needs a, B needs b
    let mut share = vec![vec![Rational::zero(); nb + 1]; na + 1];
    for row in share.iter_mut().take(na + 1) {
        row[0] = Rational::zero();
    }
    for b in 1..=nb {
        share[0][b] = Rational::one();
    }
    for a in 1..=na {
        for b in 1..=nb {
            share[a][b] = p * &share[a - 1][b] + &q * &share[a][b - 1];
        }
    }
    Ok(share[na][nb].clone())
}

/// Probabilities that A, respectively B, ends up with every counter when A
/// starts with `counters_a`, B with `counters_b`, and each transfer goes to A
/// with probability `p_a` (to B with `p_b`).
pub fn ruin_chances(
    counters_a: u32,
    counters_b: u32,
    p_a: &Rational,
    p_b: &Rational,
) -> Result<(Rational, Rational)> {
    if counters_a == 0 || counters_b == 0 {
        return Err(Error::domain("both players need at least one counter"));
    }
    if !p_a.is_positive() || *p_a >= Rational::one() {
        return Err(Error::domain("transfer probability must lie strictly between 0 and 1"));
    }
    if p_a + p_b != Rational::one() {
        return Err(Error::domain("transfer probabilities must sum to 1"));
    }
    let total = counters_a as u64 + counters_b as u64;
    let win_a = if p_a == p_b {
        Rational::new(counters_a.into(), total.into())
    } else {
        let rho = p_b / p_a;
        let one = Rational::one();
        (&one - rational::pow(&rho, counters_a as u64)) / (&one - rational::pow(&rho, total))
    };
    let win_b = Rational::one() - &win_a;
    Ok((win_a, win_b))
}

/// Transfer probabilities once rounds that move no counter are conditioned
/// away: `(ways_a, ways_b) → (ways_a/(ways_a+ways_b), ways_b/(ways_a+ways_b))`.
pub fn conditioned_transfer(ways_a: u64, ways_b: u64) -> Result<(Rational, Rational)> {
    let total = ways_a + ways_b;
    if ways_a == 0 || ways_b == 0 {
        return Err(Error::domain("both players need a winning outcome"));
    }
    Ok((classical_probability(ways_a, total)?, classical_probability(ways_b, total)?))
}

/// Probability of exactly `marked_drawn` marked items when `draws` items are taken
/// without replacement from `population` items of which `marked` are marked.
pub fn huygens_draw(population: u64, marked: u64, draws: u64, marked_drawn: u64) -> Result<Rational> {
    if marked > population || draws > population {
        return Err(Error::domain("cannot mark or draw more than the population"));
    }
    if marked_drawn > marked.min(draws) || draws - marked_drawn > population - marked {
        return Err(Error::domain("incompatible counts"));
    }
    let favourable =
        rational::binomial(marked, marked_drawn) * rational::binomial(population - marked, draws - marked_drawn);
    Ok(from_biguint(favourable) / from_biguint(rational::binomial(population, draws)))
}

/// `(1 - (5/6)^4, 1 - (35/36)^24)`: at least one six in four throws of one die
/// against at least one double six in 24 throws of two.
pub fn de_mere() -> (Rational, Rational) {
    let one = Rational::one();
    let single = &one - rational::pow(&rational::ratio(5, 6), 4);
    let double = &one - rational::pow(&rational::ratio(35, 36), 24);
    (single, double)
}

/// Expected chance of drawing white from an urn of `n` balls whose number of
/// white balls is, for all we know, equally likely to be any of `0..=n`.
pub fn poisson_urn(n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::domain("urn must contain at least one ball"));
    }
    let nr = from_u64(n);
    let total = (0..=n).fold(Rational::zero(), |acc, k| acc + from_u64(k) / &nr);
    Ok(total / from_u64(n + 1))
}
