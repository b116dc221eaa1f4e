//! Reference implementations written straight from the definitions, sharing
//! no code with the library beyond the `Game` payoff accessor.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uncoupled::{Game, ProfileSpace};

pub type Q = Ratio<u64>;

pub fn flatten(counts: &[usize], p: &[usize]) -> usize {
    p.iter().zip(counts).fold(0, |acc, (&a, &k)| acc * k + a)
}

pub fn unflatten(counts: &[usize], mut x: usize) -> Vec<usize> {
    let mut p = vec![0; counts.len()];
    for j in (0..counts.len()).rev() {
        p[j] = x % counts[j];
        x /= counts[j];
    }
    p
}

pub fn all_profiles(counts: &[usize]) -> Vec<Vec<usize>> {
    let size: usize = counts.iter().product();
    (0..size).map(|x| unflatten(counts, x)).collect()
}

pub fn payoff(game: &Game, i: usize, p: &[usize]) -> i64 {
    game.payoff(i, flatten(game.space().action_counts(), p))
}

/// Argmax over player `i`'s deviations, by direct evaluation.
pub fn best_replies(game: &Game, i: usize, p: &[usize]) -> BTreeSet<usize> {
    let k = game.space().actions(i);
    let values: Vec<i64> = (0..k)
        .map(|a| {
            let mut q = p.to_vec();
            q[i] = a;
            payoff(game, i, &q)
        })
        .collect();
    let best = *values.iter().max().unwrap();
    (0..k).filter(|&a| values[a] == best).collect()
}

pub fn is_pne(game: &Game, p: &[usize]) -> bool {
    (0..p.len()).all(|i| best_replies(game, i, p).contains(&p[i]))
}

pub fn pne_list(game: &Game) -> Vec<Vec<usize>> {
    all_profiles(game.space().action_counts())
        .into_iter()
        .filter(|p| is_pne(game, p))
        .collect()
}

/// Lexicographic successor with wrap-around.
pub fn next_profile(counts: &[usize], p: &[usize]) -> Vec<usize> {
    let mut q = p.to_vec();
    for j in (0..q.len()).rev() {
        q[j] += 1;
        if q[j] < counts[j] {
            return q;
        }
        q[j] = 0;
    }
    q
}

pub type Dist = BTreeMap<usize, Q>;

pub fn point(a: usize) -> Dist {
    BTreeMap::from([(a, Q::from_integer(1))])
}

pub fn uniform(k: usize) -> Dist {
    (0..k).map(|a| (a, Q::new(1, k as u64))).collect()
}

pub fn h_player(game: &Game, i: usize, p: &[usize]) -> Dist {
    if best_replies(game, i, p).contains(&p[i]) {
        point(p[i])
    } else {
        uniform(game.space().actions(i))
    }
}

pub fn min_br_player(game: &Game, i: usize, p: &[usize]) -> Dist {
    let br = best_replies(game, i, p);
    if br.contains(&p[i]) {
        point(p[i])
    } else {
        point(*br.iter().next().unwrap())
    }
}

/// The three-step protocol's rule table for state `(a, b, c)`.
pub fn det3_player(game: &Game, i: usize, a: &[usize], b: &[usize], c: &[usize]) -> usize {
    if b == c {
        let br = best_replies(game, i, c);
        if br.contains(&c[i]) {
            c[i]
        } else {
            *br.iter().next().unwrap()
        }
    } else if a == b {
        next_profile(game.space().action_counts(), a)[i]
    } else {
        c[i]
    }
}

/// The two-step protocol's rule table for state `(a, b)`.
pub fn det2_player(game: &Game, i: usize, a: &[usize], b: &[usize]) -> usize {
    let counts = game.space().action_counts();
    let n = counts.len();
    let residue = |x: usize, y: usize, k: usize| (x + k - y) % k;
    let move_on = a != b && (0..n).all(|j| residue(a[j], b[j], counts[j]) <= 1);
    let query = (0..n).all(|j| residue(b[j], a[j], counts[j]) <= 2);
    if move_on {
        next_profile(counts, a)[i]
    } else if query {
        if best_replies(game, i, b).contains(&b[i]) {
            b[i]
        } else {
            (b[i] + counts[i] - 1) % counts[i]
        }
    } else {
        b[i]
    }
}

/// Product of independent per-player distributions, keyed by flat profile index.
pub fn product(counts: &[usize], per_player: &[Dist]) -> BTreeMap<usize, Q> {
    let mut out: BTreeMap<Vec<usize>, Q> = BTreeMap::from([(Vec::new(), Q::from_integer(1))]);
    for d in per_player {
        let mut next = BTreeMap::new();
        for (prefix, w) in &out {
            for (&a, &v) in d {
                let mut p = prefix.clone();
                p.push(a);
                *next.entry(p).or_insert(Q::from_integer(0)) += *w * v;
            }
        }
        out = next;
    }
    out.into_iter().map(|(p, w)| (flatten(counts, &p), w)).collect()
}

pub fn random_game(counts: &[usize], range: i64, seed: u64) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0fac_e000);
    let space = ProfileSpace::new(counts.to_vec()).unwrap();
    Game::from_fn(space, |_, _| rng.gen_range(0..range))
}

/// Forward closure by iterating one-step expansion until nothing changes.
pub fn closure(succ: &dyn Fn(usize) -> Vec<usize>, from: usize) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([from]);
    loop {
        let grown: BTreeSet<usize> = set.iter().flat_map(|&x| succ(x)).chain(set.iter().copied()).collect();
        if grown.len() == set.len() {
            return set;
        }
        set = grown;
    }
}

/// Self-stabilization by brute force over the recall-`r` state space, given a
/// successor function on states encoded as `Vec` of profile indices.
pub fn self_stabilizes(
    game: &Game,
    recall: usize,
    next: &dyn Fn(&[usize]) -> Vec<usize>,
) -> bool {
    let size = game.space().size();
    let nodes = size.pow(recall as u32);
    let decode = |mut x: usize| {
        let mut v = vec![0; recall];
        for s in v.iter_mut().rev() {
            *s = x % size;
            x /= size;
        }
        v
    };
    let encode = |v: &[usize]| v.iter().fold(0, |acc, &x| acc * size + x);
    let succ = |x: usize| -> Vec<usize> {
        let s = decode(x);
        next(&s)
            .into_iter()
            .map(|q| {
                let mut t = s[1..].to_vec();
                t.push(q);
                encode(&t)
            })
            .collect()
    };
    let counts = game.space().action_counts();
    let good: BTreeSet<usize> = (0..nodes)
        .filter(|&x| {
            let s = decode(x);
            s.iter().all(|&p| p == s[0]) && is_pne(game, &unflatten(counts, s[0])) && succ(x) == vec![x]
        })
        .collect();
    (0..nodes).all(|x| closure(&succ, x).iter().any(|y| good.contains(y)))
}
