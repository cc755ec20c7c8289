use std::collections::HashMap;

use super::Partition;
use crate::error::{PbtError, Result};

/// Irreducible character `chi_mu` of `S_n` on the class with the given cycle
/// type, by the Murnaghan-Nakayama rule.
pub fn sn_character(mu: &Partition, cycle_type: &Partition) -> Result<i64> {
    if mu.size() != cycle_type.size() {
        return Err(PbtError::SizeMismatch {
            left: mu.size(),
            right: cycle_type.size(),
        });
    }
    let mut memo = HashMap::new();
    Ok(mn(mu.parts().to_vec(), cycle_type.parts(), &mut memo))
}

/// Caches the characters of one `mu` by cycle type.
pub struct CharacterTable {
    mu: Partition,
    values: HashMap<Partition, i64>,
}

impl CharacterTable {
    pub fn new(mu: &Partition) -> Self {
        Self {
            mu: mu.clone(),
            values: HashMap::new(),
        }
    }

    pub fn value(&mut self, cycle_type: &Partition) -> Result<i64> {
        if let Some(&v) = self.values.get(cycle_type) {
            return Ok(v);
        }
        let v = sn_character(&self.mu, cycle_type)?;
        self.values.insert(cycle_type.clone(), v);
        Ok(v)
    }
}

// Removes border strips of the lengths in `cycles` from the diagram `shape`,
// working on the beta-set (first-column hook lengths) representation: a strip
// of length r is a bead moved from b to b - r onto an empty position, with
// sign (-1)^(beads jumped over).
fn mn(shape: Vec<u32>, cycles: &[u32], memo: &mut HashMap<(Vec<u32>, usize), i64>) -> i64 {
    if cycles.is_empty() {
        return if shape.is_empty() { 1 } else { 0 };
    }
    let key = (shape, cycles.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let shape = &key.0;
    let r = cycles[0];
    let len = shape.len() as u32;
    let beta: Vec<u32> = shape
        .iter()
        .enumerate()
        .map(|(i, &p)| p + len - 1 - i as u32)
        .collect();
    let mut total = 0i64;
    for (k, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        let mut next = beta.clone();
        next[k] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        total += sign * mn(from_beta(&next), &cycles[1..], memo);
    }
    memo.insert(key, total);
    total
}

fn from_beta(beta: &[u32]) -> Vec<u32> {
    let len = beta.len() as u32;
    let mut parts: Vec<u32> = beta
        .iter()
        .enumerate()
        .map(|(i, &b)| b + i as u32 + 1 - len)
        .collect();
    while parts.last() == Some(&0) {
        parts.pop();
    }
    parts
}
