//! Stable seed derivation.
//!
//! Per-replica seeds are `splitmix64` mixes of the base seed, an FNV-1a hash of
//! the experiment name and the replica index, so they do not depend on thread
//! count or scheduling.

use crate::geom::Point;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive combination of two words.
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b).rotate_left(17))
}

pub fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Seed of replica `index` of experiment `name`.
pub fn replica_seed(base: u64, name: &str, index: u64) -> u64 {
    mix(mix(base, fnv1a(name)), index)
}

/// Hash of an undirected edge given by its endpoint coordinates, so the value
/// survives renumbering of the vertices.
pub fn edge_key(seed: u64, a: Point, b: Point) -> u64 {
    let (ka, kb) = (a.key(), b.key());
    let (p, q) = if ka <= kb { (ka, kb) } else { (kb, ka) };
    let mut h = mix(seed, p.0);
    h = mix(h, p.1);
    h = mix(h, q.0);
    mix(h, q.1)
}

/// Uniform value in `[0, 1)` from the top 53 bits of a hash.
pub fn unit_f64(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
