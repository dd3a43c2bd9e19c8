//! Shared test support: a deterministic PRNG and stream generators.

use dolha_core::{EdgeKey, StreamEdge};

pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Parameters mirroring the property-suite stream profile: bounded
/// vertex universe, a share of repeated keys, a share of negative
/// deltas, and occasional timestamp ties.
pub struct StreamProfile {
    pub events: usize,
    pub universe: u64,
    pub repeat_pct: u64,
    pub negative_pct: u64,
}

impl StreamProfile {
    pub fn standard(events: usize, universe: u64) -> Self {
        StreamProfile {
            events,
            universe,
            repeat_pct: 20,
            negative_pct: 10,
        }
    }
}

pub fn gen_stream(seed: u64, profile: &StreamProfile) -> Vec<StreamEdge> {
    let mut rng = SplitMix64(seed.wrapping_mul(0x5851_f42d_4c95_7f2d).wrapping_add(1));
    let mut t = 1u64;
    let mut seen: Vec<EdgeKey> = Vec::new();
    let mut out = Vec::with_capacity(profile.events);
    for _ in 0..profile.events {
        // Ties (delta 0) keep the equal-timestamp paths exercised.
        t += rng.below(3);
        let key = if !seen.is_empty() && rng.below(100) < profile.repeat_pct {
            seen[rng.below(seen.len() as u64) as usize].clone()
        } else {
            let a = rng.below(profile.universe);
            let b = rng.below(profile.universe);
            EdgeKey::new(format!("n{a}").as_str(), format!("n{b}").as_str())
        };
        seen.push(key.clone());
        let mag = 1 + rng.below(3) as i64;
        let w = if rng.below(100) < profile.negative_pct {
            -mag
        } else {
            mag
        };
        out.push(StreamEdge { key, t, w });
    }
    out
}

/// All vertex ids of a universe, for exhaustive checkpoint comparisons.
#[allow(dead_code)]
pub fn universe_ids(universe: u64) -> Vec<dolha_core::VertexId> {
    (0..universe)
        .map(|i| dolha_core::VertexId::from(format!("n{i}").as_str()))
        .collect()
}
