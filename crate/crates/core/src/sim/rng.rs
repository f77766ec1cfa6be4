use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags. Every random draw in an experiment comes from a ChaCha8
/// stream keyed by `(seed, index, tag)`, so streams never overlap and no
/// state is shared between trials or methods.
pub mod purpose {
    /// Assignment of malicious robots to indices (once per experiment).
    pub const PLACEMENT: u64 = 0x706c_6163;
    /// Event, reports and trust symbols of one trial.
    pub const TRIAL: u64 = 0x7472_6961;
    /// Per-method randomness; the method's position in the list is added.
    pub const METHOD_BASE: u64 = 0x6d65_7400_0000;
}

/// Independent generator for `(seed, index, tag)`.
pub fn stream(seed: u64, index: u64, tag: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(&tag.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
