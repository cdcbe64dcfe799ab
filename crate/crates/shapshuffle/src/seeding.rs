//! Deterministic seed derivation.
//!
//! Randomized pieces of the pipeline (attack coins, coalition sampling,
//! replicate splits) never share one global RNG stream. Instead every
//! consumer derives its own seed from a parent seed plus a stable tag, so
//! results are reproducible regardless of evaluation order or thread count.
//!
//! Attack randomness additionally has to be a function of the *batch
//! content*: the adversary only sees the protected column, so its stream is
//! keyed by an FNV-1a hash of that column's bytes combined with the global
//! run seed. Identical batches therefore shuffle identically across calls.

/// 64-bit FNV-1a hash over a byte stream.
pub fn fnv1a64(bytes: impl IntoIterator<Item = u8>) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(PRIME);
    }
    hash
}

/// Hash a sequence of f64 columns (little-endian bytes, column by column).
pub fn hash_columns(columns: &[&[f64]]) -> u64 {
    fnv1a64(
        columns
            .iter()
            .flat_map(|col| col.iter())
            .flat_map(|v| v.to_le_bytes()),
    )
}

/// Derive a child seed from a parent seed and an integer tag.
///
/// This is a splitmix64 finalizer over the combined value; children with
/// different tags are decorrelated even for adjacent parent seeds.
pub fn derive_seed(parent: u64, tag: u64) -> u64 {
    let mut z = parent ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
