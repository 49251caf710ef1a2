//! Deterministic hashed bag-of-words text embedding.
//!
//! Stand-in for a learned sentence/text encoder: lowercase alphanumeric
//! tokens are hashed with 64-bit FNV-1a into `EMBED_DIM` buckets and the
//! count vector is L2-normalized.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

pub const EMBED_DIM: usize = 512;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: impl Iterator<Item = u8>) -> u64 {
    bytes.fold(FNV_OFFSET, |h, b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// Lowercased alphanumeric tokens of `text`.
pub fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty())
}

fn bucket(token: &str) -> usize {
    let bytes = token.chars().flat_map(char::to_lowercase).flat_map(|c| {
        let mut buf = [0u8; 4];
        let n = c.encode_utf8(&mut buf).len();
        buf.into_iter().take(n)
    });
    (fnv1a(bytes) % EMBED_DIM as u64) as usize
}

/// Unnormalized token-count vector.
pub fn bag_of_words(text: &str) -> Vec<f64> {
    let mut v = vec![0.0; EMBED_DIM];
    for t in tokens(text) {
        v[bucket(t)] += 1.0;
    }
    v
}

/// L2-normalize in place; the zero vector stays zero.
pub fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Unit embedding of `text`, or the zero vector if it has no tokens.
pub fn embed_text(text: &str) -> Vec<f64> {
    let mut v = bag_of_words(text);
    normalize(&mut v);
    v
}

/// Cosine similarity; zero when either side is the zero vector.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identical_text() {
        assert_relative_eq!(cosine(&embed_text("kitchen"), &embed_text("kitchen")), 1.0);
    }

    #[test]
    fn empty_text_is_zero() {
        let z = embed_text("");
        assert!(z.iter().all(|x| *x == 0.0));
        assert_eq!(cosine(&z, &embed_text("kitchen")), 0.0);
        assert!(embed_text(" ,, ").iter().all(|x| *x == 0.0));
    }

    #[test]
    fn order_free() {
        let a = embed_text("microwave oven");
        let b = embed_text("oven microwave");
        assert_eq!(a, b);
        assert_relative_eq!(cosine(&a, &b), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn case_and_punctuation_ignored() {
        assert_eq!(embed_text("Go to the Kitchen!"), embed_text("go to the kitchen"));
    }

    #[test]
    fn unit_norm() {
        let v = embed_text("Look at the large TV display on the wooden table");
        assert_relative_eq!(v.iter().map(|x| x * x).sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fixed_buckets() {
        // published FNV-1a 64 test vector
        assert_eq!(fnv1a("a".bytes()), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv1a("kitchen".bytes()), 0x857b_a31d_c6b8_878f);
        assert_eq!(bucket("kitchen"), 399);
        assert_eq!(bucket("KITCHEN"), 399);
        assert_eq!(bucket("microwave"), 202);
    }
}
