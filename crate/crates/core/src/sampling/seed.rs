use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// The splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Identifies the random stream of one Monte Carlo trial.
///
/// The stream is `ChaCha8Rng` seeded with 32 bytes derived as follows:
/// `s = mix64(master_seed) ^ mix64(trial_index + GOLDEN)`, then four
/// splitmix64 outputs from state `s` (`s += GOLDEN; word = mix64(s)`),
/// little-endian. `mix64` is the splitmix64 finalizer and
/// `GOLDEN = 0x9E3779B97F4A7C15`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        SeedSpec {
            master_seed,
            trial_index,
        }
    }

    pub fn seed_bytes(&self) -> [u8; 32] {
        let mut s = mix64(self.master_seed) ^ mix64(self.trial_index.wrapping_add(GOLDEN));
        let mut out = [0u8; 32];
        for chunk in out.chunks_exact_mut(8) {
            s = s.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&mix64(s).to_le_bytes());
        }
        out
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.seed_bytes())
    }
}
