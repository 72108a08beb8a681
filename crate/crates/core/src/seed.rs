//! Seed derivation for independent sub-tasks.
//!
//! Every randomized task (a tree, a fold, a one-vs-all machine) gets its own
//! stream derived from the master seed and the task index, so results do not
//! depend on the order in which tasks are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TaskRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a task index into a master seed.
pub fn derive(master: u64, task: u64) -> u64 {
    splitmix64(master ^ splitmix64(task.wrapping_add(0x51_7CC1_B727_220A)))
}

pub fn rng(seed: u64) -> TaskRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn task_rng(master: u64, task: u64) -> TaskRng {
    rng(derive(master, task))
}
