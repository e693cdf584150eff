# mlouvain/seeding.py
# Counter-based random streams for reproducible experiments

import numpy as np

SEED_MASK = (1 << 64) - 1


def derive_rng(seed: int, *counters: int) -> np.random.Generator:
    """Return an independent generator for ``(seed, *counters)``.

    The stream depends only on the integers given, never on the order in
    which streams are requested, so work can be scheduled on any number of
    workers without changing results.
    """
    return np.random.default_rng(np.random.SeedSequence([seed & SEED_MASK, *counters]))


def derive_seed(seed: int, *counters: int) -> int:
    """Return a non-negative 63-bit seed for ``(seed, *counters)``.

    63 bits keep derived seeds inside signed 64-bit result columns.
    """
    state = np.random.SeedSequence([seed & SEED_MASK, *counters]).generate_state(
        2, dtype=np.uint32
    )
    return ((int(state[0]) << 32) | int(state[1])) >> 1
