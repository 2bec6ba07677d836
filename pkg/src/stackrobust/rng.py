"""Reproducible random streams.

Every stream is a Philox4x64-10 counter-based generator whose 128-bit key is
``(seed mod 2**64, index mod 2**64)``, starting at counter zero.  A stream is
therefore fixed by the pair ``(seed, index)`` alone and is identical no
matter how work is split across threads or processes.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    key = np.array([int(seed) & _MASK64, int(index) & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(*parts: int) -> int:
    """Fold several integers into one 64-bit seed."""
    words = [int(p) & _MASK64 for p in parts]
    return int(np.random.SeedSequence(words).generate_state(1, dtype=np.uint64)[0])
