"""SplitMix64: the seeded generator behind every randomized sample.

Output i of a stream started at state s is mix(s + (i + 1) * GOLDEN) mod 2**64,
with mix the SplitMix64 finalizer (Steele, Lea and Flood, 2014).  Because the
stream is counter based, blocks of outputs are produced with numpy uint64
arithmetic and match the scalar path exactly.
"""

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * _M1 & MASK
    z = (z ^ (z >> 27)) * _M2 & MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, *key: int) -> int:
    """Independent stream seed for (seed, key...), e.g. one per (q, character)."""
    state = seed & MASK
    for k in key:
        state = _mix((state ^ (k & MASK)) + GOLDEN & MASK)
    return state


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        return _mix(self.state)

    def block(self, n: int) -> np.ndarray:
        """The next n raw outputs as uint64."""
        with np.errstate(over="ignore"):
            steps = np.arange(1, n + 1, dtype=np.uint64) * np.uint64(GOLDEN)
            z = np.uint64(self.state) + steps
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
            z ^= z >> np.uint64(31)
        self.state = (self.state + n * GOLDEN) & MASK
        return z

    def below(self, bound: int, n: int) -> np.ndarray:
        """n integers uniform on [0, bound), by rejection of the biased tail."""
        if bound < 1:
            raise ValueError("bound must be positive")
        limit = np.uint64((1 << 64) - (1 << 64) % bound) if (1 << 64) % bound else None
        out: list[np.ndarray] = []
        have = 0
        while have < n:
            raw = self.block(n - have + 8)
            if limit is not None:
                raw = raw[raw < limit]
            raw = raw[: n - have]
            out.append((raw % np.uint64(bound)).astype(np.int64))
            have += raw.size
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)
