"""
Deterministic 64-bit random number generation.

The benchmark never uses the host platform's default RNG.  All randomness
flows through a splitmix64 stream generator so that every instance is
bit-identical across platforms and Python versions.

Seed derivation is hierarchical: a child seed is mixed from the master seed,
a canonical task key ("suite/family/variation", hashed with FNV-1a 64), and
the instance index.  Distinct (task, index) pairs collide with probability
~2^-64 per pair under the mixing function.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash of a byte string."""
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _MASK64
    return h


def mix64(z: int) -> int:
    """The splitmix64 finalizer: a 64-bit bijective avalanche mix."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, task_key: str, instance_index: int) -> int:
    """
    Derive the child seed for one problem instance.

    Args:
        master_seed: the experiment-wide master seed (default 42).
        task_key: canonical task encoding "suite/family/variation".
        instance_index: nonnegative instance index.

    Returns:
        A 64-bit unsigned child seed, identical on every platform.
    """
    s = mix64(master_seed & _MASK64)
    s = mix64(s ^ fnv1a64(task_key.encode("utf-8")))
    s = mix64(s ^ mix64(instance_index & _MASK64))
    return s


class Rng:
    """
    splitmix64 stream generator with the sampling helpers the generators need.

    Every method is deterministic given the construction seed.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive, rejection-unbiased."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            r = self.next_u64()
            if r < limit:
                return lo + (r % span)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def shuffle(self, seq: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.randint(0, i)
            seq[i], seq[j] = seq[j], seq[i]

    def sample(self, seq, k: int) -> list:
        """k distinct elements of seq, in random order."""
        n = len(seq)
        if k > n:
            raise ValueError(f"sample size {k} exceeds population {n}")
        idx = self.sample_range(0, n - 1, k)
        return [seq[i] for i in idx]

    def sample_range(self, lo: int, hi: int, k: int) -> list[int]:
        """
        k distinct integers from [lo, hi] inclusive, in random order.

        Uses Floyd's algorithm so huge ranges cost O(k) regardless of width.
        """
        n = hi - lo + 1
        if k > n:
            raise ValueError(f"cannot draw {k} distinct values from {n}")
        chosen: set[int] = set()
        out: list[int] = []
        for j in range(n - k, n):
            t = self.randint(lo, lo + j)
            if t in chosen:
                t = lo + j
            chosen.add(t)
            out.append(t)
        self.shuffle(out)
        return out
