"""Counter-based pseudo-random stream for reproducible data generation.

The generator hashes a 64-bit counter with the splitmix64 finalizer, so the
value at stream position ``p`` is a pure function of ``(seed, p)``.  All
integer work is modulo-2^64 numpy ``uint64`` arithmetic, which makes the raw
stream identical on every platform; Gaussians are produced by Box-Muller on
fixed-order uniform pairs.  Sampling speed is secondary to the stream being
stable enough to regenerate instances from a manifest bit-for-bit.
"""

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)

# (raw >> 11) has 53 bits; +1 then scale maps to (0, 1], so log() is safe.
_U53_INV = 1.0 / 9007199254740992.0  # 2^-53


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class CounterRng:
    """Deterministic stream of uint64 words, uniforms and Gaussians.

    Each draw advances an internal position counter, so the sequence of
    *calls* defines the stream layout; callers must keep that order fixed
    for reproducibility.
    """

    def __init__(self, seed):
        self._seed = np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)
        self._pos = 0

    def raw(self, count):
        """Next ``count`` uint64 words."""
        idx = np.arange(self._pos + 1, self._pos + count + 1, dtype=np.uint64)
        self._pos += count
        return _mix(self._seed + idx * _GAMMA)

    def uniforms(self, count):
        """Uniform doubles in (0, 1], one word each."""
        return ((self.raw(count) >> np.uint64(11)) + np.uint64(1)) * _U53_INV

    def gaussians(self, count):
        """Standard normals via Box-Muller; consumes 2*ceil(count/2) words."""
        pairs = (count + 1) // 2
        u1 = self.uniforms(pairs)
        u2 = self.uniforms(pairs)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * pairs)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:count]

    def below(self, bound):
        """One integer in [0, bound) by modulo reduction.

        The modulo bias (< 2^-53 for the sizes used here) is irrelevant for
        index shuffling and keeps the reduction platform-stable.
        """
        return int(self.raw(1)[0] % np.uint64(bound))

    def choose_prefix(self, total, count):
        """First ``count`` positions of a Fisher-Yates shuffle of range(total).

        Consumes exactly ``count`` words; returns an int64 array (unsorted).
        """
        if not 0 <= count <= total:
            raise ValueError(f"count {count} out of range for total {total}")
        items = np.arange(total, dtype=np.int64)
        for i in range(count):
            j = i + self.below(total - i)
            items[i], items[j] = items[j], items[i]
        return items[:count]


def derive_seed(*parts):
    """Combine integers into one 64-bit seed (order-sensitive)."""
    # 1-element arrays: numpy warns on scalar uint64 overflow but not arrays
    acc = np.array([0x8538ECB5BD456EA3], dtype=np.uint64)
    for part in parts:
        word = np.array([int(part) & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
        acc = _mix(acc + word * _GAMMA)
    return int(acc[0])
