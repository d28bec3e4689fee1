"""Counter-based random numbers for the walker simulation.

Philox4x32 with 10 rounds: a stateless block cipher mapping a 128-bit
counter and 64-bit key to four 32-bit words. Each (step, walker) pair
indexes its own block, so every walker owns an independent stream
addressed by position rather than by shared mutable state; results are
independent of iteration order, chunking, and thread count by
construction. The compiled kernel implements the identical function, so
the two backends consume identical uniform streams.

Slot convention per (step, walker) block: words 0 and 1 feed a
Box-Muller pair (the two displacement normals; one-dimensional walks use
only the first), word 2 is the boundary-bridge uniform, word 3 the wall
bridge. Step 0 is reserved for drawing the initial position.
"""

from __future__ import annotations

import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_WEYL0 = 0x9E3779B9
_WEYL1 = 0xBB67AE85
_MASK32 = np.uint64(0xFFFFFFFF)

_TWO_PI = 2.0 * np.pi
_INV_2_32 = 2.0 ** -32


def philox_4x32(step, walker, key0: int, key1: int):
    """Four u32 words of the (step, walker) block under key (key0, key1).

    step and walker broadcast together; the counter is
    (step, walker, 0, 0) and the key words advance by the Weyl constants
    each of the 10 rounds. Returns shape (4,) + broadcast shape, uint32.
    """
    step = np.asarray(step, dtype=np.uint32)
    walker = np.asarray(walker, dtype=np.uint32)
    x0, x1 = np.broadcast_arrays(step, walker)
    x0 = x0.astype(np.uint32)
    x1 = x1.astype(np.uint32)
    x2 = np.zeros_like(x0)
    x3 = np.zeros_like(x0)
    keys = [
        (
            np.uint32((key0 + r * _WEYL0) & 0xFFFFFFFF),
            np.uint32((key1 + r * _WEYL1) & 0xFFFFFFFF),
        )
        for r in range(10)
    ]
    for k0, k1 in keys:
        p0 = _M0 * x0.astype(np.uint64)
        p1 = _M1 * x2.astype(np.uint64)
        hi0 = (p0 >> np.uint64(32)).astype(np.uint32)
        lo0 = (p0 & _MASK32).astype(np.uint32)
        hi1 = (p1 >> np.uint64(32)).astype(np.uint32)
        lo1 = (p1 & _MASK32).astype(np.uint32)
        x0, x1, x2, x3 = hi1 ^ x1 ^ k0, lo1, hi0 ^ x3 ^ k1, lo0
    return np.stack([x0, x1, x2, x3])


def seed_to_key(seed: int) -> tuple[int, int]:
    """Split a Python integer seed into the two 32-bit key words."""
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    return seed & 0xFFFFFFFF, (seed >> 32) & 0xFFFFFFFF


def uniform_from_u32(words):
    """Map u32 to the open interval (0, 1): (w + 0.5) / 2^32."""
    return (np.asarray(words).astype(np.float64) + 0.5) * _INV_2_32


def normals_from_u32(w0, w1):
    """Box-Muller pair from two u32 words."""
    u0 = uniform_from_u32(w0)
    u1 = uniform_from_u32(w1)
    r = np.sqrt(-2.0 * np.log(u0))
    return r * np.cos(_TWO_PI * u1), r * np.sin(_TWO_PI * u1)
