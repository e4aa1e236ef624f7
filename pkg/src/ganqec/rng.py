"""Counter-based random streams for reproducible parallel Monte Carlo.

Every trial owns its own stream, identified by a 64-bit index. Draw ``j``
of stream ``s`` is a pure function of ``(seed, s, j)``, so trials can be
generated in any order, in any batch size, on any number of workers, and
still produce identical bits.

The generator is Philox4x64-10 with key ``(seed, stream)``. Blocks are
numbered the way numpy's ``np.random.Philox`` emits them (the counter is
pre-incremented, so block ``b`` uses counter word ``b + 1``), which lets the
implementation be checked word-for-word against numpy.
"""

from __future__ import annotations

import numpy as np

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)

# 53-bit mantissa conversion, identical to numpy's uint64 -> double in [0, 1)
_U53 = np.uint64(11)
_INV53 = 1.0 / (1 << 53)


def _mulhilo(a: np.uint64, b: np.ndarray):
    """128-bit product of scalar ``a`` with array ``b``, as (hi, lo) uint64."""
    lo = a * b
    ah = a >> _SHIFT32
    al = a & _MASK32
    bh = b >> _SHIFT32
    bl = b & _MASK32
    albl = al * bl
    ahbl = ah * bl
    albh = al * bh
    carry = ((albl >> _SHIFT32) + (ahbl & _MASK32) + (albh & _MASK32)) >> _SHIFT32
    hi = ah * bh + (ahbl >> _SHIFT32) + (albh >> _SHIFT32) + carry
    return hi, lo


def philox4x64(counter: np.ndarray, key: np.ndarray) -> np.ndarray:
    """Run the 10-round Philox4x64 bijection.

    ``counter`` has shape (..., 4) and ``key`` shape (..., 2), both uint64;
    the result has the counter's shape. Matches numpy's Philox bit-for-bit.
    """
    x0 = counter[..., 0].copy()
    x1 = counter[..., 1].copy()
    x2 = counter[..., 2].copy()
    x3 = counter[..., 3].copy()
    k0 = key[..., 0].copy()
    k1 = key[..., 1].copy()
    for _ in range(10):
        hi0, lo0 = _mulhilo(_M0, x0)
        hi1, lo1 = _mulhilo(_M1, x2)
        x0 = hi1 ^ x1 ^ k0
        x1 = lo1
        x2 = hi0 ^ x3 ^ k1
        x3 = lo0
        k0 = k0 + _W0
        k1 = k1 + _W1
    return np.stack([x0, x1, x2, x3], axis=-1)


def raw_words(seed: int, streams: np.ndarray, n_words: int, first_word: int = 0) -> np.ndarray:
    """Raw uint64 words ``[first_word, first_word + n_words)`` for each stream.

    ``streams`` is a 1-d array of stream indices; the result has shape
    ``(len(streams), n_words)``. Word ``w`` lives in block ``w // 4``.
    """
    streams = np.asarray(streams, dtype=np.uint64)
    first_block = first_word // 4
    last_block = (first_word + n_words - 1) // 4
    n_blocks = last_block - first_block + 1
    counter = np.zeros((streams.shape[0], n_blocks, 4), dtype=np.uint64)
    # numpy's Philox pre-increments: block b is generated from counter b+1
    counter[:, :, 0] = np.arange(first_block + 1, last_block + 2, dtype=np.uint64)
    key = np.empty((streams.shape[0], n_blocks, 2), dtype=np.uint64)
    key[:, :, 0] = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    key[:, :, 1] = streams[:, None]
    words = philox4x64(counter, key).reshape(streams.shape[0], n_blocks * 4)
    lo = first_word - 4 * first_block
    return words[:, lo:lo + n_words]


def uniforms(seed: int, streams: np.ndarray, n: int, first: int = 0) -> np.ndarray:
    """Uniform float64 in [0, 1): draws ``[first, first + n)`` of each stream."""
    words = raw_words(seed, streams, n, first)
    return (words >> _U53).astype(np.float64) * _INV53


class Stream:
    """One reproducible stream: draw ``j`` depends only on (seed, index, j)."""

    def __init__(self, seed: int, index: int):
        self.seed = int(seed)
        self.index = int(index)
        self._pos = 0

    def uniforms(self, n: int) -> np.ndarray:
        """Next ``n`` uniform doubles, advancing the stream position."""
        out = uniforms(self.seed, np.array([self.index], dtype=np.uint64), n, self._pos)[0]
        self._pos += n
        return out

    def reset(self) -> None:
        self._pos = 0
