"""Deterministic seeding and Gaussian sampling.

Every random quantity in the package is derived from an integer seed in a
documented way so that results are reproducible from configuration alone:

* seed derivation: SHA-256 over the '|'-joined canonical tokens of the
  parts (ints via repr, floats via float.hex so the exact bits are hashed,
  strings verbatim), truncated to 63 bits;
* uniform doubles: the PCG64 bit generator seeded through
  ``numpy.random.SeedSequence(seed)``, each double being
  ``(next_uint64 >> 11) * 2**-53``;
* normals: an explicit Box-Muller transform over those doubles.

The Box-Muller transform consumes exactly two uniforms per pair of
normals, so sample i of a batch occupies a fixed slice of the uniform
stream.  A parallel worker can therefore regenerate sample i alone by
advancing the bit generator to the start of its slice.  Bit-exact
reproducibility is guaranteed within one build; across platforms it is
best effort (libm differences in log/cos/sin may flip the last ulp).
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK63 = (1 << 63) - 1


def _canonical_token(value) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans are not valid seed parts")
    if isinstance(value, (int, np.integer)):
        return repr(int(value))
    if isinstance(value, (float, np.floating)):
        return float(value).hex()
    if isinstance(value, str):
        return value
    raise TypeError(f"cannot canonicalize seed part of type {type(value)!r}")


def derive_seed(*parts) -> int:
    """Hash a tuple of ints/floats/strings into a 63-bit seed."""
    canon = "|".join(_canonical_token(p) for p in parts)
    digest = hashlib.sha256(canon.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & _MASK63


def uniform_generator(seed: int) -> np.random.Generator:
    """PCG64 generator for the given non-negative integer seed."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def _box_muller(u1: np.ndarray, u2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # 1-u1 maps [0,1) to (0,1], keeping the log argument positive.
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = (2.0 * np.pi) * u2
    return radius * np.cos(angle), radius * np.sin(angle)


def normal_matrix(n: int, d: int, seed: int) -> np.ndarray:
    """(n, d) matrix of independent standard normals.

    Row i is produced from uniforms [i*c, (i+1)*c) of the seed's stream,
    where c = 2*ceil(d/2); consecutive uniforms (2j, 2j+1) of a row yield
    the normal pair (2j, 2j+1) via Box-Muller.
    """
    if n < 1 or d < 1:
        raise ValueError("normal_matrix requires n >= 1 and d >= 1")
    pairs = (d + 1) // 2
    stride = 2 * pairs
    u = uniform_generator(seed).random(n * stride).reshape(n, stride)
    z0, z1 = _box_muller(u[:, 0::2], u[:, 1::2])
    out = np.empty((n, stride))
    out[:, 0::2] = z0
    out[:, 1::2] = z1
    return out[:, :d]
