"""Seeded, platform-stable random draws.

All randomness in the package flows through these helpers.  Uniform bits
come from numpy's Philox 4x64 counter-based generator, whose stream is
guaranteed stable across platforms and numpy releases; Gaussians are then
produced with an explicit Box-Muller transform rather than the
generator-version-dependent ziggurat, so noise realizations reproduce
bit-for-bit anywhere for a given seed.
"""

from __future__ import annotations

import numpy as np


def uniforms(n: int, seed: int) -> np.ndarray:
    """``n`` doubles in [0, 1) from a Philox stream keyed by ``seed``."""
    gen = np.random.Generator(np.random.Philox(seed))
    return gen.random(n)


def normals(n: int, seed: int) -> np.ndarray:
    """``n`` standard normal draws via Box-Muller on Philox uniforms."""
    m = (n + 1) // 2
    u = uniforms(2 * m, seed)
    u1 = u[:m]
    u2 = u[m:]
    # 1 - u1 lies in (0, 1]: log argument never hits zero
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return z[:n]
