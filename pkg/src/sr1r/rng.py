"""Seeded random streams.

Every random draw in the package comes from ``stream(seed, *ids)``: a Philox
4x64 counter-based generator keyed by ``SeedSequence(seed, spawn_key=ids)``.
Both pieces are fully specified algorithms, so a (seed, ids) pair names the
same sequence of uniforms on every platform. Gaussians are produced by
Box-Muller from those uniforms in a fixed order instead of numpy's ziggurat.
"""
import numpy as np

# stream ids, kept distinct so sub-computations never share draws
POWER_DOMINANT = 1
POWER_SHIFTED = 2
CHANNEL = 10
CHANNEL_LOS = 11
CHANNEL_STATE = 12
CHANNEL_SHADOW = 13
SYMBOLS = 20
NOISE = 21
RANKK_NOISE = 30
TRIAL = 40


def stream(seed, *ids):
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(i) for i in ids))
    return np.random.Generator(np.random.Philox(ss))


def uniform_open(gen, size):
    """Uniforms on (0, 1]."""
    return 1.0 - gen.random(size)


def standard_normal(gen, size):
    """Real N(0, 1) via Box-Muller; draws ``2 * ceil(n / 2)`` uniforms."""
    shape = (size,) if np.isscalar(size) else tuple(size)
    n = int(np.prod(shape))
    half = (n + 1) // 2
    u = uniform_open(gen, 2 * half)
    r = np.sqrt(-2.0 * np.log(u[:half]))
    ang = 2.0 * np.pi * u[half:]
    z = np.empty(2 * half)
    z[0::2] = r * np.cos(ang)
    z[1::2] = r * np.sin(ang)
    return z[:n].reshape(shape)


def complex_normal(gen, size):
    """Circularly-symmetric complex Gaussian, unit variance (E|z|² = 1)."""
    shape = (size,) if np.isscalar(size) else tuple(size)
    z = standard_normal(gen, (2,) + shape)
    return (z[0] + 1j * z[1]) / np.sqrt(2.0)


def derive_seed(seed, *ids):
    """A 63-bit integer seed for a sub-task, reproducible from (seed, ids)."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(i) for i in ids))
    return int(ss.generate_state(2, dtype=np.uint64)[0] >> np.uint64(1))
