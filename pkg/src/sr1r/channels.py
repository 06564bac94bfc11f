"""Seeded channel generators: i.i.d. Rayleigh, i.i.d. Rician, and a
geometric surrogate for extra-large-aperture (ELAA) arrays.

Every generator returns ``H`` of shape ``(N, M)`` (N receive streams, M
base-station antennas) scaled so that ``||H||_F² = N``.
"""
from dataclasses import asdict, dataclass, field, replace
from enum import Enum

import numpy as np

from . import rng as _rng
from .errors import ValidationError

SPEED_OF_LIGHT = 299_792_458.0


class ChannelModel(str, Enum):
    RAYLEIGH = "rayleigh"
    RICIAN = "rician"
    ELAA_LOS = "elaa_los"
    ELAA_MIXED = "elaa_mixed"


@dataclass(frozen=True)
class Geometry:
    user_height: float = 1.5
    bs_height: float = 10.0
    distance: float = 40.0
    max_inter_user_distance: float = 10.0
    carrier_frequency: float = 3.5e9

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_frequency


@dataclass(frozen=True)
class ChannelConfig:
    model: ChannelModel = ChannelModel.RAYLEIGH
    M: int = 64
    N: int = 64
    rician_k_factor: float = 10.0
    users: int = 1
    antennas_per_user: int = 0
    geometry: Geometry = field(default_factory=Geometry)
    # LoS probability min(1, s / d); inf forces every link to LoS
    los_probability_scale: float = 18.0
    nlos_penalty_db: float = 10.0
    shadowing_std_los_db: float = 4.0
    shadowing_std_nlos_db: float = 8.0
    bs_segments: int = 8

    def __post_init__(self):
        object.__setattr__(self, "model", ChannelModel(self.model))
        if self.antennas_per_user == 0:
            object.__setattr__(self, "antennas_per_user", self.N // max(self.users, 1))
        self.validate()

    def validate(self):
        if not 1 <= self.N <= self.M:
            raise ValidationError(f"need 1 <= N <= M, got N={self.N}, M={self.M}")
        if self.rician_k_factor < 0:
            raise ValidationError("rician_k_factor must be >= 0")
        if self.model in (ChannelModel.ELAA_LOS, ChannelModel.ELAA_MIXED):
            if self.users < 1 or self.users * self.antennas_per_user != self.N:
                raise ValidationError(
                    f"ELAA needs N = users * antennas_per_user, got {self.N} != "
                    f"{self.users} * {self.antennas_per_user}")
            if not self.los_probability_scale > 0:
                raise ValidationError("los_probability_scale must be positive")
            if not 1 <= self.bs_segments <= self.M:
                raise ValidationError("bs_segments must lie in [1, M]")
            g = self.geometry
            if min(g.distance, g.carrier_frequency, g.bs_height, g.user_height) <= 0:
                raise ValidationError("geometry values must be positive")

    @classmethod
    def preset(cls, name, **overrides):
        """Desk-scale defaults for each model; full-scale sizes via overrides."""
        model = ChannelModel(name)
        base = {
            ChannelModel.RAYLEIGH: dict(M=64, N=64),
            ChannelModel.RICIAN: dict(M=64, N=64, rician_k_factor=10.0),
            ChannelModel.ELAA_LOS: dict(M=64, N=16, users=1, antennas_per_user=16,
                                        los_probability_scale=float("inf")),
            ChannelModel.ELAA_MIXED: dict(M=128, N=128, users=8, antennas_per_user=16),
        }[model]
        base.update(overrides)
        return cls(model=model, **base)

    def to_dict(self):
        d = asdict(self)
        d["model"] = self.model.value
        return d


@dataclass(frozen=True)
class ChannelRealization:
    H: np.ndarray
    model: ChannelModel
    seed: int
    geometry: Geometry = None
    los_mask: np.ndarray = None

    @property
    def N(self):
        return self.H.shape[0]

    @property
    def M(self):
        return self.H.shape[1]


def normalize(h):
    """Scale ``H`` so that ``||H||_F² = N``. Already-normalized input is
    returned unchanged."""
    h = np.asarray(h, dtype=np.complex128)
    n = h.shape[0]
    energy = float(np.sum(h.real ** 2 + h.imag ** 2))
    if energy == 0.0:
        raise ValidationError("cannot normalize a zero channel")
    if abs(energy - n) <= 1e-12 * n:
        return h
    return h * np.sqrt(n / energy)


def _check_dims(M, N):
    if not 1 <= N <= M:
        raise ValidationError(f"need 1 <= N <= M, got N={N}, M={M}")


def rayleigh(M, N, seed, normalized=True):
    _check_dims(M, N)
    h = _rng.complex_normal(_rng.stream(seed, _rng.CHANNEL), (N, M))
    if normalized:
        h = normalize(h)
    return ChannelRealization(h, ChannelModel.RAYLEIGH, int(seed))


def steering_vector(n, sin_angle):
    """Half-wavelength uniform linear array response, unit-modulus entries."""
    return np.exp(-1j * np.pi * np.arange(n) * sin_angle)


def rician(M, N, k_factor, seed):
    """``sqrt(K/(K+1)) H_los + sqrt(1/(K+1)) H_nlos`` with a rank-1 LoS term.

    ``H_nlos`` uses the same stream as :func:`rayleigh`, so ``K = 0`` gives
    the Rayleigh realization for the same seed.
    """
    _check_dims(M, N)
    if k_factor < 0:
        raise ValidationError("k_factor must be >= 0")
    nlos = _rng.complex_normal(_rng.stream(seed, _rng.CHANNEL), (N, M))
    gen = _rng.stream(seed, _rng.CHANNEL_LOS)
    sin_rx, sin_tx = np.sin(np.pi * (gen.random(2) - 0.5))
    los = np.outer(steering_vector(N, sin_rx), steering_vector(M, sin_tx).conj())
    h = np.sqrt(k_factor / (k_factor + 1.0)) * los + np.sqrt(1.0 / (k_factor + 1.0)) * nlos
    return ChannelRealization(normalize(h), ChannelModel.RICIAN, int(seed))


def _positions(config):
    g = config.geometry
    lam = g.wavelength
    m = np.arange(config.M)
    bs = np.stack([(m - (config.M - 1) / 2) * lam / 2,
                   np.zeros(config.M),
                   np.full(config.M, g.bs_height)], axis=1)
    if config.users == 1:
        centers = np.zeros(1)
    else:
        centers = np.linspace(-g.max_inter_user_distance / 2, g.max_inter_user_distance / 2,
                              config.users)
    a = np.arange(config.antennas_per_user)
    offsets = (a - (config.antennas_per_user - 1) / 2) * lam / 2
    ux = (centers[:, None] + offsets[None, :]).ravel()
    ue = np.stack([ux, np.full(ux.shape, g.distance), np.full(ux.shape, g.user_height)], axis=1)
    return bs, ue


def elaa(config, seed):
    """Geometric ELAA surrogate.

    Users sit on a line parallel to a half-wavelength ULA at ``distance``
    metres. The array is split into ``bs_segments`` segments; each
    (user antenna, segment) pair draws a LoS state with probability
    ``min(1, s / d)`` and a log-normal shadowing term. LoS links carry the
    spherical-wave phase ``exp(-j 2π d / λ)`` with free-space gain, NLoS links
    a complex Gaussian with the same mean power less ``nlos_penalty_db``.
    The final Frobenius normalization removes path loss.
    """
    if config.model not in (ChannelModel.ELAA_LOS, ChannelModel.ELAA_MIXED):
        raise ValidationError(f"elaa() needs an ELAA model, got {config.model.value}")
    config.validate()
    g = config.geometry
    lam = g.wavelength
    bs, ue = _positions(config)
    d = np.linalg.norm(ue[:, None, :] - bs[None, :, :], axis=2)
    n, m = d.shape
    seg = np.minimum((np.arange(m) * config.bs_segments) // m, config.bs_segments - 1)
    seg_d = np.stack([d[:, seg == s].mean(axis=1) for s in range(config.bs_segments)], axis=1)

    scale = config.los_probability_scale
    p_los = np.ones_like(seg_d) if np.isinf(scale) else np.minimum(1.0, scale / seg_d)
    los_seg = _rng.stream(seed, _rng.CHANNEL_STATE).random(seg_d.shape) < p_los
    shadow_gen = _rng.stream(seed, _rng.CHANNEL_SHADOW)
    shadow_db = _rng.standard_normal(shadow_gen, seg_d.shape) * np.where(
        los_seg, config.shadowing_std_los_db, config.shadowing_std_nlos_db)

    los = los_seg[:, seg]
    amp = lam / (4.0 * np.pi * d) * 10.0 ** (shadow_db[:, seg] / 20.0)
    nlos_amp = amp * 10.0 ** (-config.nlos_penalty_db / 20.0)
    scatter = _rng.complex_normal(_rng.stream(seed, _rng.CHANNEL), (n, m))
    h = np.where(los, amp * np.exp(-2j * np.pi * d / lam), nlos_amp * scatter)
    return ChannelRealization(normalize(h), config.model, int(seed), g, los_seg)


def generate(config, seed):
    """Dispatch on ``config.model``."""
    model = config.model
    if model is ChannelModel.RAYLEIGH:
        return rayleigh(config.M, config.N, seed)
    if model is ChannelModel.RICIAN:
        return rician(config.M, config.N, config.rician_k_factor, seed)
    return elaa(config, seed)


def with_model(config, model, **overrides):
    return replace(config, model=ChannelModel(model), **overrides)
