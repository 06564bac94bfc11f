"""Linear ZF / RZF precoding over square QAM and a Monte-Carlo SER harness.

Transmission model: ``y = sqrt(E) H x + v`` with ``x = g W s``. The gain
``g = sqrt(N) / ||W||_F`` fixes the mean transmit energy per block at N
(one per stream) for every realization. ``v`` has variance ``σ² = E / snr``
per entry, and we take ``E = 1``. Each receiver scales by its known
effective gain ``sqrt(E) g [H W]_kk`` before nearest-point detection.
"""
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from . import rng as _rng
from .channels import ChannelConfig, generate
from .errors import DimensionError, ValidationError
from .inversion import METHODS, invert
from .matrix import as_matrix, gram
from .regularizers import rzf_matrix
from .schulz import SchulzConfig

QAM_ORDERS = (4, 16, 64, 256)


def _gray_to_binary(g):
    b = g.copy()
    shift = g >> 1
    while np.any(shift):
        b ^= shift
        shift >>= 1
    return b


@dataclass(frozen=True)
class QamConstellation:
    """Square Gray-mapped QAM with unit average energy.

    Symbol index bits split into an in-phase half (high bits) and a
    quadrature half (low bits); each half is Gray-decoded to a level.
    """

    order: int
    points: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.order not in QAM_ORDERS:
            raise ValidationError(f"QAM order must be one of {QAM_ORDERS}")
        side = math.isqrt(self.order)
        bits = side.bit_length() - 1
        k = np.arange(self.order)
        li = _gray_to_binary(k >> bits)
        lq = _gray_to_binary(k & (side - 1))
        amp = lambda lev: 2.0 * lev - (side - 1)
        scale = math.sqrt(2.0 * (self.order - 1) / 3.0)
        pts = (amp(li) + 1j * amp(lq)) / scale
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


def qam_modulate(indices, constellation):
    idx = np.asarray(indices)
    if idx.size and (idx.min() < 0 or idx.max() >= constellation.order):
        raise ValidationError("symbol index out of range")
    return constellation.points[idx]


def qam_demodulate(received, constellation):
    """Nearest constellation point; ties go to the lower index."""
    r = np.asarray(received, dtype=np.complex128)
    return kernels.qam_nearest(r, constellation.points).reshape(r.shape)


def zf_precoder(h, a_inv):
    """``W = Hᴴ A⁻¹``."""
    h = as_matrix(h)
    a_inv = as_matrix(a_inv)
    if a_inv.shape != (h.shape[0], h.shape[0]):
        raise DimensionError(f"A_inv must be {h.shape[0]}x{h.shape[0]}, got {a_inv.shape}")
    return h.conj().T @ a_inv


def rzf_precoder(h, snr, method="oracle", **invert_kw):
    """``W = Hᴴ (A + snr⁻¹ I)⁻¹`` with the inverse from ``method``."""
    h = as_matrix(h)
    r = rzf_matrix(gram(h), snr)
    return h.conj().T @ invert(r, method, **invert_kw).inverse


def power_gain(w):
    """Gain normalizing ``||g W||_F² = N``."""
    n = w.shape[1]
    return math.sqrt(n) / float(np.linalg.norm(w))


@dataclass(frozen=True)
class PrecoderConfig:
    precoder: str = "zf"
    method: str = "oracle"
    fixed_iterations: int = None
    residual_tolerance: float = 1e-9
    max_iterations: int = 200
    tau: int = 1
    candidates: int = 4
    qam_order: int = 16
    realizations: int = 200

    def __post_init__(self):
        if self.precoder not in ("zf", "rzf"):
            raise ValidationError(f"precoder must be 'zf' or 'rzf', got {self.precoder!r}")
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}")
        if self.qam_order not in QAM_ORDERS:
            raise ValidationError(f"qam_order must be one of {QAM_ORDERS}")
        if self.realizations < 1:
            raise ValidationError("realizations must be >= 1")

    @property
    def schulz(self):
        return SchulzConfig(self.residual_tolerance, self.max_iterations, self.fixed_iterations)


@dataclass(frozen=True)
class SerResult:
    snr_db: float
    symbol_errors: int
    symbols_sent: int

    @property
    def ser(self):
        return self.symbol_errors / self.symbols_sent if self.symbols_sent else 0.0

    @property
    def stderr(self):
        p = self.ser
        return math.sqrt(p * (1.0 - p) / self.symbols_sent) if self.symbols_sent else 0.0

    def to_dict(self):
        d = asdict(self)
        d["ser"] = self.ser
        return d


def snr_linear(snr_db):
    return math.inf if math.isinf(snr_db) and snr_db > 0 else 10.0 ** (snr_db / 10.0)


def build_precoder(h, snr, cfg, seed=0):
    """Precoding matrix for one channel realization at linear ``snr``."""
    a = gram(h)
    if cfg.precoder == "rzf" and not math.isinf(snr):
        a = rzf_matrix(a, snr)
    rep = invert(a, cfg.method, config=cfg.schulz, tau=cfg.tau,
                 candidates=cfg.candidates, seed=seed)
    return h.conj().T @ rep.inverse


def transmit(h, w, symbols, noise, snr):
    """Received, gain-compensated symbol estimates for columns of ``symbols``.

    ``noise`` is unit-variance complex Gaussian of the same shape; it is
    scaled by ``sqrt(1 / snr)``.
    """
    g = power_gain(w)
    hw = h @ w
    y = g * (hw @ symbols)
    if not math.isinf(snr):
        y = y + noise / math.sqrt(snr)
    eff = g * np.diag(hw)
    return y / eff[:, None]


def ser_experiment(channel_config, precoder_config, snr_db_list, symbols_per_point, seed):
    """SER per SNR point, averaged over ``precoder_config.realizations`` channels.

    Channels, symbols and noise for realization ``r`` are drawn from streams
    keyed by ``(seed, r)`` only, so every SNR point and every precoder sees
    the same random draws.
    """
    if symbols_per_point < 1:
        raise ValidationError("symbols_per_point must be >= 1")
    cfg = precoder_config
    const = QamConstellation(cfg.qam_order)
    n = channel_config.N
    reals = cfg.realizations
    blocks = max(1, math.ceil(symbols_per_point / (reals * n)))
    snrs = [float(s) for s in snr_db_list]
    errors = np.zeros(len(snrs), dtype=np.int64)
    sent = np.zeros(len(snrs), dtype=np.int64)
    for r in range(reals):
        h = generate(channel_config, _rng.derive_seed(seed, _rng.CHANNEL, r)).H
        idx = _rng.stream(seed, _rng.SYMBOLS, r).integers(0, const.order, size=(n, blocks))
        s = const.points[idx]
        noise = _rng.complex_normal(_rng.stream(seed, _rng.NOISE, r), (n, blocks))
        inv_seed = _rng.derive_seed(seed, _rng.TRIAL, r)
        w_zf = None
        for k, snr_db in enumerate(snrs):
            snr = snr_linear(snr_db)
            if cfg.precoder == "zf":
                if w_zf is None:
                    w_zf = build_precoder(h, snr, cfg, inv_seed)
                w = w_zf
            else:
                w = build_precoder(h, snr, cfg, inv_seed)
            est = transmit(h, w, s, noise, snr)
            det = qam_demodulate(est, const)
            errors[k] += int(np.count_nonzero(det != idx))
            sent[k] += idx.size
    return [SerResult(snr_db, int(e), int(t)) for snr_db, e, t in zip(snrs, errors, sent)]
