"""
Fading channel realizations and the canonical SIC user ordering.

A channel is described by a :class:`ChannelModel` (deterministic, Rayleigh
or Rician) and drawn into a :class:`UserChannel` using a seeded
``numpy.random.Generator``.  Monte Carlo code obtains one generator per
(trial, link) pair from :func:`substream`, so a trial's draws never depend
on how trials are batched or scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ChannelModel",
    "UserChannel",
    "SicOrdering",
    "sample_channel",
    "sample_gains",
    "substream",
    "order_users",
    "order_strengths",
]


@dataclass(frozen=True)
class ChannelModel:
    """Static description of one link's fading law.

    Parameters
    ----------
    kind : {"deterministic", "rayleigh", "rician"}
    mean_square_gain : float
        E{|h|^2} per entry for the random models.
    k_factor : float
        Rician K-factor (LOS power over scattered power).
    value : complex or array_like, optional
        The fixed gain of a deterministic model.
    noise_psd : float
        Noise (plus aggregate interference) spectral density, W/Hz.
    shape : tuple of int
        ``()`` for a scalar gain, ``(M,)`` for a vector, ``(N, M)`` for a
        matrix.  Ignored for deterministic models (taken from ``value``).
    """

    kind: str
    mean_square_gain: float = 1.0
    k_factor: float = 0.0
    value: object = None
    noise_psd: float = 1.0
    shape: tuple = ()

    def __post_init__(self):
        if self.kind not in ("deterministic", "rayleigh", "rician"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not self.noise_psd > 0:
            raise ValueError("noise_psd must be > 0")
        if self.kind == "deterministic":
            if self.value is None:
                raise ValueError("deterministic model needs a value")
            v = np.asarray(self.value, dtype=complex)
            if not np.all(np.isfinite(v)):
                raise ValueError("deterministic gain must be finite")
        else:
            if not self.mean_square_gain > 0:
                raise ValueError("mean_square_gain must be > 0")
            if not self.k_factor >= 0:
                raise ValueError("k_factor must be >= 0")

    @classmethod
    def deterministic(cls, value, noise_psd=1.0):
        return cls("deterministic", value=value, noise_psd=noise_psd)

    @classmethod
    def rayleigh(cls, mean_square_gain=1.0, noise_psd=1.0, shape=()):
        return cls("rayleigh", mean_square_gain=mean_square_gain,
                   noise_psd=noise_psd, shape=tuple(shape))

    @classmethod
    def rician(cls, k_factor, mean_square_gain=1.0, noise_psd=1.0, shape=()):
        return cls("rician", mean_square_gain=mean_square_gain,
                   k_factor=k_factor, noise_psd=noise_psd, shape=tuple(shape))


@dataclass(frozen=True)
class UserChannel:
    """One user's channel for one fading draw.

    ``gain`` is a complex ndarray; its dimensionality selects the form
    (0-d scalar, 1-d vector, 2-d ``N x M`` matrix).
    """

    gain: np.ndarray
    noise_psd: float = 1.0

    def __post_init__(self):
        g = np.asarray(self.gain, dtype=complex)
        if g.ndim > 2:
            raise ValueError("gain must be a scalar, vector or matrix")
        if not np.all(np.isfinite(g)):
            raise ValueError("gain must be finite")
        if not self.noise_psd > 0:
            raise ValueError("noise_psd must be > 0")
        object.__setattr__(self, "gain", g)

    @classmethod
    def scalar(cls, gain, noise_psd=1.0):
        return cls(np.asarray(gain, dtype=complex).reshape(()), noise_psd)

    @property
    def form(self):
        return ("scalar", "vector", "matrix")[self.gain.ndim]

    @property
    def power_gain(self):
        """|h|^2 for a scalar channel, ||h||^2 otherwise."""
        return float(np.sum(np.abs(self.gain) ** 2))

    @property
    def strength(self):
        """|h|^2 / noise_psd, the quantity that fixes the SIC order."""
        return self.power_gain / self.noise_psd


@dataclass(frozen=True)
class SicOrdering:
    """Decoding order, position 0 holding the strongest user."""

    order: tuple = field(default_factory=tuple)

    def __post_init__(self):
        order = tuple(int(i) for i in self.order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(f"{order} is not a permutation")
        object.__setattr__(self, "order", order)

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def position(self, user):
        return self.order.index(user)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))


def substream(seed, trial, stream=0):
    """Independent generator for one (trial, stream) pair.

    The derivation is a pure function of its three integers, so any worker
    can regenerate trial ``t`` without touching other trials.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(trial), int(stream)))
    return np.random.default_rng(ss)


def _unit_cn(rng, shape):
    # Both random models consume exactly 2*prod(shape) normals.
    x = rng.standard_normal((2,) + tuple(shape))
    return (x[0] + 1j * x[1]) / np.sqrt(2.0)


def sample_gains(model, rng, size=None):
    """Draw raw complex gains with shape ``size + model.shape``."""
    lead = () if size is None else (size,) if np.isscalar(size) else tuple(size)
    if model.kind == "deterministic":
        v = np.asarray(model.value, dtype=complex)
        return np.broadcast_to(v, lead + v.shape).copy()
    shape = lead + tuple(model.shape)
    scattered = _unit_cn(rng, shape)
    if model.kind == "rayleigh":
        return np.sqrt(model.mean_square_gain) * scattered
    k = model.k_factor
    los = np.sqrt(k / (k + 1.0) * model.mean_square_gain)
    return los + np.sqrt(model.mean_square_gain / (k + 1.0)) * scattered


def sample_channel(model, rng):
    """Draw one :class:`UserChannel` from ``model``."""
    return UserChannel(sample_gains(model, rng), model.noise_psd)


def order_strengths(strengths):
    """Indices sorted by strength, descending; ties keep the lower index first."""
    s = np.asarray(strengths, dtype=float)
    return SicOrdering(tuple(np.argsort(-s, kind="stable")))


def order_users(channels):
    """Canonical SIC order of scalar-gain users by |h|^2 / noise_psd."""
    channels = list(channels)
    if not channels:
        raise ValueError("need at least one user")
    for ch in channels:
        if ch.form != "scalar":
            raise ValueError("order_users needs scalar-gain channels")
    return order_strengths([ch.strength for ch in channels])
