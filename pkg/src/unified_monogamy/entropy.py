"""Unified-(q, s) entropy and its Rényi, Tsallis and von Neumann limits.

``S_{q,s}(rho) = [(tr rho^q)^s - 1] / ((1 - q) s)`` is singular at ``q = 1`` and
``s = 0``.  Inside a narrow window around each singular locus the limit formula
is used instead.  All logarithms are natural, which is what the general formula
converges to; use ``base=2`` on the standalone helpers to get bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import normalize_spectrum

TAU_Q = 1e-6
TAU_S = 1e-9

UNIFIED = "unified"
RENYI = "renyi-limit"
TSALLIS = "tsallis-limit"
VON_NEUMANN = "von-neumann-limit"


class EntropyError(ValueError):
    pass


@dataclass(frozen=True)
class EntropyParams:
    q: float
    s: float

    def __post_init__(self):
        q, s = float(self.q), float(self.s)
        if not (math.isfinite(q) and math.isfinite(s)) or q < 0 or s < 0:
            raise EntropyError(f"q and s must be finite and nonnegative, got q={self.q}, s={self.s}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "s", s)

    @property
    def regime(self) -> str:
        if abs(self.q - 1.0) < TAU_Q:
            return VON_NEUMANN
        if self.s < TAU_S:
            return RENYI
        if self.s == 1.0:
            return TSALLIS
        return UNIFIED

    def as_dict(self) -> dict:
        return {"q": self.q, "s": self.s, "regime": self.regime}


@dataclass(frozen=True)
class MonogamyDomainFlag:
    monogamy_valid: bool
    polygamy_valid: bool


def classify_domain(p: EntropyParams) -> MonogamyDomainFlag:
    """Parameter regions where the plain monogamy / polygamy inequalities are known to hold."""
    q, s = p.q, p.s
    mono = q >= 2 and 0 <= s <= 1 and q * s <= 3
    poly = 1 <= q <= 2 and -q * q + 4 * q - 3 <= s <= 1
    return MonogamyDomainFlag(bool(mono), bool(poly))


def _power_sum(lam: np.ndarray, q: float) -> np.ndarray:
    """``sum_i lam_i^q`` over strictly positive entries along the last axis."""
    pos = lam > 0
    safe = np.where(pos, lam, 1.0)
    return np.sum(np.where(pos, safe**q, 0.0), axis=-1)


def _xlogx(lam: np.ndarray) -> np.ndarray:
    pos = lam > 0
    safe = np.where(pos, lam, 1.0)
    return np.where(pos, safe * np.log(safe), 0.0)


def entropy_values(probs: np.ndarray, p: EntropyParams) -> np.ndarray:
    """Unified entropy of each normalized probability vector along the last axis.

    No validation is performed; callers guarantee nonnegative, unit-sum rows.
    """
    probs = np.asarray(probs, dtype=float)
    q, s = p.q, p.s
    regime = p.regime
    if regime == VON_NEUMANN:
        h = -np.sum(_xlogx(probs), axis=-1)
        eps = 1.0 - q
        if eps == 0.0:
            return np.maximum(h, 0.0)
        # first-order expansion in (1 - q) keeps the seam with the general formula continuous
        pos = probs > 0
        safe = np.where(pos, probs, 1.0)
        l2 = np.sum(np.where(pos, safe * np.log(safe) ** 2, 0.0), axis=-1)
        return np.maximum(h + 0.5 * eps * (l2 - (1.0 - s) * h * h), 0.0)
    t = _power_sum(probs, q)
    log_t = np.log(t)
    if regime == RENYI:
        # first-order term in s, for the same reason as above
        return np.maximum(log_t * (1.0 + 0.5 * s * log_t) / (1.0 - q), 0.0)
    return np.maximum(np.expm1(s * log_t) / ((1.0 - q) * s), 0.0)


def unified_entropy(spectrum, p: EntropyParams) -> float:
    """Unified-(q, s) entropy of a density-matrix spectrum.

    Parameters
    ----------
    spectrum : array_like
        Eigenvalues of a density matrix.  Tiny negative noise is clipped and the
        vector renormalized; anything worse raises ``ValueError``.
    p : EntropyParams

    Returns
    -------
    float
        Nonnegative entropy in nats (limit branches) or the dimensionless
        unified value.
    """
    lam = normalize_spectrum(spectrum)
    return float(entropy_values(lam, p))


def von_neumann_entropy(spectrum, base: float = math.e) -> float:
    lam = normalize_spectrum(spectrum)
    return float(-np.sum(_xlogx(lam)) / math.log(base))


def renyi_entropy(spectrum, q: float, base: float = math.e) -> float:
    if q < 0:
        raise EntropyError("q must be nonnegative")
    lam = normalize_spectrum(spectrum)
    if abs(q - 1.0) < TAU_Q:
        return von_neumann_entropy(lam, base)
    return float(np.log(_power_sum(lam, q)) / ((1.0 - q) * math.log(base)))


def tsallis_entropy(spectrum, q: float) -> float:
    return unified_entropy(spectrum, EntropyParams(q, 1.0))


def entropy_gradient(lam: np.ndarray, weight: np.ndarray, p: EntropyParams) -> np.ndarray:
    """Derivative of ``weight * S(lam / weight)`` with respect to unnormalized eigenvalues.

    ``lam`` has shape ``(n, d)`` holding nonnegative eigenvalues of unnormalized
    reduced operators whose traces are ``weight`` (shape ``(n,)``).  Used by the
    convex-roof optimizer; the von Neumann window uses the exact ``q = 1`` form.
    """
    w = weight[:, None]
    x = lam / w
    q, s = p.q, p.s
    regime = p.regime
    if regime == VON_NEUMANN:
        return -np.log(np.maximum(x, 1e-300))
    t = _power_sum(x, q)[:, None]
    xq1 = np.where(x > 0, np.maximum(x, 1e-300) ** (q - 1.0), 0.0 if q > 1 else np.inf)
    if q < 1:
        xq1 = np.minimum(xq1, 1e300)
    if regime == RENYI:
        val = np.log(t) / (1.0 - q)
        return val + q * (xq1 - t) / ((1.0 - q) * t)
    val = np.expm1(s * np.log(t)) / ((1.0 - q) * s)
    return val + t ** (s - 1.0) * q * (xq1 - t) / (1.0 - q)
