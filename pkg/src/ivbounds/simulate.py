"""Double-hurdle data generator with analytic ground truth.

Treatment requires clearing two latent thresholds, both shifted by the
instrument: ``D = 1{V1 <= 2Z, V2 > Z}``.  The instrument raises one
threshold while lowering the other, so all four compliance types coexist
and monotonicity fails by construction.  Outcomes follow ``Y = beta*D + U``
with ``beta = beta_scale * Phi(2 V1 + V2)`` and ``U = u_scale *(V1 + V2)``,
so exclusion and (at ``rho = 0``) random assignment hold.

Generation is chunked with one counter-based random stream per chunk
(Philox keyed by ``(seed, chunk index)``), so results are bit-identical
for any execution order or worker count.  Uniforms are mapped to normals
by the inverse normal cdf; the 53-bit integer draw is offset by half a
step to stay strictly inside (0, 1).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr, ndtri

from .data import Sample
from .errors import EmptyTypeError, NonPsdCovarianceError, NotAnalyticError
from .sets import TypeProbabilities

__all__ = [
    "DgpConfig",
    "Latents",
    "McTruth",
    "SimulatedRecord",
    "SimulationResult",
    "TYPE_LABELS",
    "analytic_truth",
    "mc_truth",
    "simulate",
]

#: Type codes used in the latent arrays: a=0, c=1, df=2, n=3.
TYPE_LABELS = ("a", "c", "df", "n")

_CHUNK = 1 << 20  # rows per random stream; fixed protocol constant


@dataclass(frozen=True)
class DgpConfig:
    """Configuration of the double-hurdle generator.

    ``rho`` correlates each latent cost with the instrument shock.  At
    ``rho = 0`` the three latents are independent standard normals; for
    any other value the two costs also carry their design correlation 0.5.
    Both covariance variants are explicit cases, never interpolated.
    """

    n: int
    seed: int
    rho: float = 0.0
    beta_scale: float = 5.0
    u_scale: float = 0.5

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"n = {self.n} must be positive")
        cov = self.covariance()
        eigmin = float(np.linalg.eigvalsh(cov).min())
        if eigmin < -1e-12:
            raise NonPsdCovarianceError(
                f"latent covariance has negative eigenvalue {eigmin:.3g} (rho={self.rho})"
            )

    def covariance(self) -> np.ndarray:
        if self.rho == 0.0:
            return np.eye(3)
        r = self.rho
        return np.array([[1.0, 0.5, r], [0.5, 1.0, r], [r, r, 1.0]])


class SimulatedRecord(NamedTuple):
    """One simulated row with its latent state."""

    y: float
    d: int
    z: int
    v1: float
    v2: float
    eps: float
    d0: int
    d1: int
    t: str
    y1: float
    y0: float


@dataclass
class Latents:
    """Column store of the latent state behind a simulated sample."""

    v1: np.ndarray
    v2: np.ndarray
    eps: np.ndarray
    d0: np.ndarray
    d1: np.ndarray
    t: np.ndarray  # type codes into TYPE_LABELS
    y1: np.ndarray
    y0: np.ndarray

    @property
    def n(self) -> int:
        return self.v1.size

    def type_shares(self) -> TypeProbabilities:
        counts = np.bincount(self.t, minlength=4)
        p = counts / self.n
        return TypeProbabilities(p_a=p[0], p_c=p[1], p_df=p[2], p_n=p[3])


@dataclass
class SimulationResult:
    sample: Sample
    latents: Latents
    config: DgpConfig

    def record(self, i: int) -> SimulatedRecord:
        la = self.latents
        return SimulatedRecord(
            y=float(self.sample.y[i]), d=int(self.sample.d[i]), z=int(self.sample.z[i]),
            v1=float(la.v1[i]), v2=float(la.v2[i]), eps=float(la.eps[i]),
            d0=int(la.d0[i]), d1=int(la.d1[i]), t=TYPE_LABELS[la.t[i]],
            y1=float(la.y1[i]), y0=float(la.y0[i]),
        )


def _chunk_normals(seed: int, chunk: int, rows: int) -> np.ndarray:
    """Three standard-normal columns from the (seed, chunk) stream."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, chunk], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    ints = rng.integers(0, 1 << 53, size=(rows, 3), dtype=np.int64)
    return ndtri((ints + 0.5) * (1.0 / (1 << 53)))


def simulate(config: DgpConfig, threads: int | None = None) -> SimulationResult:
    """Draw a sample with its latent state, deterministically in the seed.

    ``threads`` controls how many chunk workers run at once (default from
    ``IVBOUNDS_THREADS``, falling back to 1); the output is identical for
    every thread count because each chunk owns its stream.
    """
    if threads is None:
        threads = max(1, int(os.environ.get("IVBOUNDS_THREADS", "1")))
    n = config.n
    chol = np.linalg.cholesky(config.covariance())
    identity = config.rho == 0.0

    v1 = np.empty(n)
    v2 = np.empty(n)
    eps = np.empty(n)

    def fill(chunk: int) -> None:
        start = chunk * _CHUNK
        stop = min(start + _CHUNK, n)
        x = _chunk_normals(config.seed, chunk, stop - start)
        if not identity:
            x = x @ chol.T
        v1[start:stop], v2[start:stop], eps[start:stop] = x[:, 0], x[:, 1], x[:, 2]

    chunks = range((n + _CHUNK - 1) // _CHUNK)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, chunks))
    else:
        for c in chunks:
            fill(c)

    z = (eps > 0.0).astype(np.int8)
    d0 = ((v1 <= 0.0) & (v2 > 0.0)).astype(np.int8)
    d1 = ((v1 <= 2.0) & (v2 > 1.0)).astype(np.int8)
    d = np.where(z == 1, d1, d0).astype(np.int8)
    beta = config.beta_scale * ndtr(2.0 * v1 + v2)
    u = config.u_scale * (v1 + v2)
    y1 = beta + u
    y0 = u.copy()
    y = np.where(d == 1, y1, y0)

    t = np.empty(n, dtype=np.int8)
    t[(d0 == 1) & (d1 == 1)] = 0
    t[(d0 == 0) & (d1 == 1)] = 1
    t[(d0 == 1) & (d1 == 0)] = 2
    t[(d0 == 0) & (d1 == 0)] = 3

    sample = Sample(y, d, z)
    latents = Latents(v1=v1, v2=v2, eps=eps, d0=d0, d1=d1, t=t, y1=y1, y0=y0)
    return SimulationResult(sample=sample, latents=latents, config=config)


def analytic_truth(config: DgpConfig) -> TypeProbabilities:
    """Closed-form type shares for the independent-latent design.

    With independent standard-normal costs the potential treatments are
    threshold events, so each share is a product of normal cdf values.
    Only valid at ``rho = 0``.
    """
    if config.rho != 0.0:
        raise NotAnalyticError("closed-form type shares require rho = 0")
    phi0, phi1, phi2 = float(ndtr(0.0)), float(ndtr(1.0)), float(ndtr(2.0))
    p_a = phi0 * (1.0 - phi1)
    p_df = phi0 * (phi1 - phi0)
    p_c = phi2 * (1.0 - phi1) - p_a
    p_n = 1.0 - p_a - p_df - p_c
    return TypeProbabilities(p_a=p_a, p_c=p_c, p_df=p_df, p_n=p_n)


class McTruth(NamedTuple):
    """Monte Carlo ground truth computed from retained latents."""

    late_c: float
    late_df: float
    ate: float
    probs: TypeProbabilities


def mc_truth(latents: Latents) -> McTruth:
    """Type-conditional average effects of treatment from the latent state."""
    effect = latents.y1 - latents.y0
    means = {}
    for code, label in enumerate(TYPE_LABELS):
        mask = latents.t == code
        if label in ("c", "df") and not mask.any():
            raise EmptyTypeError(f"no simulated draws of type {label!r}")
        means[label] = float(effect[mask].mean()) if mask.any() else float("nan")
    return McTruth(
        late_c=means["c"],
        late_df=means["df"],
        ate=float(effect.mean()),
        probs=latents.type_shares(),
    )
