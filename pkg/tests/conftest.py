"""Shared fixtures: hand samples, synthetic designs, and the study extract."""
import os
from pathlib import Path

import numpy as np
import pytest

from ivbounds import Sample, load_csv


@pytest.fixture
def hand8():
    """Eight rows, all four cells nonempty, positive first stage.

    Z=1 arm: treated {1, 2, 2.5}, untreated {3}; Z=0 arm: treated {5},
    untreated {6, 7, 8}.  First stage 0.5, p_a = 0.25, p_n = 0.25.
    """
    y = [1.0, 2.0, 2.5, 3.0, 5.0, 6.0, 7.0, 8.0]
    d = [1, 1, 1, 0, 1, 0, 0, 0]
    z = [1, 1, 1, 1, 0, 0, 0, 0]
    return Sample(y, d, z)


@pytest.fixture
def crossing100():
    """100 rows engineered so the envelope mean bound is strictly sharper.

    Treated sub-cdfs cross below the clip level: by hand, the pointwise
    minimum of the two normalized curves has mean 2.4, while the better
    single-arm trimmed mean is only 2.2 (arm z=1) or 2.1 (arm z=0), at
    defier share 0.3 (always-taker share 0.2).
    """
    y, d, z = [], [], []
    for val, cnt in ((1.0, 3), (2.0, 2), (3.0, 20)):  # treated, z=1
        y += [val] * cnt; d += [1] * cnt; z += [1] * cnt
    for val, cnt in ((1.0, 1), (2.0, 7), (3.0, 17)):  # treated, z=0
        y += [val] * cnt; d += [1] * cnt; z += [0] * cnt
    y += [10.0] * 50; d += [0] * 50; z += [1] * 25 + [0] * 25
    return Sample(y, d, z)


def make_independent(n=400, seed=3, effect=0.0):
    """Z independent of (Y, D) by construction: one arm duplicated."""
    rng = np.random.default_rng(seed)
    d = rng.integers(0, 2, n // 2)
    y = rng.normal(size=n // 2) + effect * d
    y2 = np.concatenate([y, y])
    d2 = np.concatenate([d, d])
    z2 = np.concatenate([np.zeros(n // 2, dtype=int), np.ones(n // 2, dtype=int)])
    return Sample(y2, d2, z2)


@pytest.fixture
def independent_sample():
    return make_independent()


def make_complier_only(n=300, seed=5):
    """Everyone complies: D = Z, Y = D + noise."""
    rng = np.random.default_rng(seed)
    z = rng.integers(0, 2, n)
    d = z.copy()
    y = d + 0.1 * rng.normal(size=n)
    return Sample(y, d, z)


def make_mon_dgp(n, seed, beta_scale=5.0, u_scale=0.5):
    """Single-hurdle design satisfying all three assumptions.

    ``D = 1{V1 <= 2Z - 1}`` is monotone in Z; outcomes use the same
    equation as the double-hurdle generator, so exclusion holds and the
    population direct effects are zero.
    """
    rng = np.random.default_rng(seed)
    v1, v2, eps = rng.normal(size=(3, n))
    z = (eps > 0).astype(int)
    d = (v1 <= 2 * z - 1).astype(int)
    from scipy.special import ndtr

    y = beta_scale * ndtr(2 * v1 + v2) * d + u_scale * (v1 + v2)
    return Sample(y, d, z)


@pytest.fixture
def mon_sample():
    return make_mon_dgp(4000, seed=11)


def card_path():
    env = os.environ.get("IVBOUNDS_CARD_CSV")
    if env and Path(env).exists():
        return env
    local = Path(__file__).parent / "data" / "card.csv"
    return str(local) if local.exists() else None


@pytest.fixture
def card_sample():
    """Returns-to-schooling extract; skipped unless supplied by the user.

    Expected columns: ``lwage`` (log hourly wage), ``college``
    (education >= 16 years), ``nearc4`` (grew up near a four-year
    college); 3,010 rows.  Point the ``IVBOUNDS_CARD_CSV`` environment
    variable at the file or drop it at ``tests/data/card.csv``.
    """
    path = card_path()
    if path is None:
        pytest.skip("study extract not supplied (set IVBOUNDS_CARD_CSV or add tests/data/card.csv)")
    return load_csv(path, columns={"y": "lwage", "d": "college", "z": "nearc4"})
