"""Pure-NumPy implementation of the hot Monte Carlo kernels."""

from __future__ import annotations

import numpy as np


def radial_sums(
    r: np.ndarray,
    h: np.ndarray,
    idx: np.ndarray,
    n_out: int,
    neg_alpha: float,
) -> np.ndarray:
    """Per-trial sums of h * r**neg_alpha for origin-centred fields.

    ``r`` holds node distances, ``h`` the fading draws, ``idx`` the trial
    index of each node, ``neg_alpha`` the (negative) path-loss exponent.
    """
    if len(r) == 0:
        return np.zeros(n_out)
    return np.bincount(idx, weights=h * r**neg_alpha, minlength=n_out)


def inter_sums(
    parent_r: np.ndarray,
    trial_of_parent: np.ndarray,
    node_parent: np.ndarray,
    off_r: np.ndarray,
    off_th: np.ndarray,
    h: np.ndarray,
    n_out: int,
    neg_alpha: float,
) -> np.ndarray:
    """Per-trial sums of h * ||parent + offset||**neg_alpha.

    Each parent sits on its trial's positive x-axis at distance
    ``parent_r`` (valid by isotropy); offsets are polar (off_r, off_th).
    """
    if len(off_r) == 0:
        return np.zeros(n_out)
    x = parent_r[node_parent] + off_r * np.cos(off_th)
    y = off_r * np.sin(off_th)
    d2 = x * x + y * y
    return np.bincount(
        trial_of_parent[node_parent],
        weights=h * d2 ** (0.5 * neg_alpha),
        minlength=n_out,
    )
