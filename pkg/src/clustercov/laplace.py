"""Closed-form Laplace transforms of the three interference fields.

Each transform is a function of the variable s at which the coverage
integrand needs it (s carries units 1/(mW * m^-alpha)); the module accepts
raw s so every form can be unit-tested independently of the coverage layer.
Exact forms use the hypergeometric evaluator; the *_gc variants are the
Gauss-Chebyshev approximations that make the coverage expressions closed
form.  All transforms are 1 at s = 0 (returned exactly, without evaluating
the hypergeometric function at an infinite argument) and lie in (0, 1].
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .params import LinkParams
from .special import QuadratureSpec, gamma_fn, hyp2f1_1_b, log_beta

__all__ = [
    "laplace_coexist",
    "laplace_inter_fixed_upper",
    "laplace_inter_random_lower",
    "laplace_intra_fixed",
    "laplace_intra_fixed_gc",
    "laplace_intra_ordered_fixed",
    "laplace_intra_ordered_fixed_gc",
    "laplace_intra_ordered_random",
    "laplace_intra_ordered_random_gc",
    "laplace_intra_random",
    "laplace_intra_random_gc",
]

# Relative closeness of r_k to the cluster radius below which the far-set
# factor switches to its r_k -> a limit (the direct form is a 0/0 through
# its normalising density).
_FAR_DEGENERATE_RTOL = 1e-9


def _check_s(s: float) -> None:
    if s < 0.0:
        raise ValueError(f"transform variable s must be nonnegative, got {s}")


def _check_count(name: str, value: int) -> None:
    if value < 1:
        raise ValueError(f"{name} must be a count >= 1, got {value}")


def disc_mean(sp_eta: float, radius: float, alpha: float) -> float:
    """Mean of 1/(1 + sp_eta * r^-alpha) over a uniform disc of the radius.

    Equals radius^alpha * delta / (sp_eta (delta+1)) * 2F1(1, delta+1;
    delta+2; -radius^alpha / sp_eta) with delta = 2/alpha; this is the
    per-interferer factor of the in-cluster transforms.
    """
    delta = 2.0 / alpha
    z = radius**alpha / sp_eta
    return z * delta / (delta + 1.0) * hyp2f1_1_b(delta + 1.0, z)


def disc_tail(sp_eta: float, radius: float, alpha: float) -> float:
    """Mean of sp_eta r^-alpha / (1 + sp_eta r^-alpha) over the disc.

    Equals 2F1(1, delta; delta+1; -radius^alpha / sp_eta); complements
    disc_mean and drives the Poisson-size exponent.
    """
    delta = 2.0 / alpha
    return hyp2f1_1_b(delta, radius**alpha / sp_eta)


def disc_mean_gc(sp_eta: float, radius: float, alpha: float, quad: QuadratureSpec) -> float:
    """Gauss-Chebyshev approximation of disc_mean."""
    beta = radius**-alpha * sp_eta
    terms = quad.mu * quad.c ** (alpha + 1.0) / (quad.c**alpha + beta)
    return quad.omega_t * float(np.sum(terms))


def disc_tail_gc(sp_eta: float, radius: float, alpha: float, quad: QuadratureSpec) -> float:
    """Gauss-Chebyshev approximation of disc_tail."""
    terms = quad.mu * quad.c / (quad.c**alpha * radius**alpha / sp_eta + 1.0)
    return quad.omega_t * float(np.sum(terms))


@lru_cache(maxsize=None)
def _inter_beta_sum(n: int, delta: float) -> float:
    """sum_{p=1}^{n} C(n,p) B(p - delta, n - p + delta), in log space.

    Binomial coefficients overflow float64 past n ~ 1e3 and the Beta values
    underflow symmetrically, so each term is assembled from logs.
    """
    log_n_fact = math.lgamma(n + 1)
    terms = [
        math.exp(
            log_n_fact
            - math.lgamma(p + 1)
            - math.lgamma(n - p + 1)
            + log_beta(p - delta, n - p + delta)
        )
        for p in range(1, n + 1)
    ]
    return math.fsum(terms)


def laplace_intra_fixed(s: float, n: int, p: LinkParams) -> float:
    """In-cluster transform, unordered typical node, fixed cluster size n."""
    _check_s(s)
    _check_count("n", n)
    if s == 0.0 or n == 1:
        return 1.0
    return min(1.0, disc_mean(s * p.p_x * p.eta, p.a, p.alpha) ** (n - 1))


def laplace_intra_random(s: float, nbar: float, p: LinkParams) -> float:
    """In-cluster transform, unordered typical node, Poisson mean nbar >= 1."""
    _check_s(s)
    if nbar < 1.0:
        raise ValueError(f"mean cluster size must be >= 1, got {nbar}")
    if s == 0.0 or nbar == 1.0:
        return 1.0
    return min(1.0, math.exp(-(nbar - 1.0) * disc_tail(s * p.p_x * p.eta, p.a, p.alpha)))


def laplace_intra_fixed_gc(s: float, n: int, p: LinkParams, quad: QuadratureSpec) -> float:
    """Gauss-Chebyshev form of laplace_intra_fixed."""
    _check_s(s)
    _check_count("n", n)
    if s == 0.0 or n == 1:
        return 1.0
    return min(1.0, disc_mean_gc(s * p.p_x * p.eta, p.a, p.alpha, quad) ** (n - 1))


def laplace_intra_random_gc(s: float, nbar: float, p: LinkParams, quad: QuadratureSpec) -> float:
    """Gauss-Chebyshev form of laplace_intra_random."""
    _check_s(s)
    if nbar < 1.0:
        raise ValueError(f"mean cluster size must be >= 1, got {nbar}")
    if s == 0.0 or nbar == 1.0:
        return 1.0
    tail = disc_tail_gc(s * p.p_x * p.eta, p.a, p.alpha, quad)
    return min(1.0, math.exp(-(nbar - 1.0) * tail))


def laplace_inter_fixed_upper(s: float, n: int, p: LinkParams) -> float:
    """Upper bound on the cross-cluster transform, fixed cluster size n.

    exp(-pi lambda_g (s p_x eta)^delta delta sum_p C(n,p) B(p-delta,
    n-p+delta)); tight for small cluster radii, where the node-to-parent
    distance approximation underlying it is mild.
    """
    _check_s(s)
    _check_count("n", n)
    delta = p.delta
    if delta >= 1.0:
        raise ValueError(f"requires delta = 2/alpha < 1, got {delta}")
    if s == 0.0 or p.lambda_g == 0.0:
        return 1.0
    expo = (
        math.pi
        * p.lambda_g
        * (s * p.p_x * p.eta) ** delta
        * delta
        * _inter_beta_sum(n, delta)
    )
    return min(1.0, math.exp(-expo))


def laplace_inter_random_lower(s: float, nbar: float, p: LinkParams) -> float:
    """Lower bound on the cross-cluster transform, Poisson mean nbar."""
    _check_s(s)
    if nbar <= 0.0:
        raise ValueError(f"mean cluster size must be positive, got {nbar}")
    delta = p.delta
    if not 0.0 < delta < 1.0:
        raise ValueError(f"requires delta = 2/alpha in (0, 1), got {delta}")
    if s == 0.0 or p.lambda_g == 0.0:
        return 1.0
    expo = (
        math.pi**2
        * p.lambda_g
        * nbar
        * (s * p.p_x * p.eta) ** delta
        * delta
        / math.sin(math.pi * delta)
    )
    return min(1.0, math.exp(-expo))


def laplace_coexist(s: float, p: LinkParams) -> float:
    """Transform of the coexisting-PPP interference (exact, not a bound)."""
    _check_s(s)
    delta = p.delta
    if not 0.0 < delta < 1.0:
        raise ValueError(f"requires delta = 2/alpha in (0, 1), got {delta}")
    if s == 0.0 or p.lambda_co == 0.0:
        return 1.0
    expo = (
        math.pi
        * p.lambda_co
        * gamma_fn(1.0 + delta)
        * gamma_fn(1.0 - delta)
        * (s * p.p_z * p.eta) ** delta
    )
    return min(1.0, math.exp(-expo))


def _far_mean(sp_eta: float, r_k: float, a: float, alpha: float) -> float:
    """Mean of 1/(1 + sp_eta r^-alpha) over the annulus (r_k, a].

    (a^2 m(a) - r_k^2 m(r_k)) / (a^2 - r_k^2) with m = disc_mean; resolved
    by continuity (value at the rim) when the annulus degenerates.
    """
    if a - r_k <= _FAR_DEGENERATE_RTOL * a:
        return a**alpha / (a**alpha + sp_eta)
    num = a**2 * disc_mean(sp_eta, a, alpha) - r_k**2 * disc_mean(sp_eta, r_k, alpha)
    return num / (a**2 - r_k**2)


def _far_mean_gc(
    sp_eta: float, r_k: float, a: float, alpha: float, quad: QuadratureSpec
) -> float:
    if a - r_k <= _FAR_DEGENERATE_RTOL * a:
        return a**alpha / (a**alpha + sp_eta)
    num = a**2 * disc_mean_gc(sp_eta, a, alpha, quad) - r_k**2 * disc_mean_gc(
        sp_eta, r_k, alpha, quad
    )
    return num / (a**2 - r_k**2)


def _check_ordered_args(k: int, n: int, r_k: float, a: float) -> None:
    _check_count("n", n)
    if not 1 <= k <= n:
        raise ValueError(f"rank k must satisfy 1 <= k <= n, got k={k}, n={n}")
    if not 0.0 < r_k <= a:
        raise ValueError(f"conditioning distance must lie in (0, a], got {r_k}")


def laplace_intra_ordered_fixed(s: float, k: int, n: int, r_k: float, p: LinkParams) -> float:
    """In-cluster transform when the typical node is the k-th closest of n.

    Near-set factor^(k-1) times far-set factor^(n-k), conditioned on the
    typical link distance r_k.
    """
    _check_ordered_args(k, n, r_k, p.a)
    _check_s(s)
    if s == 0.0 or n == 1:
        return 1.0
    sp_eta = s * p.p_x * p.eta
    value = 1.0
    if k > 1:
        value *= disc_mean(sp_eta, r_k, p.alpha) ** (k - 1)
    if k < n:
        value *= _far_mean(sp_eta, r_k, p.a, p.alpha) ** (n - k)
    return min(1.0, value)


def laplace_intra_ordered_random(s: float, nbar: float, r_n: float, p: LinkParams) -> float:
    """In-cluster transform, farthest-node conditioning, Poisson mean nbar.

    exp(-(nbar - 1) 2F1(1, delta; delta+1; -r_n^alpha / (s p_x eta))): the
    interferers all lie within the typical link distance r_n.
    """
    _check_s(s)
    if nbar < 1.0:
        raise ValueError(f"mean cluster size must be >= 1, got {nbar}")
    if not 0.0 < r_n <= p.a:
        raise ValueError(f"conditioning distance must lie in (0, a], got {r_n}")
    if s == 0.0 or nbar == 1.0:
        return 1.0
    return min(1.0, math.exp(-(nbar - 1.0) * disc_tail(s * p.p_x * p.eta, r_n, p.alpha)))


def laplace_intra_ordered_fixed_gc(
    s: float, k: int, n: int, r_k: float, p: LinkParams, quad: QuadratureSpec
) -> float:
    """Gauss-Chebyshev form of laplace_intra_ordered_fixed."""
    _check_ordered_args(k, n, r_k, p.a)
    _check_s(s)
    if s == 0.0 or n == 1:
        return 1.0
    sp_eta = s * p.p_x * p.eta
    value = 1.0
    if k > 1:
        value *= disc_mean_gc(sp_eta, r_k, p.alpha, quad) ** (k - 1)
    if k < n:
        value *= _far_mean_gc(sp_eta, r_k, p.a, p.alpha, quad) ** (n - k)
    return min(1.0, value)


def laplace_intra_ordered_random_gc(
    s: float, nbar: float, r_n: float, p: LinkParams, quad: QuadratureSpec
) -> float:
    """Gauss-Chebyshev form of laplace_intra_ordered_random."""
    _check_s(s)
    if nbar < 1.0:
        raise ValueError(f"mean cluster size must be >= 1, got {nbar}")
    if not 0.0 < r_n <= p.a:
        raise ValueError(f"conditioning distance must lie in (0, a], got {r_n}")
    if s == 0.0 or nbar == 1.0:
        return 1.0
    tail = disc_tail_gc(s * p.p_x * p.eta, r_n, p.alpha, quad)
    return min(1.0, math.exp(-(nbar - 1.0) * tail))
