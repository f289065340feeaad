"""Independent numerical oracles for the closed-form expressions.

Every closed form in this package has a brute-force counterpart here built
on adaptive quadrature of the underlying integral representations, with no
shared code path: the hypergeometric evaluator, the Beta/Gamma identities
and the interference transforms are all checked against these routes by
the test suite and by the ``oracle`` CLI subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import laplace, special
from .params import LinkParams

__all__ = [
    "OracleCheck",
    "hyp_integral",
    "beta_integral",
    "intra_fixed_integral",
    "intra_random_integral",
    "intra_ordered_fixed_integral",
    "intra_ordered_random_integral",
    "noise_only_coverage_integral",
    "run_checks",
]


def hyp_integral(b: float, z: float) -> float:
    """b * int_0^1 t^(b-1)/(1+zt) dt by adaptive quadrature.

    The t^(b-1) endpoint singularity is handed to the algebraic-weight
    rule; for large z the sharp transition near t ~ 1/z gets its own
    panel so the weighted rule only sees the boundary layer.
    """
    if z == 0.0:
        return 1.0

    def smooth(t: float) -> float:
        return 1.0 / (1.0 + z * t)

    if z <= 10.0:
        value, _ = integrate.quad(
            smooth, 0.0, 1.0, weight="alg", wvar=(b - 1.0, 0.0),
            epsabs=1e-15, epsrel=1e-13, limit=400,
        )
        return b * value
    split = 10.0 / z
    inner, _ = integrate.quad(
        smooth, 0.0, split, weight="alg", wvar=(b - 1.0, 0.0),
        epsabs=1e-16, epsrel=1e-13, limit=400,
    )
    outer, _ = integrate.quad(
        lambda t: t ** (b - 1.0) / (1.0 + z * t), split, 1.0,
        epsabs=1e-16, epsrel=1e-13, limit=400,
    )
    return b * (inner + outer)


def beta_integral(x: float, y: float) -> float:
    """B(x, y) from its defining integral int_0^inf t^(x-1)/(1+t)^(x+y) dt."""
    value, _ = integrate.quad(
        lambda t: t ** (x - 1.0) * (1.0 + t) ** (-(x + y)),
        0.0,
        np.inf,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=400,
    )
    return value


def _disc_factor_integral(sp_eta: float, radius: float, alpha: float) -> float:
    """int_0^radius [1/(1 + sp_eta r^-alpha)] 2r/radius^2 dr."""
    value, _ = integrate.quad(
        lambda r: (2.0 * r / radius**2) / (1.0 + sp_eta * r**-alpha),
        0.0,
        radius,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=400,
    )
    return value


def intra_fixed_integral(s: float, n: int, p: LinkParams) -> float:
    """In-cluster transform, unordered/fixed, straight from its integral."""
    if s == 0.0 or n == 1:
        return 1.0
    return _disc_factor_integral(s * p.p_x * p.eta, p.a, p.alpha) ** (n - 1)


def intra_random_integral(s: float, nbar: float, p: LinkParams) -> float:
    """In-cluster transform, unordered/Poisson, from its exponent integral."""
    if s == 0.0 or nbar == 1.0:
        return 1.0
    sp_eta = s * p.p_x * p.eta
    value, _ = integrate.quad(
        lambda r: r * sp_eta * r**-p.alpha / (1.0 + sp_eta * r**-p.alpha),
        0.0,
        p.a,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=400,
    )
    return math.exp(-2.0 * (nbar - 1.0) / p.a**2 * value)


def intra_ordered_fixed_integral(s: float, k: int, n: int, r_k: float, p: LinkParams) -> float:
    """Ordered/fixed in-cluster transform from the two-set integrals."""
    if s == 0.0 or n == 1:
        return 1.0
    sp_eta = s * p.p_x * p.eta

    def kernel(r: float) -> float:
        return r / (1.0 + sp_eta * r**-p.alpha)

    value = 1.0
    if k > 1:
        q1, _ = integrate.quad(kernel, 0.0, r_k, epsabs=1e-16, epsrel=1e-12, limit=400)
        value *= (2.0 / r_k**2 * q1) ** (k - 1)
    if k < n:
        q2, _ = integrate.quad(kernel, r_k, p.a, epsabs=1e-16, epsrel=1e-12, limit=400)
        value *= (2.0 / (p.a**2 - r_k**2) * q2) ** (n - k)
    return value


def intra_ordered_random_integral(s: float, nbar: float, r_n: float, p: LinkParams) -> float:
    """Ordered/Poisson in-cluster transform from the near-set density."""
    if s == 0.0 or nbar == 1.0:
        return 1.0
    sp_eta = s * p.p_x * p.eta
    value, _ = integrate.quad(
        lambda r: (2.0 * r / r_n**2) * sp_eta * r**-p.alpha / (1.0 + sp_eta * r**-p.alpha),
        0.0,
        r_n,
        epsabs=1e-16,
        epsrel=1e-12,
        limit=400,
    )
    return math.exp(-(nbar - 1.0) * value)


def noise_only_coverage_integral(gamma_th: float, p: LinkParams) -> float:
    """Coverage with no interferers at all: int e^(-rho sigma2) 2r/a^2 dr."""
    scale = gamma_th / (p.p_x0 * p.eta)
    value, _ = integrate.quad(
        lambda r: math.exp(-(r**p.alpha) * scale * p.sigma2) * 2.0 * r / p.a**2,
        0.0,
        p.a,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=400,
    )
    return value


@dataclass(frozen=True)
class OracleCheck:
    name: str
    worst_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.worst_error <= self.tolerance


def _fig2_link() -> LinkParams:
    from .config import BASE_DENSITY
    from .metrics import dbm_to_mw, noise_power_mw
    from .params import free_space_eta

    power = dbm_to_mw(14.0)
    return LinkParams(
        p_x0=power, p_x=power, p_z=power,
        eta=free_space_eta(868e6), alpha=3.5, a=500.0,
        lambda_g=BASE_DENSITY, lambda_co=BASE_DENSITY,
        sigma2=noise_power_mw(125e3),
    )


def _check_hyp2f1() -> OracleCheck:
    worst = 0.0
    for b in (0.25, 2.0 / 3.5, 1.0, 1.0 + 2.0 / 3.5):
        for z in np.logspace(-3, 6, 13):
            ref = hyp_integral(b, float(z))
            got = special.hyp2f1_1_b(b, float(z))
            worst = max(worst, abs(got - ref) / abs(ref))
    return OracleCheck("2f1 vs integral representation", worst, 1e-8)


def _check_beta() -> OracleCheck:
    worst = 0.0
    delta = 2.0 / 3.5
    for x, y in ((1.0, 1.0), (0.5, 0.5), (1.0 - delta, 5.0 + delta), (2.5, 0.75)):
        ref = beta_integral(x, y)
        worst = max(worst, abs(special.beta_fn(x, y) - ref) / ref)
        gamma_route = special.gamma_fn(x) * special.gamma_fn(y) / special.gamma_fn(x + y)
        worst = max(worst, abs(special.beta_fn(x, y) - gamma_route) / gamma_route)
    for delta in (0.1, 2.0 / 3.5, 0.9):
        lhs = special.gamma_fn(1.0 + delta) * special.gamma_fn(1.0 - delta)
        rhs = math.pi * delta / math.sin(math.pi * delta)
        worst = max(worst, abs(lhs - rhs) / rhs)
    return OracleCheck("beta/gamma identities", worst, 1e-10)


def _check_laplace() -> OracleCheck:
    p = _fig2_link()
    worst = 0.0
    gamma_th = 0.1
    for r in (50.0, 150.0, 350.0, 500.0):
        s = r**p.alpha * gamma_th / (p.p_x0 * p.eta)
        pairs = [
            (laplace.laplace_intra_fixed(s, 6, p), intra_fixed_integral(s, 6, p)),
            (laplace.laplace_intra_random(s, 6.0, p), intra_random_integral(s, 6.0, p)),
            (
                laplace.laplace_intra_ordered_random(s, 6.0, min(r, p.a), p),
                intra_ordered_random_integral(s, 6.0, min(r, p.a), p),
            ),
        ]
        if r < p.a:
            pairs.append(
                (
                    laplace.laplace_intra_ordered_fixed(s, 3, 6, r, p),
                    intra_ordered_fixed_integral(s, 3, 6, r, p),
                )
            )
        for got, ref in pairs:
            worst = max(worst, abs(got - ref) / abs(ref))
    return OracleCheck("interference transforms vs integrals", worst, 1e-6)


def run_checks(which: str = "all") -> list[OracleCheck]:
    """Run the requested oracle family; returns one check per family."""
    table = {
        "2f1": _check_hyp2f1,
        "beta": _check_beta,
        "laplace": _check_laplace,
    }
    if which == "all":
        return [fn() for fn in table.values()]
    if which not in table:
        raise ValueError(f"unknown oracle family {which!r}; choose 2f1, beta, laplace or all")
    return [table[which]()]
