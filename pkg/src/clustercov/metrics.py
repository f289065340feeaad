"""Area spectral efficiency, energy efficiency and unit helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .coverage import CoverageResult

__all__ = [
    "MetricResult",
    "area_spectral_efficiency",
    "db_to_linear",
    "dbm_to_mw",
    "energy_efficiency",
    "linear_to_db",
    "mw_to_dbm",
    "noise_power_mw",
    "rate_from_threshold",
]


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0.0:
        raise ValueError(f"cannot express nonpositive value {value} in dB")
    return 10.0 * math.log10(value)


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw: float) -> float:
    if mw <= 0.0:
        raise ValueError(f"cannot express nonpositive power {mw} mW in dBm")
    return 10.0 * math.log10(mw)


def noise_power_mw(bandwidth_hz: float) -> float:
    """Thermal noise floor for the given bandwidth, in linear mW.

    -174 dBm/Hz plus 10 log10(BW).
    """
    if bandwidth_hz <= 0.0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    return dbm_to_mw(-174.0 + 10.0 * math.log10(bandwidth_hz))


def rate_from_threshold(gamma_th: float) -> float:
    """Per-link rate log2(1 + gamma_th) in bits/s/Hz (gamma_th linear)."""
    if gamma_th <= -1.0:
        raise ValueError(f"threshold must exceed -1 in linear units, got {gamma_th}")
    return math.log2(1.0 + gamma_th)


@dataclass(frozen=True)
class MetricResult:
    """Rate-weighted metrics with their underlying coverage result.

    The coverage result is kept so the bound direction survives: an ASE
    built on an upper-bound coverage is itself an upper bound.  Fields not
    produced by a given operation are None; stderr fields are populated
    only for Monte Carlo coverage.
    """

    rate: float
    coverage: CoverageResult
    ase: float | None = None
    ee: float | None = None
    ase_stderr: float | None = None
    ee_stderr: float | None = None


def _check_same_threshold(gamma_th: float, cov: CoverageResult) -> None:
    if not math.isclose(gamma_th, cov.gamma_th, rel_tol=1e-9, abs_tol=0.0):
        raise ValueError(
            f"coverage was computed at gamma_th={cov.gamma_th}, not {gamma_th}"
        )


def area_spectral_efficiency(
    n_nodes: float,
    lambda_g: float,
    gamma_th: float,
    cov: CoverageResult,
) -> MetricResult:
    """ASE = n * lambda_g * rate * coverage, bits/s/Hz per m^2.

    ``n_nodes`` is the per-cluster count (or mean, for the Poisson model).
    """
    if n_nodes < 0.0 or lambda_g < 0.0:
        raise ValueError("node count and receiver density must be nonnegative")
    _check_same_threshold(gamma_th, cov)
    rate = rate_from_threshold(gamma_th)
    ase = n_nodes * lambda_g * rate * cov.value
    stderr = None
    if cov.ci_halfwidth is not None:
        stderr = n_nodes * lambda_g * rate * cov.ci_halfwidth / 1.96
    return MetricResult(rate=rate, coverage=cov, ase=ase, ase_stderr=stderr)


def energy_efficiency(gamma_th: float, p_x: float, cov: CoverageResult) -> MetricResult:
    """EE = rate * coverage / p_x, bits/s/Hz per mW of transmit power.

    The node density cancels, so EE depends only on the per-link quantities.
    """
    if p_x <= 0.0:
        raise ValueError(f"transmit power must be positive, got {p_x}")
    _check_same_threshold(gamma_th, cov)
    rate = rate_from_threshold(gamma_th)
    ee = rate * cov.value / p_x
    stderr = None
    if cov.ci_halfwidth is not None:
        stderr = rate * (cov.ci_halfwidth / 1.96) / p_x
    return MetricResult(rate=rate, coverage=cov, ee=ee, ee_stderr=stderr)
