# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the hot Monte Carlo kernels.

Fuses trigonometry, distance assembly, the power law and the per-trial
scatter-add into single passes, avoiding the intermediate arrays of the
NumPy fallback.  The reference path-loss exponent 3.5 gets a sqrt-chain
power evaluation; other exponents go through libm pow.
"""

from libc.math cimport cos, pow, sin, sqrt

import numpy as np


def radial_sums(
    const double[::1] r,
    const double[::1] h,
    const Py_ssize_t[::1] idx,
    Py_ssize_t n_out,
    double neg_alpha,
):
    """Per-trial sums of h * r**neg_alpha; see the NumPy twin for details."""
    out_arr = np.zeros(n_out)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, n = r.shape[0]
    cdef double x
    cdef bint chain = neg_alpha == -3.5
    if h.shape[0] != n or idx.shape[0] != n:
        raise ValueError("r, h and idx must have equal length")
    with nogil:
        if chain:
            for i in range(n):
                x = r[i]
                out[idx[i]] += h[i] / (x * x * x * sqrt(x))
        else:
            for i in range(n):
                out[idx[i]] += h[i] * pow(r[i], neg_alpha)
    return out_arr


def inter_sums(
    const double[::1] parent_r,
    const Py_ssize_t[::1] trial_of_parent,
    const Py_ssize_t[::1] node_parent,
    const double[::1] off_r,
    const double[::1] off_th,
    const double[::1] h,
    Py_ssize_t n_out,
    double neg_alpha,
):
    """Per-trial sums of h * ||parent + offset||**neg_alpha (fused pass)."""
    out_arr = np.zeros(n_out)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, p, n = off_r.shape[0]
    cdef double x, y, d2, s, half_exp = 0.5 * neg_alpha
    cdef bint chain = neg_alpha == -3.5
    if not (node_parent.shape[0] == off_th.shape[0] == h.shape[0] == n):
        raise ValueError("per-node arrays must have equal length")
    if trial_of_parent.shape[0] != parent_r.shape[0]:
        raise ValueError("per-parent arrays must have equal length")
    with nogil:
        for i in range(n):
            p = node_parent[i]
            x = parent_r[p] + off_r[i] * cos(off_th[i])
            y = off_r[i] * sin(off_th[i])
            d2 = x * x + y * y
            if chain:
                # d2**(-7/4) via two square roots
                s = sqrt(d2)
                out[trial_of_parent[p]] += h[i] / (d2 * s * sqrt(s))
            else:
                out[trial_of_parent[p]] += h[i] * pow(d2, half_exp)
    return out_arr
