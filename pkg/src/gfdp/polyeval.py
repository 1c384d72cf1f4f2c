"""Spectral representation of a weight function on the 2n-th roots of unity.

Everything downstream is driven by three length-2n vectors derived from
the weights f(0), ..., f(n-1).  With w = exp(i pi / n):

    m[l] = sum_k f(k) w^{k l}          (generating polynomial on the roots)
    zeta[l] = principal sqrt of m[l]
    b[l] = (1/2n) sum_j zeta[j] w^{j l} (coefficients of the square-root
                                         polynomial b_f)

The whole point of evaluating on the 2n-th roots rather than the n-th is
a window property: the polynomial with coefficients m[l]/2n interpolates
f on exponents 0..n-1 and vanishes on the other half of the circle, so a
circulant built from b reproduces the Toeplitz workload exactly despite
the circular wraparound.

Sign convention: the exponent here is +i pi k l / n, which is the
conjugate of the numpy forward-FFT kernel exp(-2i pi k l / 2n).  eval_m
therefore conjugates an rfft rather than calling fft directly; besides
halving the work this keeps m exactly conjugate-symmetric and makes the
bins at l = 0 and l = n exactly real, which the square root step relies
on to stay on the principal branch.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ParameterError


def eval_m(f) -> np.ndarray:
    """Evaluate the weight polynomial on all 2n-th roots of unity."""
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise ParameterError("weights must be a non-empty 1-d array")
    if not np.isfinite(f).all():
        raise NumericError("weights contain non-finite values")
    n = f.size
    padded = np.zeros(2 * n)
    padded[:n] = f
    r = np.fft.rfft(padded)  # bins 0..n of the forward transform
    m = np.empty(2 * n, dtype=complex)
    m[: n + 1] = np.conj(r)
    m[n + 1 :] = r[1:n][::-1]  # conjugate symmetry, bit-exact by construction
    # Bins that are zero in exact arithmetic (counting weights hit many)
    # come back as rounding dust of either sign; the square root would
    # blow that up to ~sqrt(eps) with branch-dependent signs, so snap
    # them to true zeros while the scale is known.
    scale = np.abs(f).sum()
    m[np.abs(m) <= 64.0 * np.finfo(float).eps * scale] = 0.0
    return m


def sqrt_spectrum(m_vals) -> np.ndarray:
    """Entrywise principal square root: values land in Re >= 0, and the
    negative real axis maps to the +i side."""
    zeta = np.sqrt(np.asarray(m_vals, dtype=complex))
    # numpy sends a negative real with a -0.0 imaginary part to -i sqrt|.|;
    # pin those back to +i so the choice is input-sign independent.
    flip = (zeta.real == 0.0) & (zeta.imag < 0.0)
    zeta[flip] = -zeta[flip]
    return zeta


def eval_b(zeta) -> np.ndarray:
    """Coefficients of the square-root polynomial from its root values.

    This is interpolation through the 2n points (w^l, zeta[l]), i.e. an
    inverse transform under the +i kernel, which is numpy's ifft.
    """
    zeta = np.asarray(zeta, dtype=complex)
    if zeta.ndim != 1 or zeta.size % 2:
        raise ParameterError("zeta must have even length 2n")
    return np.fft.ifft(zeta)


def eval_a_all(m_vals) -> np.ndarray:
    """Values a_f(w^{-d}) of the window polynomial for d = 0..2n-1.

    a_f has coefficients m[l] / 2n; its values equal f(d) for
    0 <= d < n and 0 for the remaining exponents d in [-n, -1] and
    [n, 2n-1], which is the window property everything rests on.
    """
    m_vals = np.asarray(m_vals, dtype=complex)
    return np.fft.fft(m_vals) / m_vals.size


def eval_a(m_vals, d: int) -> complex:
    """a_f evaluated at w^{-d}; d may range over [-n, 2n-1]."""
    m_vals = np.asarray(m_vals, dtype=complex)
    n2 = m_vals.size
    n = n2 // 2
    if not -n <= d < n2:
        raise ParameterError(f"exponent d={d} outside [-{n}, {n2 - 1}]")
    return complex(eval_a_all(m_vals)[d % n2])


def generator_sum(k: int, p: int) -> complex:
    """sum_{l=0}^{p-1} exp(2 pi i k l / p): p when p | k, else 0."""
    if not isinstance(p, int) or p < 1:
        raise ParameterError("group order p must be a positive integer")
    l = np.arange(p)
    return complex(np.exp(2j * np.pi * k * l / p).sum())


@dataclass
class RootsProfile:
    """The three spectral vectors for one weight function."""

    n: int
    coeffs: np.ndarray  # f(0..n-1), real
    m_vals: np.ndarray  # length 2n, conjugate symmetric
    zeta: np.ndarray  # principal sqrt of m_vals
    b_vals: np.ndarray  # ifft of zeta

    def as_json_dict(self) -> dict:
        """Debug serialization; complex entries become [re, im] pairs."""

        def pairs(a):
            return [[float(v.real), float(v.imag)] for v in a]

        return {
            "n": self.n,
            "coeffs": [float(v) for v in self.coeffs],
            "m_vals": pairs(self.m_vals),
            "zeta": pairs(self.zeta),
            "b_vals": pairs(self.b_vals),
        }


def build_profile(f) -> RootsProfile:
    f = np.asarray(f, dtype=float)
    m = eval_m(f)
    zeta = sqrt_spectrum(m)
    b = eval_b(zeta)
    return RootsProfile(n=f.size, coeffs=f, m_vals=m, zeta=zeta, b_vals=b)
