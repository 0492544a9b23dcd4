"""Exact reconstruction coefficients for ENO-k / WENO-k.

Everything is derived from cell-average polynomial reconstruction in exact
rational arithmetic. Coordinates are in units of the cell width with the
target cell centred at 0, so the right interface sits at ``x = 1/2``.

A window holds the ``2k-1`` values ``v[i-k+1], ..., v[i+k-1]``. Candidate
stencil ``r`` (``r = 0..k-1``) covers cells ``i+r-k+1 .. i+r``, i.e. window
positions ``r .. r+k-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import factorial

import numpy as np
import sympy as sp

SUPPORTED_K = (2, 3)


def _cell_moment(j: int, d: int) -> Fraction:
    # integral of x**d over [j-1/2, j+1/2]
    a, b = Fraction(2 * j - 1, 2), Fraction(2 * j + 1, 2)
    return (b ** (d + 1) - a ** (d + 1)) / (d + 1)


def monomial_map(cells: list[int]) -> sp.Matrix:
    """Matrix taking cell averages on ``cells`` to monomial coefficients of p."""
    n = len(cells)
    M = sp.Matrix(n, n, lambda r, d: sp.Rational(_cell_moment(cells[r], d)))
    return M.inv()


def interface_weights(cells: list[int], x=sp.Rational(1, 2)) -> list[sp.Rational]:
    """Weights w with ``p(x) = sum_j w_j vbar_j`` for the reconstruction on ``cells``."""
    Minv = monomial_map(cells)
    n = len(cells)
    ev = sp.Matrix([[x**d for d in range(n)]])
    return list(ev * Minv)


@dataclass(frozen=True)
class StencilCoefficients:
    k: int
    C: np.ndarray  # (k, 2k-1) candidate reconstructions at x_{i+1/2}
    gamma: np.ndarray  # (k,) linear weights
    A: np.ndarray  # (k, nd, 2k-1) derivative polynomial coefficients
    G: np.ndarray  # (nd, nd) Gram matrix of derivative monomials over the cell
    exact_C: tuple
    exact_gamma: tuple
    exact_beta: tuple  # sympy quadratic forms in window symbols

    @property
    def width(self) -> int:
        return 2 * self.k - 1


@cache
def stencil_coefficients(k: int) -> StencilCoefficients:
    if k not in SUPPORTED_K:
        raise ValueError(f"unsupported reconstruction order k={k}; expected one of {SUPPORTED_K}")
    W = 2 * k - 1
    offs = list(range(-(k - 1), k))  # cell offset of each window position
    half = sp.Rational(1, 2)

    C = sp.zeros(k, W)
    for r in range(k):
        cells = offs[r : r + k]
        for j, w in enumerate(interface_weights(cells)):
            C[r, r + j] = w

    big = sp.Matrix([interface_weights(offs)])
    g = sp.symbols(f"g0:{k}")
    sol = sp.solve(list(sum((g[r] * C[r, :] for r in range(k)), sp.zeros(1, W)) - big), g, dict=True)
    if len(sol) != 1:
        raise RuntimeError(f"linear weights for k={k} are not unique")
    gamma = [sol[0][g[r]] for r in range(k)]

    # derivative coefficient blocks: for l = 1..k-1 the polynomial p^(l) has
    # k-l monomial coefficients, each linear in the window values
    blocks = [(l, e) for l in range(1, k) for e in range(k - l)]
    nd = len(blocks)
    A = sp.zeros(k * nd, W)
    for r in range(k):
        Minv = monomial_map(offs[r : r + k])
        for b, (l, e) in enumerate(blocks):
            d = e + l
            fac = sp.Rational(factorial(d), factorial(e))
            for j in range(k):
                A[r * nd + b, r + j] = fac * Minv[d, j]
    G = sp.zeros(nd, nd)
    for b1, (l1, e1) in enumerate(blocks):
        for b2, (l2, e2) in enumerate(blocks):
            if l1 != l2:
                continue
            n = e1 + e2
            # integral over the cell, times dx**(2l-1) which is 1 in cell units
            G[b1, b2] = (half ** (n + 1) - (-half) ** (n + 1)) / (n + 1)

    vs = sp.symbols(f"v0:{W}")
    vvec = sp.Matrix(vs)
    betas = []
    for r in range(k):
        d = A[r * nd : (r + 1) * nd, :] * vvec
        betas.append(sp.expand((d.T * G * d)[0, 0]))

    return StencilCoefficients(
        k=k,
        C=np.array(C.tolist(), dtype=float),
        gamma=np.array([float(x) for x in gamma]),
        A=np.array(A.tolist(), dtype=float).reshape(k, nd, W),
        G=np.array(G.tolist(), dtype=float),
        exact_C=tuple(tuple(C.row(r)) for r in range(k)),
        exact_gamma=tuple(gamma),
        exact_beta=tuple(betas),
    )
