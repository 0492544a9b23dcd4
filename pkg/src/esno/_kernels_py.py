"""Pure numpy reconstruction kernels (fallback for the compiled ``_kernels_c``).

Both backends take a 2D array of stencil windows, one row per reconstruction,
and return the value at the right interface of each row's centre cell.
Sums run over the small stencil axis in a fixed order with elementwise
operations only, so a row's result never depends on how many rows are
processed together.
"""

import numpy as np


def weno_rows(rows, C, gamma, A, G, eps, zmode):
    rows = np.ascontiguousarray(rows, dtype=float)
    k, W = C.shape
    nd = G.shape[0]
    cols = [rows[:, j] for j in range(W)]

    def lin(coef):
        acc = None
        for j in range(W):
            c = coef[j]
            if c != 0.0:
                acc = c * cols[j] if acc is None else acc + c * cols[j]
        return acc if acc is not None else np.zeros(rows.shape[0])

    p, beta = [], []
    for r in range(k):
        p.append(lin(C[r]))
        d = [lin(A[r, b]) for b in range(nd)]
        br = np.zeros(rows.shape[0])
        for b1 in range(nd):
            for b2 in range(nd):
                g = G[b1, b2]
                if g != 0.0:
                    br = br + g * d[b1] * d[b2]
        beta.append(br)

    if zmode:
        tau = np.abs(beta[0] - beta[k - 1])
        alpha = [gamma[r] * (1.0 + tau / (beta[r] + eps)) for r in range(k)]
    else:
        alpha = [gamma[r] / ((eps + beta[r]) * (eps + beta[r])) for r in range(k)]
    num = alpha[0] * p[0]
    den = alpha[0]
    for r in range(1, k):
        num = num + alpha[r] * p[r]
        den = den + alpha[r]
    return num / den


def weno_weights(rows, C, gamma, A, G, eps, zmode):
    """Smoothness indicators and nonlinear weights, for diagnostics and tests."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    k, W = C.shape
    d = np.einsum("rbw,nw->nrb", A, rows)
    beta = np.einsum("nrb,bc,nrc->nr", d, G, d)
    if zmode:
        tau = np.abs(beta[:, 0] - beta[:, k - 1])[:, None]
        alpha = gamma * (1.0 + tau / (beta + eps))
    else:
        alpha = gamma / (eps + beta) ** 2
    return beta, alpha / alpha.sum(axis=1, keepdims=True)


def eno_select(rows, k):
    """Index of the chosen candidate stencil (window offset of its first cell)."""
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[0]
    s = np.full(n, k - 1, dtype=np.intp)
    diffs = rows
    idx = np.arange(n)
    for _ in range(1, k):
        diffs = diffs[:, 1:] - diffs[:, :-1]
        left = np.abs(diffs[idx, s - 1])
        right = np.abs(diffs[idx, s])
        s = np.where(left <= right, s - 1, s)
    return s


def eno_rows(rows, C, k):
    rows = np.ascontiguousarray(rows, dtype=float)
    r = eno_select(rows, k)
    Cr = C[r]
    out = Cr[:, 0] * rows[:, 0]
    for j in range(1, C.shape[1]):
        out = out + Cr[:, j] * rows[:, j]
    return out
