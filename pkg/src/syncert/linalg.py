"""Cyclic Jacobi eigensolver for small dense symmetric matrices.

Rotations are applied in round-robin (tournament) order so that each round
annihilates n/2 disjoint off-diagonal pairs at once with vectorized numpy
updates.
"""

import numpy as np

from .errors import InvalidArgument

OFF_TOL = 1e-12
MAX_SWEEPS = 100


def _round_robin(n):
    """Yield the n-1 (or n) rounds of disjoint index pairs covering every pair once."""
    m = n if n % 2 == 0 else n + 1
    players = list(range(m))
    for _ in range(m - 1):
        pairs = []
        for k in range(m // 2):
            i, j = players[k], players[m - 1 - k]
            if i < n and j < n:
                pairs.append((min(i, j), max(i, j)))
        yield pairs
        players = [players[0], players[-1]] + players[1:-1]


def _off(a):
    # direct sum over off-diagonal entries; sum(a*a) - sum(diag**2) cancels catastrophically
    off = a - np.diag(np.diag(a))
    return np.sqrt(np.sum(off * off))


def jacobi_eigh(S, tol=OFF_TOL, max_sweeps=MAX_SWEEPS, sym_tol=1e-12):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, V)`` with eigenvalues ascending and orthonormal eigenvectors in
    the columns of ``V`` so that ``S = V diag(w) V^T``.

    Sweeps stop once the off-diagonal Frobenius norm is at most
    ``tol * max(1, ||S||_F)`` or after ``max_sweeps`` sweeps.
    """
    a = np.array(S, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgument("matrix has non-finite entries")
    n = a.shape[0]
    scale = max(1.0, np.linalg.norm(a))
    if np.max(np.abs(a - a.T), initial=0.0) > sym_tol * scale:
        raise InvalidArgument("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    rounds = [np.array(r, dtype=int).reshape(-1, 2) for r in _round_robin(n)] if n > 1 else []
    threshold = tol * scale
    for _ in range(max_sweeps):
        if _off(a) <= threshold:
            break
        for pr in rounds:
            if len(pr) == 0:
                continue
            p, q = pr[:, 0], pr[:, 1]
            apq = a[p, q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # rows then columns; pairs are disjoint so the fancy-index updates do not collide
            ap, aq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * ap - s[:, None] * aq
            a[q, :] = s[:, None] * ap + c[:, None] * aq
            ap, aq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = ap * c - aq * s
            a[:, q] = ap * s + aq * c
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigvalsh(S, **kw):
    return jacobi_eigh(S, **kw)[0]
