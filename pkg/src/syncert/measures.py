"""Weighted L^p norms, induced matrix norms and matrix measures (logarithmic norms).

Only p in {1, 2, inf} is supported; these are the cases with closed-form
measures. A weight vector ``q`` stands for the diagonal matrix Q and the
weighted norm is ``||x||_{p,Q} = ||Q x||_p``, so every matrix quantity is the
unweighted one evaluated at ``Q A Q^{-1}``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import InvalidArgument
from .linalg import jacobi_eigvalsh

INF = math.inf


def parse_p(p):
    """Normalize a norm exponent to one of 1, 2, inf."""
    if isinstance(p, str):
        key = p.strip().lower()
        if key in ("inf", "infinity", "oo", "max"):
            return INF
        try:
            p = float(key)
        except ValueError:
            raise InvalidArgument(f"unknown norm exponent {p!r}") from None
    if p == 1:
        return 1
    if p == 2:
        return 2
    if p == INF:
        return INF
    raise InvalidArgument(f"norm exponent must be 1, 2 or inf, got {p!r}")


@dataclass(frozen=True)
class NormSpec:
    """A norm exponent together with positive diagonal weights."""

    p: object
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", parse_p(self.p))
        w = tuple(float(v) for v in np.atleast_1d(np.asarray(self.weights, dtype=float)))
        if len(w) < 1:
            raise InvalidArgument("NormSpec needs at least one weight")
        if not all(math.isfinite(v) and v > 0 for v in w):
            raise InvalidArgument(f"weights must be positive and finite, got {w}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def identity(cls, p, n):
        return cls(p, (1.0,) * n)

    @property
    def n(self):
        return len(self.weights)

    @property
    def q(self):
        return np.asarray(self.weights)

    def scaled(self, alpha):
        return NormSpec(self.p, tuple(alpha * w for w in self.weights))

    def kron(self, outer_weights):
        """Norm on stacked blocks with block weights ``outer_weights`` (i.e. Q_outer kron Q)."""
        outer = np.asarray(outer_weights, dtype=float)
        return NormSpec(self.p, tuple(np.kron(outer, self.q)))

    def label(self):
        p = "inf" if self.p == INF else str(self.p)
        return f"p={p}, Q=diag({', '.join(f'{w:g}' for w in self.weights)})"


def _as_square(A, spec):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] != spec.n:
        raise InvalidArgument(f"matrix is {A.shape[0]}x{A.shape[0]} but norm has {spec.n} weights")
    if not np.all(np.isfinite(A)):
        raise InvalidArgument("matrix has non-finite entries")
    return A


def conjugate(A, spec):
    """Return Q A Q^{-1} for the diagonal weight of ``spec``."""
    A = _as_square(A, spec)
    q = spec.q
    return A * q[:, None] / q[None, :]


def vector_norm(x, spec):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != spec.n:
        raise InvalidArgument(f"vector of length {x.size} does not match {spec.n} weights")
    y = np.abs(spec.q * x)
    if spec.p == 1:
        return float(np.sum(y))
    if spec.p == 2:
        return float(np.sqrt(np.sum(y * y)))
    return float(np.max(y))


def _unweighted_norm(A, p):
    if p == 1:
        return float(np.max(np.sum(np.abs(A), axis=0)))
    if p == INF:
        return float(np.max(np.sum(np.abs(A), axis=1)))
    # largest singular value through the symmetric eigensolver on A^T A
    return float(math.sqrt(max(jacobi_eigvalsh(A.T @ A)[-1], 0.0)))


def induced_matrix_norm(A, spec):
    """Operator norm of A induced by ``||.||_{p,Q}``, i.e. ``||Q A Q^{-1}||_p``."""
    return _unweighted_norm(conjugate(A, spec), spec.p)


def _unweighted_measure(A, p):
    d = np.diag(A)
    off = np.abs(A) - np.diag(np.abs(d))
    if p == 1:
        return float(np.max(d + off.sum(axis=0)))
    if p == INF:
        return float(np.max(d + off.sum(axis=1)))
    return float(jacobi_eigvalsh(0.5 * (A + A.T))[-1])


def matrix_measure(A, spec):
    """Closed-form logarithmic norm ``M_{p,Q}[A] = M_p[Q A Q^{-1}]``."""
    return _unweighted_measure(conjugate(A, spec), spec.p)


def column_measures(A, spec):
    """Per-column (p=1) or per-row (p=inf) terms whose maximum is the measure."""
    B = conjugate(A, spec)
    d = np.diag(B)
    off = np.abs(B) - np.diag(np.abs(d))
    if spec.p == 1:
        return d + off.sum(axis=0)
    if spec.p == INF:
        return d + off.sum(axis=1)
    raise InvalidArgument("column terms exist only for p=1 and p=inf")


def matrix_measure_definitional(A, spec, h=1e-6):
    """Forward-difference value ``(||I + hA|| - 1)/h`` of the measure.

    This is an oracle for :func:`matrix_measure`, independent of the closed
    forms; its error is O(h ||A||^2).
    """
    if not h > 0:
        raise InvalidArgument(f"step h must be positive, got {h}")
    A = _as_square(A, spec)
    B = np.eye(A.shape[0]) + h * A
    return (induced_matrix_norm(B, spec) - 1.0) / h


def semi_inner_plus(x, y, spec, h=1e-7):
    """Right semi-inner product ``(x, y)_+ = ||x|| lim_{h->0+} (||x + h y|| - ||x||) / h``.

    For p = 2 the norm is smooth away from 0 and the limit is the weighted
    inner product <Qx, Qy>, returned exactly. For p in {1, inf} the norm is
    piecewise linear along the ray, so the forward difference with step ``h``
    is exact once h is below the first kink (up to rounding).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise InvalidArgument("x and y must have equal length")
    if not h > 0:
        raise InvalidArgument(f"step h must be positive, got {h}")
    nx = vector_norm(x, spec)
    if nx == 0:
        raise InvalidArgument("semi-inner product is undefined at x = 0")
    if spec.p == 2:
        q2 = spec.q ** 2
        return float(np.sum(q2 * x * y))
    return nx * (vector_norm(x + h * y, spec) - nx) / h
