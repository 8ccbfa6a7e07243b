"""Diffusively coupled networks, 1-D method-of-lines discretizations and
verification of decay envelopes against simulated data.

Network states are stored node-major: the flat vector is (x_1, ..., x_N)
with each x_i in R^n, so ``(L kron D) x`` is ``L @ X @ diag(d)`` on the
(N, n) view.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, Optional

import numpy as np

from . import graphs
from .errors import DivergenceError, InvalidArgument
from .measures import INF, NormSpec
from .models import DiffusionSpec, VectorFieldModel


@dataclass(frozen=True)
class NetworkSystem:
    model: VectorFieldModel
    coupling: np.ndarray
    d: np.ndarray
    boundary: str = "none"
    label: str = ""
    mesh: Optional[np.ndarray] = None
    length: Optional[float] = None
    coupling_fn: Optional[Callable] = field(default=None, repr=False)

    @property
    def n(self):
        return self.model.n

    @property
    def N(self):
        return self.coupling.shape[0]

    @property
    def dim(self):
        return self.n * self.N

    def rhs(self, x, t):
        X = x.reshape(self.N, self.n)
        F = self.model.rhs(X, t)
        if self.coupling_fn is not None:
            out = F + self.coupling_fn(X)
        else:
            out = F - (self.coupling @ X) * self.d
        return out.reshape(-1)

    def linear_matrix(self, t=0.0):
        """Full nN x nN matrix I kron A(t) - C kron D (linear models only)."""
        A = self.model.jacobian_fn(np.zeros(self.n), t)
        return np.kron(np.eye(self.N), A) - np.kron(self.coupling, np.diag(self.d))


def _dvec(D, n):
    d = np.asarray(D.d if isinstance(D, DiffusionSpec) else D, dtype=float)
    if d.shape != (n,):
        raise InvalidArgument(f"diffusion vector has length {d.size}, model has {n}")
    return d


def assemble_network(model, G, D):
    """Network x' = F~(x, t) - (L kron D) x over the graph ``G``."""
    return NetworkSystem(model, graphs.laplacian(G), _dvec(D, model.n), "none", G.describe())


def assemble_two_compartment(model, h1, h2):
    """Two compartments with nonlinear couplings:
    x1' = F(x1) + h1(x2) - h1(x1),  x2' = F(x2) + h2(x1) - h2(x2).
    """
    def coupling_fn(X):
        x1, x2 = X[0], X[1]
        return np.stack([h1(x2) - h1(x1), h2(x1) - h2(x2)])

    return NetworkSystem(model, np.zeros((2, 2)), np.zeros(model.n), "none", "two-compartment",
                         coupling_fn=coupling_fn)


def discretize_pde_1d(model, D, L, N, bc="neumann"):
    """Method-of-lines system on (0, L) with N interior mesh points spaced L/(N+1).

    Neumann ghost values copy the neighbouring interior value; Dirichlet ghost
    values are fixed at zero.
    """
    N = int(N)
    if N < 3:
        raise InvalidArgument("PDE discretization needs N >= 3 mesh points")
    if not L > 0:
        raise InvalidArgument("domain length must be positive")
    bc = bc.lower()
    scale = ((N + 1) / L) ** 2
    if bc == "neumann":
        C = scale * graphs.laplacian(graphs.line(N))
    elif bc == "dirichlet":
        C = scale * (2.0 * np.eye(N) - np.eye(N, k=1) - np.eye(N, k=-1))
    else:
        raise InvalidArgument(f"unknown boundary condition {bc!r}")
    mesh = L * np.arange(1, N + 1) / (N + 1)
    return NetworkSystem(model, C, _dvec(D, model.n), bc, f"pde1d({bc}, N={N}, L={L:g})", mesh, float(L))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (K, N*n)
    dt: float
    n: int
    N: int
    meta: dict = field(default_factory=dict)

    def nodes(self):
        """States as an array of shape (K, N, n)."""
        return self.states.reshape(len(self.times), self.N, self.n)


def integrate_rk4(sys, x0, t_end, dt=1e-3, stride=1, meta=None):
    """Classical fixed-step RK4; stores every ``stride``-th step plus the final one."""
    if not dt > 0:
        raise InvalidArgument("dt must be positive")
    if not t_end >= dt:
        raise InvalidArgument("t_end must be at least dt")
    x = np.array(x0, dtype=float).reshape(-1)
    if x.shape != (sys.dim,):
        raise InvalidArgument(f"initial state has {x.size} entries, system needs {sys.dim}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgument("initial state is not finite")
    steps = int(round(t_end / dt))
    stride = max(int(stride), 1)
    f = sys.rhs
    times = [0.0]
    states = [x.copy()]
    half = 0.5 * dt
    for k in range(steps):
        t = k * dt
        k1 = f(x, t)
        k2 = f(x + half * k1, t + half)
        k3 = f(x + half * k2, t + half)
        k4 = f(x + dt * k3, t + dt)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(f"state became non-finite after t = {t:g}", t)
        if (k + 1) % stride == 0 or k + 1 == steps:
            times.append((k + 1) * dt)
            states.append(x.copy())
    return Trajectory(np.array(times), np.array(states), dt, sys.n, sys.N, dict(meta or {}))


def _stacked_norms(V, norm):
    """Weighted p-norms over the last axis of V."""
    W = np.abs(V * norm.q)
    if norm.p == 1:
        return W.sum(axis=-1)
    if norm.p == 2:
        return np.sqrt((W * W).sum(axis=-1))
    return W.max(axis=-1)


def edge_differences(traj, G):
    """(K, m, n) array of x_head - x_tail for each canonical edge."""
    X = traj.nodes()
    E = graphs.incidence(G)
    if E.shape[0] != traj.N:
        raise InvalidArgument(f"graph has {E.shape[0]} nodes, trajectory has {traj.N}")
    return np.einsum("ke,tkj->tej", E, X)


def edge_series(traj, G, norm, phi=None):
    """Per-time weighted sum of edge-difference norms ``sum_e phi_e ||e(t)||_{p,Q}``."""
    Y = edge_differences(traj, G)
    per_edge = _stacked_norms(Y, norm)
    if phi is None:
        phi = np.ones(Y.shape[1])
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (Y.shape[1],):
        raise InvalidArgument(f"edge weights have length {phi.size}, graph has {Y.shape[1]} edges")
    return per_edge @ phi


def stacked_edge_norm(traj, G, norm, outer_weights=None):
    """Norm of the stacked edge vector (E^T kron I) x in the (Q_outer kron Q)-weighted p-norm."""
    Y = edge_differences(traj, G)
    m = Y.shape[1]
    outer = np.ones(m) if outer_weights is None else np.asarray(outer_weights, dtype=float)
    big = norm.kron(outer)
    return _stacked_norms(Y.reshape(len(traj.times), -1), big)


def deviation_series(traj, norm):
    """Norm of (x_1 - xbar, ..., x_N - xbar) in the (I kron Q)-weighted p-norm."""
    X = traj.nodes()
    dev = X - X.mean(axis=1, keepdims=True)
    big = norm.kron(np.ones(traj.N))
    return _stacked_norms(dev.reshape(len(traj.times), -1), big)


def difference_series(traj_u, traj_v, norm):
    """``||u(t) - v(t)||`` over the full network state, (I kron Q)-weighted."""
    if traj_u.states.shape != traj_v.states.shape:
        raise InvalidArgument("trajectories must share the time grid and dimension")
    big = norm.kron(np.ones(traj_u.N))
    return _stacked_norms(traj_u.states - traj_v.states, big)


def weighted_gradient_norm(snapshot, L, Q, p=1, N=None, n=None):
    """Discrete ``|| sin(pi w / L) du/dw ||_{1,Q}`` on the interior mesh w_i = i L / (N+1).

    Forward differences between adjacent mesh points are weighted by the sine
    at the edge midpoint and summed with the mesh spacing.
    """
    from .measures import parse_p

    if parse_p(p) != 1:
        raise InvalidArgument("the sine-weighted gradient norm is defined for p = 1")
    q = np.asarray(Q, dtype=float).reshape(-1)
    U = np.asarray(snapshot, dtype=float)
    if U.ndim == 1:
        U = U.reshape(-1, q.size)
    N = U.shape[0]
    h = L / (N + 1)
    grad = np.diff(U, axis=0) / h
    mid = (np.arange(1, N) + 0.5) * h
    w = np.sin(np.pi * mid / L)
    return float(h * np.sum(w * np.abs(grad * q).sum(axis=1)))


def gradient_series(traj, L, Q):
    return np.array([weighted_gradient_norm(s.reshape(traj.N, traj.n), L, Q) for s in traj.states])


def perron_edge_series(traj, norm):
    """Line-graph edge sum weighted by sin(k pi / N): ``sum_k sin(k pi/N) ||x_k - x_{k+1}||_{1,Q}``."""
    pk, _ = graphs.line_edge_weights(traj.N, 1)
    return edge_series(traj, graphs.line(traj.N), norm, pk)


def modal_basis(G):
    """Orthonormal Laplacian eigenvectors (columns) and eigenvalues, ascending."""
    w, V = graphs.numeric_spectrum(graphs.laplacian(G), return_vectors=True)
    # fix signs so the basis is reproducible: first nonzero entry of each vector positive
    for j in range(V.shape[1]):
        col = V[:, j]
        k = np.flatnonzero(np.abs(col) > 1e-12)[0]
        if col[k] < 0:
            V[:, j] = -col
    return w, V


def modal_decompose(x, G, basis=None):
    """Coefficients c_ij with x = sum_ij c_ij (v_i kron e_j); returns shape (N, n)."""
    w, V = basis if basis is not None else modal_basis(G)
    x = np.asarray(x, dtype=float)
    N = V.shape[0]
    if x.size % N:
        raise InvalidArgument(f"state of size {x.size} is not a multiple of {N} nodes")
    X = x.reshape(N, -1)
    return V.T @ X


def modal_reconstruct(C, G, basis=None):
    w, V = basis if basis is not None else modal_basis(G)
    return (V @ C).reshape(-1)


@dataclass(frozen=True)
class BoundForm:
    """Decay envelope: Exponential e^{ct}, StarAffine (1 + alpha t) e^{ct},
    GridAffine (alpha + beta t) e^{ct}."""

    kind: str
    c: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("exponential", "star_affine", "grid_affine"):
            raise InvalidArgument(f"unknown bound kind {self.kind!r}")
        if self.kind == "grid_affine" and self.alpha < 1:
            raise InvalidArgument("grid envelope needs alpha >= 1")

    def envelope(self, t):
        t = np.asarray(t, dtype=float)
        e = np.exp(self.c * t)
        if self.kind == "exponential":
            return e
        if self.kind == "star_affine":
            return (1.0 + self.alpha * t) * e
        return (self.alpha + self.beta * t) * e


@dataclass(frozen=True)
class BoundReport:
    passed: bool
    max_ratio: float
    argmax_t: float
    bound: BoundForm
    slack: float
    label: str = ""

    def as_record(self):
        return {
            "label": self.label,
            "bound": self.bound.kind,
            "c": self.bound.c,
            "alpha": self.bound.alpha,
            "beta": self.bound.beta,
            "slack": self.slack,
            "pass": self.passed,
            "max_ratio": self.max_ratio,
            "argmax_t": self.argmax_t,
        }


def verify_bound(t, s, bound, slack=1e-6, label=""):
    """Check s(t_k) <= envelope(t_k) s(0) (1 + slack) at every sample.

    ``max_ratio`` is the largest s(t_k) / (envelope(t_k) s(0)); the check passes
    iff it is at most 1 + slack. A zero initial value passes vacuously.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if t.size == 0 or s.size != t.size:
        raise InvalidArgument("series must be non-empty and match the time grid")
    if slack < 0:
        raise InvalidArgument("slack must be >= 0")
    s0 = s[0]
    if s0 <= 0:
        return BoundReport(True, 0.0, float(t[0]), bound, slack, label)
    ratio = s / (bound.envelope(t) * s0)
    k = int(np.argmax(ratio))
    return BoundReport(bool(ratio[k] <= 1.0 + slack), float(ratio[k]), float(t[k]), bound, slack, label)


def fit_grid_bound(t, s, c, slack=1e-6):
    """Smallest GridAffine envelope for the data: alpha = 1, then the least beta >= 0."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if s[0] <= 0:
        return BoundForm("grid_affine", c, 1.0, 0.0)
    r = s / (np.exp(c * t) * s[0])
    pos = t > 0
    beta = float(np.max(np.maximum((r[pos] - 1.0) / t[pos], 0.0), initial=0.0))
    # guard the division round-off so the fitted envelope passes at zero slack
    return BoundForm("grid_affine", c, 1.0, beta * (1.0 + 1e-12))


def star_spoke_bounds(traj, norm, c):
    """Per-spoke bounds for a star graph (hub last).

    Returns a list of (spoke index, series, BoundForm) with
    alpha_i = sum_{j != i, hub} ||(x_j - x_i)(0)||.
    """
    X = traj.nodes()
    hub = traj.N - 1
    out = []
    for i in range(hub):
        series = _stacked_norms(X[:, i] - X[:, hub], norm)
        alpha = sum(float(_stacked_norms(X[0, j] - X[0, i], norm)) for j in range(hub) if j != i)
        out.append((i, series, BoundForm("star_affine", c, alpha=alpha)))
    return out


def time_below(t, s, level):
    """First time the series drops below ``level`` (inf if it never does)."""
    idx = np.flatnonzero(np.asarray(s) < level)
    return float(t[idx[0]]) if idx.size else math.inf
