"""Built-in vector fields with analytic Jacobians.

Right-hand sides act on the last axis, so ``model.rhs(X, t)`` works for a
single state of shape (n,) and for a stack of compartments of shape (N, n).
"""

from dataclasses import dataclass, field
import itertools
import math
from typing import Callable, Optional

import numpy as np

from .errors import DomainViolation, InvalidArgument, Unsupported

GOODWIN_DEFAULTS = {
    "a": 150.0, "k": 1.0, "b": 0.2, "alpha": 0.2, "beta": 0.2,
    "gamma": 0.2, "delta": 15.0, "k_M": 1.0,
}
BIOCHEMICAL_DEFAULTS = {"delta": 20.0, "k1": 0.5, "k2": 5.0, "S_Y": 0.1}
# z(t) = offset + amplitude * sin(omega t)
BIOCHEMICAL_SIGNAL_DEFAULTS = {"offset": 20.0, "amplitude": 20.0, "omega": 10.0}


@dataclass(frozen=True)
class DiffusionSpec:
    """Diagonal diffusion coefficients d_1..d_n."""

    d: tuple

    def __post_init__(self):
        d = tuple(float(v) for v in np.atleast_1d(np.asarray(self.d, dtype=float)))
        if not d or not all(math.isfinite(v) and v >= 0 for v in d):
            raise InvalidArgument(f"diffusion coefficients must be finite and >= 0, got {d}")
        if not any(v > 0 for v in d):
            raise InvalidArgument("at least one diffusion coefficient must be positive")
        object.__setattr__(self, "d", d)

    @property
    def n(self):
        return len(self.d)

    @property
    def matrix(self):
        return np.diag(self.d)

    @property
    def vector(self):
        return np.asarray(self.d)


def zero_diffusion(n):
    """All-zero diffusion, for uncoupled certificates (bypasses the d_j > 0 invariant)."""
    spec = object.__new__(DiffusionSpec)
    object.__setattr__(spec, "d", (0.0,) * n)
    return spec


@dataclass(frozen=True)
class VectorFieldModel:
    name: str
    n: int
    rhs: Callable
    jacobian_fn: Callable
    domain: tuple
    params: dict = field(default_factory=dict)
    signals: dict = field(default_factory=dict)
    constant_matrix: Optional[np.ndarray] = None
    autonomous: bool = True
    jacobian_time_dependent: bool = False

    def in_domain(self, x, tol=0.0):
        x = np.asarray(x, dtype=float)
        return all(lo - tol <= xi <= hi + tol for xi, (lo, hi) in zip(x, self.domain))

    def jacobian(self, x, t=0.0):
        return jacobian_at(self, x, t)


def _require_positive(params, names):
    for name in names:
        v = params[name]
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise InvalidArgument(f"parameter {name} must be positive, got {v!r}")


def _merge(defaults, params, model):
    params = dict(params or {})
    unknown = set(params) - set(defaults)
    if unknown:
        raise InvalidArgument(f"unknown {model} parameter(s): {sorted(unknown)}")
    out = dict(defaults)
    out.update({k: float(v) for k, v in params.items()})
    return out


def goodwin(params=None):
    p = _merge(GOODWIN_DEFAULTS, params, "goodwin")
    _require_positive(p, GOODWIN_DEFAULTS)
    a, k, b, al, be, ga, de, km = (p[s] for s in ("a", "k", "b", "alpha", "beta", "gamma", "delta", "k_M"))

    def rhs(X, t=0.0):
        X = np.asarray(X, dtype=float)
        x, y, z = X[..., 0], X[..., 1], X[..., 2]
        out = np.empty(X.shape)
        out[..., 0] = a / (k + z) - b * x
        out[..., 1] = al * x - be * y
        out[..., 2] = ga * y - de * z / (km + z)
        return out

    def jac(X, t=0.0):
        z = float(X[2])
        return np.array([
            [-b, 0.0, -a / (k + z) ** 2],
            [al, -be, 0.0],
            [0.0, ga, -de * km / (km + z) ** 2],
        ])

    inf = math.inf
    return VectorFieldModel("goodwin", 3, rhs, jac, ((0.0, inf), (0.0, inf), (0.0, inf)), p)


def sinusoid(offset, amplitude, omega):
    def z(t):
        return offset + amplitude * np.sin(omega * t)
    return z


def biochemical(params=None, signal=None):
    """Reduced enzyme/substrate model with external production signal z(t).

    ``signal`` is either a callable z(t) or a dict of sinusoid parameters
    (offset, amplitude, omega).
    """
    p = _merge(BIOCHEMICAL_DEFAULTS, params, "biochemical")
    _require_positive(p, BIOCHEMICAL_DEFAULTS)
    if signal is None or isinstance(signal, dict):
        sp = dict(BIOCHEMICAL_SIGNAL_DEFAULTS)
        unknown = set(signal or {}) - set(sp)
        if unknown:
            raise InvalidArgument(f"unknown signal parameter(s): {sorted(unknown)}")
        sp.update(signal or {})
        if sp["offset"] < abs(sp["amplitude"]):
            raise InvalidArgument("signal z(t) must stay nonnegative (offset >= |amplitude|)")
        zfun = sinusoid(sp["offset"], sp["amplitude"], sp["omega"])
    elif callable(signal):
        zfun = signal
    else:
        raise InvalidArgument("signal must be a callable or a dict of sinusoid parameters")
    de, k1, k2, SY = p["delta"], p["k1"], p["k2"], p["S_Y"]

    def rhs(X, t=0.0):
        X = np.asarray(X, dtype=float)
        x, y = X[..., 0], X[..., 1]
        bind = k2 * (SY - y) * x
        out = np.empty(X.shape)
        out[..., 0] = zfun(t) - de * x + k1 * y - bind
        out[..., 1] = bind - k1 * y
        return out

    def jac(X, t=0.0):
        x, y = float(X[0]), float(X[1])
        a = k2 * (SY - y)
        b = k1 + k2 * x
        return np.array([[-de - a, b], [a, -b]])

    return VectorFieldModel(
        "biochemical", 2, rhs, jac, ((0.0, math.inf), (0.0, SY)), p, {"z": zfun}, autonomous=False,
    )


def linear_tv(A):
    """Linear field F(x, t) = A(t) x; ``A`` is a constant matrix or a callable t -> matrix."""
    if callable(A):
        Afun = A
        A0 = np.asarray(Afun(0.0), dtype=float)
        const = None
    else:
        A0 = np.asarray(A, dtype=float)
        const = A0
        Afun = None
    if A0.ndim != 2 or A0.shape[0] != A0.shape[1]:
        raise InvalidArgument(f"A must be square, got shape {A0.shape}")
    n = A0.shape[0]

    def mat(t):
        return const if const is not None else np.asarray(Afun(t), dtype=float)

    def rhs(X, t=0.0):
        return np.asarray(X, dtype=float) @ mat(t).T

    def jac(X, t=0.0):
        return np.array(mat(t), dtype=float)

    inf = math.inf
    return VectorFieldModel(
        "linear_tv", n, rhs, jac, tuple((-inf, inf) for _ in range(n)), {},
        constant_matrix=const, autonomous=const is not None,
        jacobian_time_dependent=const is None,
    )


def make_model(name, params=None, signal=None):
    if name == "goodwin":
        return goodwin(params)
    if name == "biochemical":
        return biochemical(params, signal)
    if name == "linear_tv":
        if params is None or "A" not in params:
            raise InvalidArgument("linear_tv needs parameter A")
        extra = set(params) - {"A"}
        if extra:
            raise InvalidArgument(f"unknown linear_tv parameter(s): {sorted(extra)}")
        return linear_tv(params["A"])
    raise Unsupported(f"unknown model {name!r}")


def jacobian_at(model, x, t=0.0):
    x = np.asarray(x, dtype=float)
    if x.shape != (model.n,):
        raise InvalidArgument(f"state must have shape ({model.n},), got {x.shape}")
    if not model.in_domain(x):
        raise DomainViolation(f"state {x.tolist()} lies outside the {model.name} domain {model.domain}")
    return model.jacobian_fn(x, t)


def fd_jacobian(model, x, t=0.0, step=1e-6):
    """Central finite-difference Jacobian of ``model.rhs`` (oracle for the analytic one)."""
    x = np.asarray(x, dtype=float)
    J = np.empty((model.n, model.n))
    for j in range(model.n):
        e = np.zeros(model.n)
        e[j] = step
        J[:, j] = (model.rhs(x + e, t) - model.rhs(x - e, t)) / (2 * step)
    return J


@dataclass(frozen=True)
class Samples:
    """Deterministic (state, time) sample set used to approximate suprema."""

    states: np.ndarray
    times: np.ndarray

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        for x, t in zip(self.states, self.times):
            yield x, float(t)

    def __getitem__(self, i):
        return self.states[i], float(self.times[i])

    def merged(self, other):
        return Samples(np.vstack([self.states, other.states]), np.concatenate([self.times, other.times]))


def _resolve_box(model, box):
    if box is None:
        box = model.domain
    box = [(float(lo), float(hi)) for lo, hi in box]
    if len(box) != model.n:
        raise InvalidArgument(f"box has {len(box)} axes, model has {model.n}")
    for i, (lo, hi) in enumerate(box):
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidArgument(f"axis {i} is unbounded; pass an explicit finite sampling box")
        if hi < lo:
            raise InvalidArgument(f"axis {i} has empty interval [{lo}, {hi}]")
    return box


def sample_domain(model, strategy="grid", k=3, count=100, seed=None, box=None,
                  t_interval=(0.0, 0.0), t_count=None):
    """Sample states from a finite box and times from ``t_interval``.

    ``strategy="grid"`` takes k points per axis (corners always included) crossed
    with ``t_count`` evenly spaced times. ``strategy="random"`` draws ``count``
    uniform (state, time) pairs from ``np.random.default_rng(seed)`` and adds every
    box corner at both time endpoints.
    """
    box = _resolve_box(model, box)
    t0, t1 = (float(v) for v in t_interval)
    if t1 < t0:
        raise InvalidArgument("time interval must be increasing")
    corners = np.array(list(itertools.product(*box)), dtype=float)
    if strategy == "grid":
        if int(k) < 2:
            raise InvalidArgument("grid sampling needs k >= 2 points per axis")
        axes = [np.linspace(lo, hi, int(k)) for lo, hi in box]
        states = np.array(list(itertools.product(*axes)), dtype=float)
        if t_count is None:
            t_count = 1 if t1 == t0 else int(k)
        times = np.unique(np.linspace(t0, t1, max(int(t_count), 1 if t0 == t1 else 2)))
    elif strategy in ("random", "uniform-random", "uniform_random"):
        if seed is None:
            raise InvalidArgument("random sampling needs an explicit seed")
        rng = np.random.default_rng(seed)
        lo = np.array([b[0] for b in box])
        hi = np.array([b[1] for b in box])
        rs = lo + (hi - lo) * rng.random((int(count), model.n))
        rt = t0 + (t1 - t0) * rng.random(int(count))
        ends = np.unique([t0, t1])
        cs = np.repeat(corners, len(ends), axis=0)
        ct = np.tile(ends, len(corners))
        return Samples(np.vstack([cs, rs]), np.concatenate([ct, rt]))
    else:
        raise InvalidArgument(f"unknown sampling strategy {strategy!r}")
    S = np.repeat(states, len(times), axis=0)
    T = np.tile(times, len(states))
    return Samples(S, T)
