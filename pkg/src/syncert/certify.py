"""Contraction and synchronization certificates from sampled Jacobian measures.

Every certificate value is a maximum over a finite sample set, which is a
lower bound on the true supremum over the state box; certificates carry a
caveat flag saying so.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from . import graphs
from .errors import InvalidArgument, Unsupported
from .measures import INF, NormSpec, matrix_measure
from .models import DiffusionSpec, jacobian_at

CAVEAT = "sampled supremum: lower bound of the true sup over the box"


@dataclass(frozen=True)
class Certificate:
    c: float
    norm: NormSpec
    lam: float
    D: tuple
    sample_count: int
    argmax_state: tuple
    argmax_time: float
    graph: str = ""
    rule: str = ""
    caveat: str = CAVEAT

    @property
    def verdict(self):
        return "CONTRACTIVE" if self.c < 0 else "INCONCLUSIVE"

    @property
    def contractive(self):
        return self.c < 0

    def as_record(self):
        return {
            "c": self.c,
            "p": "inf" if self.norm.p == INF else self.norm.p,
            "Q": list(self.norm.weights),
            "lambda": self.lam,
            "D": list(self.D),
            "samples": self.sample_count,
            "argmax_state": list(self.argmax_state),
            "argmax_time": self.argmax_time,
            "verdict": self.verdict,
            "caveat": self.caveat,
            "graph": self.graph,
            "rule": self.rule,
        }


def _dvec(D, n):
    if D is None:
        return np.zeros(n)
    d = np.asarray(D.d if isinstance(D, DiffusionSpec) else D, dtype=float)
    if d.shape != (n,):
        raise InvalidArgument(f"diffusion vector has length {d.size}, model has {n}")
    return d


def shifted_measures(model, norm, lam, D, samples):
    """Measure of J_F(x, t) - lam * diag(D) at every sample, in sample order."""
    if lam < 0:
        raise InvalidArgument("shift lambda must be >= 0")
    if norm.n != model.n:
        raise InvalidArgument(f"norm has {norm.n} weights, model has {model.n} states")
    shift = lam * np.diag(_dvec(D, model.n))
    return np.array([matrix_measure(jacobian_at(model, x, t) - shift, norm) for x, t in samples])


def sup_measure(model, norm, lam, D, samples):
    values = shifted_measures(model, norm, lam, D, samples)
    if values.size == 0:
        raise InvalidArgument("empty sample set")
    i = int(np.argmax(values))  # first maximizer, independent of evaluation order
    x, t = samples[i]
    return Certificate(
        c=float(values[i]), norm=norm, lam=float(lam), D=tuple(_dvec(D, model.n)),
        sample_count=len(values), argmax_state=tuple(float(v) for v in x), argmax_time=t,
    )


def _factor_kinds(G):
    if G.kind in ("grid", "cartesian"):
        return {k for f in G.factors for k in _factor_kinds(f)}
    return {G.kind}


def sync_rule(G, norm):
    """Name of the result that admits the (graph, norm) pair, or raise Unsupported."""
    if G.n_nodes == 2:
        return "two-compartment, any norm"
    if G.kind == "complete":
        return "complete graph, any norm (K = N I)"
    if G.kind == "star":
        return "star graph, any norm, affine-exponential spoke bound"
    if G.kind == "line":
        return "line graph, weighted L^p with sin(k pi/N) edge weights"
    if G.kind in ("grid", "cartesian") and _factor_kinds(G) <= {"line", "complete", "star"}:
        return "Cartesian product of line/complete/star factors, polynomial-exponential bound"
    if norm.p == 2:
        if G.is_tree():
            return "tree, weighted L^2 edge bound"
        return "arbitrary graph, weighted L^2 deviation-from-mean bound"
    raise Unsupported(
        f"{G.describe()} with p={norm.p}: only weighted L^2 results cover arbitrary graphs "
        "(no L^1/L^inf synchronization theorem for this topology)"
    )


def check_sync_condition(model, G, D, norm, samples):
    """Certificate for ``sup M[J_F - lambda_2 D]`` with lambda_2 of ``G``."""
    rule = sync_rule(G, norm)
    lam = graphs.lambda2(G)
    cert = sup_measure(model, norm, lam, D, samples)
    return replace(cert, graph=G.describe(), rule=rule)


def search_weight(model, p, lam, D, samples, budget=400, seed=0, start=None):
    """Coordinate search over positive diagonal weights minimizing the sampled measure.

    The first weight is pinned at 1 (measures are invariant under scaling Q).
    Each coordinate is multiplied or divided by a step factor that shrinks from
    2 toward 1.01 when no move helps. Ties in the certificate value are broken
    by the mean measure over samples, which lets the search cross kinks where
    a single active column hides progress elsewhere. Returns ``(weights, Certificate)``.
    """
    n = model.n
    if budget < 1:
        raise InvalidArgument("budget must be >= 1")
    rng = np.random.default_rng(seed)
    logq = np.zeros(n) if start is None else np.log(np.asarray(start, dtype=float) / start[0])
    evals = 0

    def score(lq):
        nonlocal evals
        evals += 1
        vals = shifted_measures(model, NormSpec(p, np.exp(lq)), lam, D, samples)
        return float(vals.max()), float(vals.mean())

    best = score(logq)
    identity_best = score(np.zeros(n)) if start is not None else best
    step = math.log(2.0)
    min_step = math.log(1.01)
    tol = 1e-12
    while evals < budget and step >= min_step and n > 1:
        improved = False
        for i in rng.permutation(np.arange(1, n)):
            for sgn in (1.0, -1.0):
                if evals >= budget:
                    break
                trial = logq.copy()
                trial[i] += sgn * step
                s = score(trial)
                if s[0] < best[0] - tol or (s[0] <= best[0] + tol and s[1] < best[1] - tol):
                    logq, best, improved = trial, s, True
                    break
        if not improved:
            step /= 2.0
    if identity_best[0] < best[0]:
        logq = np.zeros(n)
    q = tuple(float(v) for v in np.exp(logq))
    return q, sup_measure(model, NormSpec(p, q), lam, D, samples)


def arcak_goodwin_inequality(params, lam, d1, d2, d3):
    """Evaluate the diffusion condition alpha*gamma*a / (k (b + lam d1)(beta + lam d2) lam d3) < 4.

    Returns ``(status, lhs)`` where status is "holds", "fails" or "not-applicable"
    (the last when d3 = 0, where the left side is undefined).
    """
    if d3 == 0:
        return "not-applicable", math.inf
    p = params
    lhs = p["alpha"] * p["gamma"] * p["a"] / (
        p["k"] * (p["b"] + lam * d1) * (p["beta"] + lam * d2) * lam * d3
    )
    return ("holds" if lhs < 4 else "fails"), lhs


def othmer_condition(model, samples, L, D, norm):
    """Compare the sampled sup of the induced norm of J_F against (pi^2 / L^2) min d_i.

    Returns ``(status, sup_norm, threshold)``; min d_i = 0 fails immediately.
    """
    from .measures import induced_matrix_norm

    d = _dvec(D, model.n)
    threshold = math.pi ** 2 / L ** 2 * float(d.min())
    if d.min() == 0:
        return "fails", math.nan, threshold
    sup_norm = max(induced_matrix_norm(jacobian_at(model, x, t), norm) for x, t in samples)
    return ("holds" if sup_norm < threshold else "fails"), sup_norm, threshold


@dataclass(frozen=True)
class Witness:
    x: float
    y: float
    b: float
    value: float
    symmetric_part: np.ndarray = field(repr=False, default=None)


def m2_nonnegativity_witness(q, lam, D, params=None, b_cap=1e12):
    """Find a biochemical state where M_{2,Q}[J_F - lam D] > 0 with Q = diag(1, q).

    Searches y = S_Y (so k2 (S_Y - y) = 0) and b = k1 + k2 x over a doubling grid
    starting at k1. Raises RuntimeError if ``b_cap`` is reached without a witness.
    """
    from .models import BIOCHEMICAL_DEFAULTS, biochemical

    p = dict(BIOCHEMICAL_DEFAULTS)
    p.update(params or {})
    model = biochemical(p)
    norm = NormSpec(2, (1.0, q))
    shift = lam * np.diag(_dvec(D, 2))
    k1, k2, SY = p["k1"], p["k2"], p["S_Y"]
    b = k1
    while b <= b_cap:
        x = (b - k1) / k2
        A = jacobian_at(model, np.array([x, SY])) - shift
        val = matrix_measure(A, norm)
        if val > 0:
            B = A * norm.q[:, None] / norm.q[None, :]
            return Witness(x, SY, b, val, 0.5 * (B + B.T))
        b *= 2.0
    raise RuntimeError(f"no positive L2 measure found for q={q}, lambda={lam} up to b={b_cap:g}")
