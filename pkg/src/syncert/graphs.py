"""Interconnection topologies and their spectral objects.

Edges are oriented tail < head in node order and sorted lexicographically, so
incidence matrices (and everything built from them) are reproducible. The
incidence column of edge (i, j) has -1 at the tail i and +1 at the head j.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import InvalidArgument, Unsupported
from .linalg import jacobi_eigh

KINDS = ("line", "complete", "star", "grid", "cartesian", "custom")


@dataclass(frozen=True)
class Graph:
    """An undirected, connected interconnection graph.

    Build instances with :func:`line`, :func:`complete`, :func:`star`,
    :func:`grid`, :func:`cartesian` or :func:`custom` rather than directly.
    """

    kind: str
    sizes: tuple = ()
    factors: tuple = ()
    custom_edges: tuple = ()

    @property
    def n_nodes(self):
        if self.kind in ("line", "complete", "star"):
            return self.sizes[0]
        if self.kind == "custom":
            return self.sizes[0]
        return math.prod(f.n_nodes for f in self.factors)

    @property
    def edges(self):
        return edge_list(self)

    @property
    def n_edges(self):
        return len(self.edges)

    def describe(self):
        if self.kind in ("line", "complete", "star", "custom"):
            return f"{self.kind}({self.sizes[0]})"
        if self.kind == "grid":
            return f"grid({self.sizes[0]}x{self.sizes[1]})"
        return "cartesian(" + ", ".join(f.describe() for f in self.factors) + ")"

    def is_tree(self):
        return self.n_edges == self.n_nodes - 1


def _check_n(N, minimum=2):
    if int(N) != N or N < minimum:
        raise InvalidArgument(f"graph size must be an integer >= {minimum}, got {N}")
    return int(N)


def line(N):
    return Graph("line", (_check_n(N),))


def complete(N):
    return Graph("complete", (_check_n(N),))


def star(N):
    """Star graph on N nodes in total; the hub is the last node."""
    return Graph("star", (_check_n(N),))


def grid(N1, N2):
    return Graph("grid", (_check_n(N1), _check_n(N2)), (line(N1), line(N2)))


def cartesian(*factors):
    if len(factors) == 1 and isinstance(factors[0], (list, tuple)):
        factors = tuple(factors[0])
    if len(factors) < 1 or not all(isinstance(f, Graph) for f in factors):
        raise InvalidArgument("cartesian product needs at least one Graph factor")
    return Graph("cartesian", (), tuple(factors))


def custom(n, edges):
    n = _check_n(n)
    canon = set()
    for e in edges:
        i, j = (int(v) for v in e)
        if not (0 <= i < n and 0 <= j < n):
            raise InvalidArgument(f"edge {e} references a node outside 0..{n - 1}")
        if i == j:
            raise InvalidArgument(f"self-loop at node {i}")
        key = (min(i, j), max(i, j))
        if key in canon:
            raise InvalidArgument(f"duplicate edge {key}")
        canon.add(key)
    g = Graph("custom", (n,), (), tuple(sorted(canon)))
    if not _connected(n, g.custom_edges):
        raise InvalidArgument("custom graph is disconnected")
    return g


def _connected(n, edges):
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def laplacian(G):
    """Graph Laplacian; Cartesian products use the Kronecker sum of factor Laplacians."""
    N = G.n_nodes
    if G.kind == "line":
        L = 2.0 * np.eye(N) - np.eye(N, k=1) - np.eye(N, k=-1)
        L[0, 0] = L[-1, -1] = 1.0
        return L
    if G.kind == "complete":
        return N * np.eye(N) - np.ones((N, N))
    if G.kind == "star":
        L = np.eye(N)
        L[-1, -1] = N - 1
        L[:-1, -1] = L[-1, :-1] = -1.0
        return L
    if G.kind == "custom":
        L = np.zeros((N, N))
        for i, j in G.custom_edges:
            L[i, j] = L[j, i] = -1.0
            L[i, i] += 1.0
            L[j, j] += 1.0
        return L
    sizes = [f.n_nodes for f in G.factors]
    L = np.zeros((N, N))
    for k, f in enumerate(G.factors):
        term = np.ones((1, 1))
        for m, size in enumerate(sizes):
            term = np.kron(term, laplacian(f) if m == k else np.eye(size))
        L += term
    return L


def edge_list(G):
    """Canonical edges (tail, head), tail < head, in lexicographic order."""
    if G.kind == "custom":
        return list(G.custom_edges)
    L = laplacian(G)
    rows, cols = np.nonzero(np.triu(L, k=1))
    return sorted(zip(rows.tolist(), cols.tolist()))


def incidence(G):
    """N x m incidence matrix with E E^T equal to the Laplacian."""
    edges = edge_list(G)
    E = np.zeros((G.n_nodes, len(edges)))
    for k, (i, j) in enumerate(edges):
        E[i, k] = -1.0
        E[j, k] = 1.0
    return E


def k_matrix(G, mode="edge_laplacian"):
    """An m x m matrix K with E^T L = K E^T.

    ``mode="edge_laplacian"`` gives K = E^T E for any graph;
    ``mode="complete_shortcut"`` gives K = N I and is only valid for complete graphs.
    """
    mode = mode.lower().replace("-", "_")
    E = incidence(G)
    if mode in ("edge_laplacian", "edgelaplacian"):
        return E.T @ E
    if mode in ("complete_shortcut", "completeshortcut"):
        if G.kind != "complete":
            raise InvalidArgument(f"the K = N I shortcut needs a complete graph, got {G.describe()}")
        return G.n_nodes * np.eye(E.shape[1])
    raise InvalidArgument(f"unknown k_matrix mode {mode!r}")


def lambda2_closed_form(G):
    """Algebraic connectivity from the known closed forms."""
    N = G.n_nodes
    if G.kind == "line":
        return 4.0 * math.sin(math.pi / (2 * N)) ** 2
    if G.kind == "complete":
        return float(N)
    if G.kind == "star":
        # Star(2) is a single edge with spectrum {0, 2}
        return 1.0 if N >= 3 else 2.0
    if G.kind in ("grid", "cartesian"):
        return min(lambda2_closed_form(f) for f in G.factors)
    raise Unsupported(f"no closed form for {G.describe()}; use numeric_spectrum")


def numeric_spectrum(S, return_vectors=False, check=1e-9):
    """All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi.

    Raises InvalidArgument for asymmetric input or if the reconstruction
    residual ``max|S - V diag(w) V^T|`` exceeds ``check`` (scaled by ``max(1, max|S|)``).
    """
    S = np.asarray(S, dtype=float)
    w, V = jacobi_eigh(S)
    resid = np.max(np.abs(S - (V * w) @ V.T), initial=0.0)
    if resid > check * max(1.0, np.max(np.abs(S), initial=0.0)):
        raise InvalidArgument(f"eigen-decomposition residual {resid:.3g} exceeds tolerance")
    return (w, V) if return_vectors else w


def lambda2_numeric(G):
    return float(numeric_spectrum(laplacian(G))[1])


def lambda2(G):
    """Closed-form algebraic connectivity where one exists, numeric otherwise."""
    try:
        return lambda2_closed_form(G)
    except Unsupported:
        return lambda2_numeric(G)


def tridiagonal_spectrum(v, a, b, s, t, n, tol=1e-12):
    """Closed-form spectrum of the tridiagonal matrix with diagonal (a+v, v, ..., v, b+v),
    subdiagonal s and superdiagonal t, returned ascending.

    Two cases have closed forms: a = b = 0, and a = b = +-sqrt(s t). In the
    second case the eigenvalues are v - 2 a cos(j pi / n), j = 1..n; the
    diagonal similarity diag((-1)^i) flips the sign of s and t without
    changing the spectrum, so only the sign of a matters.
    """
    n = int(n)
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    if s * t < 0:
        raise InvalidArgument("s*t must be nonnegative")
    sigma = math.sqrt(s * t)
    j = np.arange(1, n + 1)
    if abs(a) <= tol and abs(b) <= tol:
        lam = v - 2.0 * sigma * np.cos(j * np.pi / (n + 1))
    elif abs(a - b) <= tol and abs(abs(a) - sigma) <= tol:
        lam = v - 2.0 * a * np.cos(j * np.pi / n)
    else:
        raise Unsupported("closed form needs a = b = 0 or a = b = +-sqrt(s t)")
    return np.sort(lam)


def tridiagonal_matrix(v, a, b, s, t, n):
    M = v * np.eye(n) + s * np.eye(n, k=-1) + t * np.eye(n, k=1)
    M[0, 0] += a
    M[-1, -1] += b
    return M


def line_edge_weights(N, p):
    """Perron edge weights sin(k pi / N) of a line graph and the diagonal of Q_p.

    Q_p has entries ``p_k ** ((2 - p) / p)``, which is ``1 / p_k`` for p = inf.
    """
    from .measures import INF, parse_p

    N = int(N)
    if N < 3:
        raise InvalidArgument("line edge weights need N >= 3")
    p = parse_p(p)
    pk = np.sin(np.arange(1, N) * np.pi / N)
    if p == INF:
        qp = 1.0 / pk
    else:
        qp = pk ** ((2.0 - p) / p)
    return pk, qp
