"""Scenario configs: one JSON document describes one reproducible experiment.

Validation is strict: unknown keys are rejected with their full key path and
every referenced name must resolve. See ``docs/config_schema.json``.
"""

from dataclasses import dataclass, field
import json
import math
from typing import Optional

import numpy as np

from . import graphs, models
from .errors import ConfigError, SyncertError
from .measures import NormSpec

COMMANDS = ("measure", "spectrum", "certify", "search-weight", "simulate", "pde")
MODEL_NAMES = ("goodwin", "biochemical", "linear_tv")

_TOP_KEYS = {"command", "model", "graph", "pde", "norm", "diffusion", "sampler", "run",
             "matrix", "lambda", "search", "output", "description"}
_MODEL_KEYS = {"name", "params", "signal"}
_NORM_KEYS = {"p", "Q"}
_DIFF_KEYS = {"d"}
_PDE_KEYS = {"L", "N", "bc"}
_SAMPLER_KEYS = {"strategy", "k", "count", "seed", "box", "t_interval", "t_count"}
_RUN_KEYS = {"t_end", "dt", "stride", "slack", "ic"}
_IC_KEYS = {"kind", "low", "high", "seed", "values", "base", "terms"}
_SEARCH_KEYS = {"budget", "seed", "p"}


@dataclass
class ScenarioConfig:
    command: str
    raw: dict
    model: Optional[dict] = None
    graph: Optional[dict] = None
    pde: Optional[dict] = None
    norm: Optional[dict] = None
    diffusion: Optional[dict] = None
    sampler: Optional[dict] = None
    run: dict = field(default_factory=dict)
    matrix: Optional[list] = None
    lam: Optional[float] = None
    search: dict = field(default_factory=dict)
    output: Optional[str] = None
    description: str = ""


def _keys(block, allowed, path):
    if not isinstance(block, dict):
        raise ConfigError("expected an object", path)
    extra = sorted(set(block) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) {extra}", f"{path}.{extra[0]}" if path else extra[0])


def _num(v, path, positive=False, nonneg=False, integer=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"expected a finite number, got {v!r}", path)
    if integer and int(v) != v:
        raise ConfigError(f"expected an integer, got {v!r}", path)
    if positive and v <= 0:
        raise ConfigError(f"must be positive, got {v!r}", path)
    if nonneg and v < 0:
        raise ConfigError(f"must be >= 0, got {v!r}", path)
    return int(v) if integer else float(v)


def _num_list(v, path, **kw):
    if not isinstance(v, list) or not v:
        raise ConfigError("expected a non-empty list of numbers", path)
    return [_num(x, f"{path}[{i}]", **kw) for i, x in enumerate(v)]


def _bound(v, path):
    if v in ("inf", "Infinity"):
        return math.inf
    if v in ("-inf", "-Infinity"):
        return -math.inf
    return _num(v, path)


def parse_config(data):
    """Validate a decoded JSON object and return a ScenarioConfig."""
    _keys(data, _TOP_KEYS, "")
    if "command" not in data:
        raise ConfigError("missing required key", "command")
    cmd = data["command"]
    if cmd not in COMMANDS:
        raise ConfigError(f"unknown command {cmd!r}; expected one of {list(COMMANDS)}", "command")
    cfg = ScenarioConfig(cmd, data)
    cfg.description = str(data.get("description", ""))
    cfg.output = data.get("output")

    if "model" in data:
        m = data["model"]
        _keys(m, _MODEL_KEYS, "model")
        if m.get("name") not in MODEL_NAMES:
            raise ConfigError(f"unknown model {m.get('name')!r}; expected one of {list(MODEL_NAMES)}",
                              "model.name")
        if "params" in m and not isinstance(m["params"], dict):
            raise ConfigError("expected an object", "model.params")
        if "signal" in m and m["name"] != "biochemical":
            raise ConfigError("only the biochemical model takes a signal", "model.signal")
        cfg.model = m
    if "graph" in data:
        _check_graph(data["graph"], "graph")
        cfg.graph = data["graph"]
    if "pde" in data:
        p = data["pde"]
        _keys(p, _PDE_KEYS, "pde")
        for key in ("L", "N"):
            if key not in p:
                raise ConfigError("missing required key", f"pde.{key}")
        _num(p["L"], "pde.L", positive=True)
        if _num(p["N"], "pde.N", integer=True) < 3:
            raise ConfigError("need at least 3 mesh points", "pde.N")
        if p.get("bc", "neumann") not in ("neumann", "dirichlet"):
            raise ConfigError(f"unknown boundary condition {p['bc']!r}", "pde.bc")
        cfg.pde = p
    if "norm" in data:
        nb = data["norm"]
        _keys(nb, _NORM_KEYS, "norm")
        if nb.get("p") not in (1, 2, "inf"):
            raise ConfigError(f"p must be 1, 2 or \"inf\", got {nb.get('p')!r}", "norm.p")
        if "Q" in nb:
            _num_list(nb["Q"], "norm.Q", positive=True)
        cfg.norm = nb
    if "diffusion" in data:
        db = data["diffusion"]
        _keys(db, _DIFF_KEYS, "diffusion")
        _num_list(db.get("d"), "diffusion.d", nonneg=True)
        cfg.diffusion = db
    if "sampler" in data:
        sb = data["sampler"]
        _keys(sb, _SAMPLER_KEYS, "sampler")
        strategy = sb.get("strategy", "grid")
        if strategy not in ("grid", "random"):
            raise ConfigError(f"unknown strategy {strategy!r}", "sampler.strategy")
        if strategy == "random" and "seed" not in sb:
            raise ConfigError("randomized sampler needs a seed", "sampler.seed")
        if "box" in sb:
            if not isinstance(sb["box"], list):
                raise ConfigError("expected a list of [lo, hi] pairs", "sampler.box")
            for i, iv in enumerate(sb["box"]):
                if not isinstance(iv, list) or len(iv) != 2:
                    raise ConfigError("expected [lo, hi]", f"sampler.box[{i}]")
                _num(iv[0], f"sampler.box[{i}][0]")
                _num(iv[1], f"sampler.box[{i}][1]")
        cfg.sampler = sb
    if "run" in data:
        rb = data["run"]
        _keys(rb, _RUN_KEYS, "run")
        for key in ("t_end", "dt"):
            if key in rb:
                _num(rb[key], f"run.{key}", positive=True)
        if "stride" in rb:
            _num(rb["stride"], "run.stride", positive=True, integer=True)
        if "slack" in rb:
            _num(rb["slack"], "run.slack", nonneg=True)
        if "ic" in rb:
            _check_ic(rb["ic"])
        cfg.run = rb
    if "matrix" in data:
        M = data["matrix"]
        if not isinstance(M, list) or not all(isinstance(r, list) for r in M):
            raise ConfigError("expected a list of rows", "matrix")
        for i, r in enumerate(M):
            _num_list(r, f"matrix[{i}]")
        cfg.matrix = M
    if "lambda" in data:
        cfg.lam = _num(data["lambda"], "lambda", nonneg=True)
    if "search" in data:
        _keys(data["search"], _SEARCH_KEYS, "search")
        cfg.search = data["search"]

    _check_requirements(cfg)
    return cfg


def _check_graph(g, path):
    if not isinstance(g, dict):
        raise ConfigError("expected an object", path)
    kind = g.get("kind")
    allowed = {
        "line": {"kind", "N"}, "complete": {"kind", "N"}, "star": {"kind", "N"},
        "grid": {"kind", "N1", "N2"}, "cartesian": {"kind", "factors"},
        "custom": {"kind", "N", "edges"},
    }
    if kind not in allowed:
        raise ConfigError(f"unknown graph kind {kind!r}", f"{path}.kind")
    _keys(g, allowed[kind], path)
    if kind == "cartesian":
        if not isinstance(g.get("factors"), list) or not g["factors"]:
            raise ConfigError("expected a non-empty list of graphs", f"{path}.factors")
        for i, f in enumerate(g["factors"]):
            _check_graph(f, f"{path}.factors[{i}]")
        return
    for key in allowed[kind] - {"kind", "edges"}:
        if key not in g:
            raise ConfigError("missing required key", f"{path}.{key}")
        if _num(g[key], f"{path}.{key}", integer=True) < 2:
            raise ConfigError("graph sizes must be >= 2", f"{path}.{key}")
    if kind == "custom" and not isinstance(g.get("edges"), list):
        raise ConfigError("expected a list of [i, j] pairs", f"{path}.edges")


def _check_ic(ic):
    _keys(ic, _IC_KEYS, "run.ic")
    kind = ic.get("kind")
    if kind not in ("uniform-random", "explicit", "cosine"):
        raise ConfigError(f"unknown initial-condition kind {kind!r}", "run.ic.kind")
    if kind == "uniform-random":
        for key in ("low", "high", "seed"):
            if key not in ic:
                raise ConfigError("missing required key", f"run.ic.{key}")
        _num_list(ic["low"], "run.ic.low")
        _num_list(ic["high"], "run.ic.high")
    if kind == "explicit" and not isinstance(ic.get("values"), list):
        raise ConfigError("expected a list of per-compartment states", "run.ic.values")
    if kind == "cosine":
        # component j: base[j] + sum over terms[j] of amp * cos(mode * pi * w / L)
        if "base" not in ic:
            raise ConfigError("missing required key", "run.ic.base")
        base = _num_list(ic["base"], "run.ic.base")
        terms = ic.get("terms", [[] for _ in base])
        if not isinstance(terms, list) or len(terms) != len(base):
            raise ConfigError("expected one list of [amplitude, mode] pairs per component", "run.ic.terms")
        for j, tj in enumerate(terms):
            if not isinstance(tj, list):
                raise ConfigError("expected a list of [amplitude, mode] pairs", f"run.ic.terms[{j}]")
            for i, pair in enumerate(tj):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ConfigError("expected [amplitude, mode]", f"run.ic.terms[{j}][{i}]")
                _num(pair[0], f"run.ic.terms[{j}][{i}][0]")
                _num(pair[1], f"run.ic.terms[{j}][{i}][1]", nonneg=True)


_REQUIRED = {
    "measure": ("matrix", "norm"),
    "spectrum": ("graph",),
    "certify": ("model", "norm", "sampler"),
    "search-weight": ("model", "sampler"),
    "simulate": ("model", "graph", "diffusion", "run"),
    "pde": ("model", "pde", "diffusion", "run"),
}


def _check_requirements(cfg):
    for key in _REQUIRED[cfg.command]:
        if key not in cfg.raw:
            raise ConfigError(f"required by command {cfg.command!r}", key)
    if cfg.model is not None:
        try:
            model = build_model(cfg)
        except ConfigError:
            raise
        except SyncertError as exc:
            raise ConfigError(str(exc), "model") from None
        n = model.n
        if cfg.norm and "Q" in cfg.norm and len(cfg.norm["Q"]) != n:
            raise ConfigError(f"needs {n} weights for model {model.name}", "norm.Q")
        if cfg.diffusion and len(cfg.diffusion["d"]) != n:
            raise ConfigError(f"needs {n} coefficients for model {model.name}", "diffusion.d")
        if cfg.sampler and "box" in cfg.sampler and len(cfg.sampler["box"]) != n:
            raise ConfigError(f"needs {n} intervals for model {model.name}", "sampler.box")
    if cfg.graph is not None:
        try:
            build_graph(cfg.graph)
        except SyncertError as exc:
            raise ConfigError(str(exc), "graph") from None


def load_config(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                          str(path)) from None
    return parse_config(data)


def build_model(cfg):
    m = cfg.model
    params = dict(m.get("params", {}))
    if m["name"] == "linear_tv":
        if "A" not in params:
            raise ConfigError("missing required key", "model.params.A")
        params["A"] = np.asarray(params["A"], dtype=float)
    return models.make_model(m["name"], params, m.get("signal"))


def build_graph(g):
    kind = g["kind"]
    if kind == "line":
        return graphs.line(g["N"])
    if kind == "complete":
        return graphs.complete(g["N"])
    if kind == "star":
        return graphs.star(g["N"])
    if kind == "grid":
        return graphs.grid(g["N1"], g["N2"])
    if kind == "cartesian":
        return graphs.cartesian(*[build_graph(f) for f in g["factors"]])
    return graphs.custom(g["N"], g["edges"])


def build_norm(cfg, n):
    nb = cfg.norm or {"p": 2}
    q = nb.get("Q", [1.0] * n)
    return NormSpec(nb["p"], q)


def build_diffusion(cfg, n):
    if cfg.diffusion is None:
        return None
    d = cfg.diffusion["d"]
    if not any(v > 0 for v in d):
        return models.zero_diffusion(n)
    return models.DiffusionSpec(d)


def build_samples(cfg, model, seed=None):
    sb = dict(cfg.sampler)
    box = sb.get("box")
    if box is not None:
        box = [(_bound(lo, "sampler.box"), _bound(hi, "sampler.box")) for lo, hi in box]
    strategy = sb.get("strategy", "grid")
    t_int = tuple(sb.get("t_interval", (0.0, 0.0)))
    try:
        return models.sample_domain(
            model, strategy, k=sb.get("k", 3), count=sb.get("count", 100),
            seed=seed if seed is not None else sb.get("seed"), box=box,
            t_interval=t_int, t_count=sb.get("t_count"),
        )
    except SyncertError as exc:
        raise ConfigError(str(exc), "sampler") from None
