"""Command-line front end: ``syncert run <config>`` and ``syncert validate <config>``.

Exit codes: 0 ok, 2 config error, 3 runtime error.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import certify, graphs, reports, simulate
from .config import (build_diffusion, build_graph, build_model, build_norm, build_samples,
                     load_config)
from .errors import ConfigError, DivergenceError, DomainViolation, SyncertError, Unsupported
from .measures import NormSpec, induced_matrix_norm, matrix_measure, parse_p

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _write_json(path, record):
    _write(path, json.dumps(record, indent=2, sort_keys=True) + "\n")


def _seed(cfg, block_seed, override):
    return override if override is not None else block_seed


def initial_state(cfg, n, N, mesh=None, L=None, seed=None):
    ic = cfg.run.get("ic")
    if ic is None:
        raise ConfigError("simulation needs an initial condition", "run.ic")
    kind = ic["kind"]
    if kind == "uniform-random":
        if len(ic["low"]) != n or len(ic["high"]) != n:
            raise ConfigError(f"needs {n} entries per bound", "run.ic.low")
        rng = np.random.default_rng(_seed(cfg, ic["seed"], seed))
        return rng.uniform(ic["low"], ic["high"], (N, n))
    if kind == "explicit":
        X = np.asarray(ic["values"], dtype=float)
        if X.shape != (N, n):
            raise ConfigError(f"expected {N} states of length {n}, got shape {X.shape}", "run.ic.values")
        return X
    if mesh is None:
        raise ConfigError("cosine initial conditions need a pde block", "run.ic.kind")
    if len(ic["base"]) != n:
        raise ConfigError(f"needs {n} entries", "run.ic.base")
    X = np.empty((N, n))
    for j, b in enumerate(ic["base"]):
        col = np.full(N, float(b))
        for amp, mode in ic.get("terms", [[]] * n)[j]:
            col += amp * np.cos(mode * math.pi * mesh / L)
        X[:, j] = col
    return X


def _certificate_lambda(cfg, G=None):
    if cfg.lam is not None:
        return cfg.lam
    if G is not None:
        return graphs.lambda2(G)
    if cfg.pde is not None:
        return math.pi ** 2 / float(cfg.pde["L"]) ** 2
    return 0.0


def run_measure(cfg, out, seed):
    A = np.asarray(cfg.matrix, dtype=float)
    norm = build_norm(cfg, A.shape[0])
    mu = matrix_measure(A, norm)
    nrm = induced_matrix_norm(A, norm)
    _write(out / "measure.txt", f"norm: {norm.label()}\nmeasure: {reports.fmt(mu)}\n"
                                f"induced_norm: {reports.fmt(nrm)}\n")
    return f"measure = {mu!r}"


def run_spectrum(cfg, out, seed):
    G = build_graph(cfg.graph)
    w = graphs.numeric_spectrum(graphs.laplacian(G))
    lines = [f"graph: {G.describe()}", f"nodes: {G.n_nodes}", f"edges: {G.n_edges}",
             f"lambda2_numeric: {reports.fmt(float(w[1]))}"]
    try:
        lines.append(f"lambda2_closed_form: {reports.fmt(float(graphs.lambda2_closed_form(G)))}")
    except Unsupported:
        lines.append("lambda2_closed_form: none")
    _write(out / "spectrum.txt", "\n".join(lines) + "\n")
    with open(out / "spectrum.csv", "w", newline="") as fh:
        fh.write("index,eigenvalue\n")
        for i, v in enumerate(w):
            fh.write(f"{i},{reports.fmt(float(v))}\n")
    return f"lambda2 = {float(w[1])!r}"


def _certificate(cfg, model, seed, G=None):
    samples = build_samples(cfg, model, seed=seed)
    norm = build_norm(cfg, model.n)
    D = build_diffusion(cfg, model.n)
    if G is not None:
        return certify.check_sync_condition(model, G, D, norm, samples)
    return certify.sup_measure(model, norm, _certificate_lambda(cfg), D, samples)


def run_certify(cfg, out, seed):
    model = build_model(cfg)
    G = build_graph(cfg.graph) if cfg.graph is not None and cfg.lam is None else None
    cert = _certificate(cfg, model, seed, G)
    _write(out / "certificate.txt", reports.render_certificate(cert))
    _write_json(out / "summary.json", {"certificate": cert.as_record()})
    return f"verdict: {cert.verdict} (c = {cert.c!r})"


def run_search_weight(cfg, out, seed):
    model = build_model(cfg)
    samples = build_samples(cfg, model, seed=seed)
    s = cfg.search
    p = parse_p(s.get("p", (cfg.norm or {}).get("p", 1)))
    D = build_diffusion(cfg, model.n)
    lam = _certificate_lambda(cfg, build_graph(cfg.graph) if cfg.graph else None)
    q, cert = certify.search_weight(model, p, lam, D, samples, budget=int(s.get("budget", 400)),
                                    seed=_seed(cfg, s.get("seed", 0), seed))
    text = "weights: (" + ", ".join(reports.fmt(v) for v in q) + ")\n"
    _write(out / "certificate.txt", text + reports.render_certificate(cert))
    _write_json(out / "summary.json", {"weights": list(q), "certificate": cert.as_record()})
    return f"weights = {q}, verdict: {cert.verdict} (c = {cert.c!r})"


def _run_stride(cfg):
    r = cfg.run
    return float(r.get("t_end", 10.0)), float(r.get("dt", 1e-3)), int(r.get("stride", 1))


def _network_bounds(traj, G, norm, c, slack):
    """Decay checks that apply to the graph topology; list of (series name, t, s, BoundReport)."""
    t = traj.times
    if G.kind == "star" and G.n_nodes > 2:
        out = []
        for i, s, form in simulate.star_spoke_bounds(traj, norm, c):
            out.append((f"spoke_{i}", t, s, simulate.verify_bound(t, s, form, slack, f"spoke {i}")))
        return out
    if G.kind in ("grid", "cartesian"):
        s = simulate.edge_series(traj, G, norm)
        form = simulate.fit_grid_bound(t, s, c, slack)
        return [("edge_sum", t, s, simulate.verify_bound(t, s, form, slack, "edge sum"))]
    if G.kind == "line" and G.n_nodes > 2:
        qp = graphs.line_edge_weights(G.n_nodes, norm.p)[1]
        s = simulate.stacked_edge_norm(traj, G, norm, qp)
        label = "sine-weighted edge norm"
    elif G.kind == "complete" or G.n_nodes == 2:
        s = simulate.edge_series(traj, G, norm)
        label = "edge sum"
    else:
        s = simulate.deviation_series(traj, norm)
        label = "deviation from mean"
    form = simulate.BoundForm("exponential", c)
    return [(label.replace(" ", "_").replace("-", "_"), t, s,
             simulate.verify_bound(t, s, form, slack, label))]


def _finish_bounds(out, cert, checks):
    text = reports.render_certificate(cert)
    _write(out / "certificate.txt", text)
    blocks = []
    for name, t, s, rep in checks:
        reports.write_series_csv(out / f"series_{name}.csv", t, s)
        blocks.append(reports.render_bound(rep))
    if not cert.contractive:
        blocks.insert(0, "note: certificate is inconclusive; envelopes are reported, not implied\n")
    _write(out / "bounds.txt", "\n".join(blocks))
    return {"certificate": cert.as_record(), "bounds": [r.as_record() for *_, r in checks]}


def run_simulate(cfg, out, seed):
    model = build_model(cfg)
    G = build_graph(cfg.graph)
    D = build_diffusion(cfg, model.n)
    sys_ = simulate.assemble_network(model, G, D.d)
    X0 = initial_state(cfg, model.n, G.n_nodes, seed=seed)
    t_end, dt, stride = _run_stride(cfg)
    traj = simulate.integrate_rk4(sys_, X0, t_end, dt, stride)
    reports.write_trajectory_csv(out / "trajectory.csv", traj)
    norm = build_norm(cfg, model.n)
    record = {}
    if cfg.sampler is not None and any(v > 0 for v in D.d):
        cert = _certificate(cfg, model, seed, G)
        checks = _network_bounds(traj, G, norm, cert.c, float(cfg.run.get("slack", 1e-6)))
        record = _finish_bounds(out, cert, checks)
        summary = f"verdict: {cert.verdict} (c = {cert.c!r}); " + ", ".join(
            f"{r.label}: {'PASS' if r.passed else 'FAIL'}" for *_, r in checks)
    else:
        s = simulate.edge_series(traj, G, norm)
        reports.write_series_csv(out / "series_edge_sum.csv", traj.times, s)
        summary = f"final edge sum = {float(s[-1])!r}"
    record["final_edge_sum"] = float(simulate.edge_series(traj, G, norm)[-1])
    _write_json(out / "summary.json", record)
    return summary


def run_pde(cfg, out, seed):
    model = build_model(cfg)
    L, N, bc = float(cfg.pde["L"]), int(cfg.pde["N"]), cfg.pde.get("bc", "neumann")
    D = build_diffusion(cfg, model.n)
    sys_ = simulate.discretize_pde_1d(model, D.d, L, N, bc)
    X0 = initial_state(cfg, model.n, N, mesh=sys_.mesh, L=L, seed=seed)
    t_end, dt, stride = _run_stride(cfg)
    traj = simulate.integrate_rk4(sys_, X0, t_end, dt, stride)
    reports.write_trajectory_csv(out / "trajectory.csv", traj)
    norm = build_norm(cfg, model.n)
    record = {}
    summary = "integrated"
    if bc == "neumann" and norm.p == 1:
        s = simulate.gradient_series(traj, L, norm.q)
        if cfg.sampler is not None and any(v > 0 for v in D.d):
            cert = _certificate(cfg, model, seed)
            rep = simulate.verify_bound(traj.times, s, simulate.BoundForm("exponential", cert.c),
                                        float(cfg.run.get("slack", 1e-6)), "weighted gradient")
            record = _finish_bounds(out, cert, [("weighted_gradient", traj.times, s, rep)])
            summary = f"verdict: {cert.verdict} (c = {cert.c!r}); weighted gradient: " + (
                "PASS" if rep.passed else "FAIL")
        else:
            reports.write_series_csv(out / "series_weighted_gradient.csv", traj.times, s)
    else:
        s = simulate._stacked_norms(traj.states, norm.kron(np.ones(N)))
        reports.write_series_csv(out / "series_state_norm.csv", traj.times, s)
    _write_json(out / "summary.json", record)
    return summary


RUNNERS = {
    "measure": run_measure,
    "spectrum": run_spectrum,
    "certify": run_certify,
    "search-weight": run_search_weight,
    "simulate": run_simulate,
    "pde": run_pde,
}


def run_config(path, out=None, seed=None):
    """Run one scenario config and return (output directory, one-line summary)."""
    cfg = load_config(path)
    if out is None:
        out = cfg.output or os.path.join("out", Path(path).stem)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        summary = RUNNERS[cfg.command](cfg, out, seed)
    except (DomainViolation, Unsupported) as exc:
        raise ConfigError(str(exc)) from None
    return out, summary


def build_parser():
    ap = argparse.ArgumentParser(prog="syncert", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a scenario config")
    r.add_argument("config")
    r.add_argument("--out", help="output directory (default: config 'output' or out/<name>)")
    r.add_argument("--seed", type=int, help="override every seed in the config")
    v = sub.add_parser("validate", help="check a config without running it")
    v.add_argument("config")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "validate":
            cfg = load_config(args.config)
            print(f"ok: {args.config} ({cfg.command})")
            return EXIT_OK
        out, summary = run_config(args.config, args.out, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"run error: {exc} (last valid time {exc.last_time!r})", file=sys.stderr)
        return EXIT_RUNTIME
    except SyncertError as exc:
        print(f"run error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(summary)
    print(f"wrote {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
