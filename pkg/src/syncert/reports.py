"""Plain-text reports and CSV writers with stable, byte-reproducible output."""

import math

from .certify import Certificate
from .simulate import BoundReport


def fmt(v):
    if isinstance(v, float):
        if math.isinf(v) or math.isnan(v):
            return str(v)
        return repr(v)
    return str(v)


def _vec(v):
    return "(" + ", ".join(fmt(float(x)) for x in v) + ")"


def render_certificate(cert):
    lines = [
        f"verdict: {cert.verdict} (c = {fmt(cert.c)})",
        f"c: {fmt(cert.c)}",
        f"norm: {cert.norm.label()}",
        f"lambda: {fmt(cert.lam)}",
        f"D: diag{_vec(cert.D)}",
    ]
    if cert.graph:
        lines.append(f"graph: {cert.graph}")
    if cert.rule:
        lines.append(f"rule: {cert.rule}")
    lines += [
        f"samples: {cert.sample_count}",
        f"argmax_state: {_vec(cert.argmax_state)}",
        f"argmax_time: {fmt(cert.argmax_time)}",
        f"caveat: {cert.caveat}",
    ]
    return "\n".join(lines) + "\n"


def render_bound(rep):
    b = rep.bound
    status = "PASS" if rep.passed else "FAIL"
    head = f"bound: {b.kind}" + (f" [{rep.label}]" if rep.label else "")
    lines = [head, f"status: {status}", f"c: {fmt(b.c)}"]
    if b.kind != "exponential":
        lines.append(f"alpha: {fmt(b.alpha)}")
    if b.kind == "grid_affine":
        lines.append(f"beta: {fmt(b.beta)}")
    lines += [
        f"slack: {fmt(rep.slack)}",
        f"max_violation_ratio: {fmt(rep.max_ratio)} at t = {fmt(rep.argmax_t)}",
    ]
    return "\n".join(lines) + "\n"


def report_render(record):
    """Human-readable block for a Certificate or BoundReport."""
    if isinstance(record, Certificate):
        return render_certificate(record)
    if isinstance(record, BoundReport):
        return render_bound(record)
    raise TypeError(f"cannot render {type(record).__name__}")


def write_trajectory_csv(path, traj):
    with open(path, "w", newline="") as fh:
        fh.write("t,compartment,component,value\n")
        X = traj.nodes()
        for k, t in enumerate(traj.times):
            tt = fmt(float(t))
            for i in range(traj.N):
                for j in range(traj.n):
                    fh.write(f"{tt},{i},{j},{fmt(float(X[k, i, j]))}\n")


def write_series_csv(path, t, s):
    with open(path, "w", newline="") as fh:
        fh.write("t,value\n")
        for a, b in zip(t, s):
            fh.write(f"{fmt(float(a))},{fmt(float(b))}\n")


def read_series_csv(path):
    import numpy as np

    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]
