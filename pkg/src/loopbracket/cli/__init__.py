"""Experiment runner.

Verbs:
  run          execute the configured property suites, one report each
  sov          emit the separation-of-variables table of a sampled leaf
  flow         integrate a flow, emit trajectory table and fit report
  report-diff  compare two report files line by line

All verbs read one structured-text config file; reports are
byte-deterministic functions of (config, seed).  Wall-clock timings go
to a sidecar file so the reports themselves stay comparable.
"""

import os
import sys
import time

import click
import numpy as np

from ..errors import (ConfigInvalid, LoopBracketError, NonGenericDivisor,
                      StepRejected, PathThroughBranchPoint, DegenerateInput)
from .config import load_config, KNOWN_SUITES
from .serialize import dump_report, dump_csv, format_scalar


def _config_options(f):
    for opt in (
        click.option("--config", "config_path", required=True,
                     type=click.Path(), help="experiment config file"),
        click.option("--out", "out_dir", default=None,
                     type=click.Path(), help="output directory override"),
        click.option("--seed", default=None, type=int,
                     help="seed override"),
        click.option("--nodes", default=None, type=int,
                     help="contour node-count override"),
    ):
        f = opt(f)
    return f


def _load(config_path, seed, nodes, suites=None, out=None):
    try:
        return load_config(config_path, seed=seed, nodes=nodes,
                           suites=suites, out=out)
    except ConfigInvalid as err:
        click.echo("config error (field %s): %s" % (err.field, err),
                   err=True)
        sys.exit(2)


def _prepare(cfg):
    try:
        geo = cfg.geometry()
        div = cfg.divisor(geo)
    except ConfigInvalid as err:
        click.echo("config error (field %s): %s" % (err.field, err),
                   err=True)
        sys.exit(2)
    os.makedirs(cfg.out, exist_ok=True)
    return geo, div


def _sample(geo, div, seed):
    from ..geometry import section_basis
    from ..sklyanin.functionals import sample_leaf
    basis = section_basis(geo, div)
    rng = np.random.default_rng(seed)
    return sample_leaf(basis, rng)


@click.group()
def main():
    """Loop-group Poisson bracket laboratory."""


@main.command()
@_config_options
@click.option("--suite", "suites", multiple=True,
              type=click.Choice(KNOWN_SUITES),
              help="suite selection override (repeatable)")
def run(config_path, out_dir, seed, nodes, suites):
    """Run the configured property suites and write reports."""
    from ..verify import SUITES
    from ..verify.report import PropertyReport
    cfg = _load(config_path, seed, nodes, suites=list(suites) or None,
                out=out_dir)
    geo, div = _prepare(cfg)
    summary = []
    timings = []
    all_passed = True
    for name in cfg.suites:
        t0 = time.monotonic()
        try:
            rep = SUITES[name](geo, cfg.N, cfg.d, cfg.seed, divisor=div)
        except LoopBracketError as err:
            rep = PropertyReport(name, geo.case, cfg.N, cfg.d, cfg.seed)
            rep.add("suite completed", 1.0, 0.5)
            rep.note("suite error: %s: %s" % (type(err).__name__, err))
        timings.append((name, time.monotonic() - t0))
        dump_report(rep.to_dict(), os.path.join(cfg.out,
                                                "report_%s.txt" % name))
        summary.append({"suite": name, "passed": rep.passed,
                        "checks": len(rep.records),
                        "worst_ratio": rep.worst()})
        all_passed = all_passed and rep.passed
    dump_report({"case": geo.case, "N": cfg.N, "d": cfg.d,
                 "seed": cfg.seed, "passed": all_passed,
                 "suites": summary},
                os.path.join(cfg.out, "summary.txt"))
    with open(os.path.join(cfg.out, "timing.log"), "w") as fh:
        for name, dt in timings:
            fh.write("%s %.3f s\n" % (name, dt))
    for item in summary:
        click.echo("%-22s %s" % (item["suite"],
                                 "pass" if item["passed"] else "FAIL"))
    sys.exit(0 if all_passed else 1)


@main.command()
@_config_options
def sov(config_path, out_dir, seed, nodes):
    """Emit the separation-of-variables chart of a sampled leaf."""
    from ..spectral import divisor_points, spectral_curve, HamiltonianSet
    from ..spectral import genus as genus_of
    cfg = _load(config_path, seed, nodes, out=out_dir)
    geo, div = _prepare(cfg)
    point = _sample(geo, div, cfg.seed)
    flags = []
    try:
        chart = divisor_points(point)
        rows = [(mu, z.real, z.imag, lam.real, lam.imag)
                for mu, (z, lam) in enumerate(chart.points)]
        flags = list(chart.flags)
        generic = chart.generic
        count = len(chart)
    except NonGenericDivisor as err:
        rows, generic, count = [], False, 0
        flags = [str(err)]
    dump_csv(["mu", "z_re", "z_im", "lambda_re", "lambda_im"], rows,
             os.path.join(cfg.out, "sov.csv"))
    hams = HamiltonianSet(spectral_curve(point))
    dump_csv(["k", "index", "re", "im"],
             [(k, i, v.real, v.imag)
              for (k, i), v in zip(hams.labels, hams.values)],
             os.path.join(cfg.out, "hamiltonians.csv"))
    g = genus_of(geo, cfg.N, cfg.d)
    ok = generic and count == g
    dump_report({"case": geo.case, "N": cfg.N, "d": cfg.d,
                 "seed": cfg.seed, "genus": g, "points": count,
                 "generic": generic, "flags": flags, "passed": ok},
                os.path.join(cfg.out, "sov_report.txt"))
    click.echo("%d divisor points (genus %d)%s"
               % (count, g, "" if ok else " FAIL"))
    sys.exit(0 if ok else 1)


@main.command()
@_config_options
def flow(config_path, out_dir, seed, nodes):
    """Integrate a flow; emit t, H_i(t), Q_i(t) and fit residuals."""
    from ..sklyanin.bracket import hamiltonian_vector
    from ..sklyanin.flows import integrate_flow
    from ..spectral import (spectral_curve, HamiltonianSet,
                            linearizing_coords)
    cfg = _load(config_path, seed, nodes, out=out_dir)
    geo, div = _prepare(cfg)
    point = _sample(geo, div, cfg.seed)
    spec = cfg.flow
    kind = spec.get("kind", "hamiltonian")
    t_final = float(spec.get("t_final", 1.0))
    dt = float(spec.get("dt", 0.005))
    record_every = int(spec.get("record_every", 10))
    if kind == "zero":
        field = lambda p: np.zeros_like(p.samples)
        desc = "zero field"
    elif kind == "hamiltonian":
        k = int(spec.get("k", geo.N))
        amp = float(spec.get("amplitude", 0.15 * geo.contour.radius))
        wraw = spec.get("probe")
        if wraw is None:
            w = 0.4 * geo.contour.radius * np.exp(0.55j)
        else:
            w = complex(wraw[0], wraw[1])
        phi = lambda z: amp / (z - w)
        field = lambda p: hamiltonian_vector(p, k, phi, phi_spec=((w, 1),))
        desc = "hamiltonian k=%d" % k
    else:
        click.echo("config error (field flow.kind): must be "
                   "'hamiltonian' or 'zero'", err=True)
        sys.exit(2)
    checks = []
    notes = []
    try:
        traj = integrate_flow(point, field, t_final, dt, descriptor=desc,
                              record_every=record_every)
    except StepRejected as err:
        dump_report({"descriptor": desc, "passed": False,
                     "step_rejected_at": err.time,
                     "residual": err.residual},
                    os.path.join(cfg.out, "flow_report.txt"))
        click.echo("step rejected at t=%s" % err.time, err=True)
        sys.exit(1)
    ham_rows = [HamiltonianSet(spectral_curve(p)) for p in traj.points]
    labels = ham_rows[0].labels
    drift = 0.0
    for h in ham_rows[1:]:
        scale = max(1.0, float(np.max(np.abs(ham_rows[0].values))))
        drift = max(drift, float(np.max(np.abs(
            h.values - ham_rows[0].values))) / scale)
    checks.append({"name": "spectral-coefficient drift",
                   "residual": drift, "tolerance": 1e-8,
                   "passed": drift <= 1e-8})
    header = ["t"]
    for (k, i) in labels:
        header += ["H_%d_%d_re" % (k, i), "H_%d_%d_im" % (k, i)]
    rows = []
    for t, h in zip(traj.times, ham_rows):
        row = [t]
        for v in h.values:
            row += [v.real, v.imag]
        rows.append(row)
    lin = None
    try:
        lin = linearizing_coords(traj)
        for j in range(lin.Q.shape[1]):
            header += ["Q_%d_re" % j, "Q_%d_im" % j]
        for idx, row in enumerate(rows):
            for j in range(lin.Q.shape[1]):
                row += [lin.Q[idx, j].real, lin.Q[idx, j].imag]
        checks.append({"name": "linear-fit residual of Q",
                       "residual": lin.fit_residual, "tolerance": 1e-6,
                       "passed": lin.fit_residual <= 1e-6})
    except (PathThroughBranchPoint, DegenerateInput,
            NonGenericDivisor) as err:
        notes.append("linearizing coordinates unavailable: %s: %s"
                     % (type(err).__name__, err))
    dump_csv(header, rows, os.path.join(cfg.out, "flow.csv"))
    passed = all(c["passed"] for c in checks)
    body = {"descriptor": desc, "t_final": t_final, "dt": dt,
            "snapshots": len(traj.points), "passed": passed,
            "records": checks, "notes": notes}
    if lin is not None:
        body["slopes"] = [complex(s) for s in lin.slopes]
    dump_report(body, os.path.join(cfg.out, "flow_report.txt"))
    for c in checks:
        click.echo("%-32s %.3e (tol %.0e) %s"
                   % (c["name"], c["residual"], c["tolerance"],
                      "pass" if c["passed"] else "FAIL"))
    sys.exit(0 if passed else 1)


@main.command("report-diff")
@click.argument("left", type=click.Path(exists=True))
@click.argument("right", type=click.Path(exists=True))
def report_diff(left, right):
    """Compare two report files; exit 0 iff byte-identical."""
    with open(left) as fh:
        a = fh.readlines()
    with open(right) as fh:
        b = fh.readlines()
    same = a == b
    if not same:
        n = max(len(a), len(b))
        for i in range(n):
            la = a[i].rstrip("\n") if i < len(a) else "<missing>"
            lb = b[i].rstrip("\n") if i < len(b) else "<missing>"
            if la != lb:
                click.echo("line %d:\n  < %s\n  > %s" % (i + 1, la, lb))
    click.echo("identical" if same else "different")
    sys.exit(0 if same else 1)
