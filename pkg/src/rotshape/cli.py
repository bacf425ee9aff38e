"""Command-line entry point: ``rotshape <subcommand> --config FILE``.

Exit status is 0 on success, 2 for invalid input (config, windows, peak
assignment) and 3 for numerical failures (convergence, sampling, grid).
Errors go to stderr as ``rotshape:<class>:<ExceptionName>: message``.
"""

import argparse
import csv
import json
from pathlib import Path
import sys

import numpy as np

from . import __version__
from .config import config_echo, load_config
from .design import DesignTarget, analytic_cubic, design_report
from .dynamics import (AlignmentTrace, analyze_revival, component_peak_separation,
                       revival_window, synthesize_trace)
from .exceptions import NumericalError, RotShapeError, ValidationError
from .raman import build_raman_table

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def fmt(x):
    """Shortest round-trip decimal for floats; plain str otherwise."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (np.integer,)):
        return str(int(x))
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])


def write_keyvalues(path, pairs, stream=None):
    lines = [f"{k}={fmt(v)}" for k, v in pairs]
    Path(path).write_text("\n".join(lines) + "\n")
    if stream is not None:
        stream.write("\n".join(lines) + "\n")


def read_trace_csv(path):
    """AlignmentTrace from a CSV written by ``simulate``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["t_ps", "signal"]:
        raise RotShapeError(f"{path}: expected a trace CSV with header t_ps,signal")
    header = rows[0]
    data = np.array([[float(x) for x in r] for r in rows[1:]])
    solo = {}
    for k, name in enumerate(header[2:], start=2):
        if not (name.startswith("signal[") and name.endswith("]")):
            raise RotShapeError(f"{path}: unexpected column {name!r}")
        solo[name[len("signal["):-1]] = data[:, k]
    return AlignmentTrace(data[:, 0], data[:, 1], tuple(solo), {}, solo)


class Run:
    def __init__(self, cfg, prefix, solo=False, seed=None, stdout=None):
        self.cfg = cfg
        self.prefix = prefix
        self.solo = solo or cfg.simulate.solo
        self.seed = seed
        self.stdout = stdout or sys.stdout
        self.outputs = []
        self.extra = {}

    def path(self, suffix):
        p = Path(f"{self.prefix}{suffix}")
        if p.parent and not p.parent.exists():
            p.parent.mkdir(parents=True)
        self.outputs.append(str(p))
        return p

    def manifest(self, subcommand):
        data = {
            "toolkit": "rotshape",
            "version": __version__,
            "subcommand": subcommand,
            "seed": self.seed,
            "config": config_echo(self.cfg),
            "derived": self.cfg.derived(),
            "results": self.extra,
            "outputs": list(self.outputs),
        }
        path = Path(f"{self.prefix}.manifest.json")
        path.write_text(json.dumps(data, indent=2, sort_keys=True, default=fmt) + "\n")

    def _component(self, label):
        return self.cfg.component(label)

    # subcommands ----------------------------------------------------------

    def design(self):
        cfg = self.cfg
        n = cfg.design.n if cfg.design.n is not None else cfg.pulse.analytic_n
        if n is None:
            raise ValidationError("design needs design.n (or pulse.analytic_n)")
        c = self._component(cfg.design.component)
        target = DesignTarget(c, n, cfg.temperature, cfg.pulse.sigma)
        rep = design_report(target, cfg.molecule, cfg.design.ladder)
        res = rep.result
        pairs = [("component", c.label), ("n", float(n)), ("ladder", res.ladder),
                 ("b_analytic", res.b_analytic), ("a_opt", res.a_opt), ("b_opt", res.b_opt),
                 ("residual_analytic", res.residual_analytic),
                 ("residual_opt", res.residual_opt), ("rel_diff", res.rel_diff),
                 ("iterations", res.iterations)]
        write_keyvalues(self.path("_design.txt"), pairs, self.stdout)
        write_csv(self.path("_design.csv"),
                  ["J", "Omega_rad_per_fs", "rho", "phi_raman_rad", "phi_cdn_rad", "mismatch_rad"],
                  rep.rows())
        self.extra.update(dict(pairs))

    def raman(self):
        table = build_raman_table(self.cfg.make_pulse(), self.cfg.molecule)
        write_csv(self.path("_raman.csv"),
                  ["component", "J", "Omega_rad_per_fs", "magnitude", "phase_rad"],
                  ((e.component, e.J, e.Omega, e.magnitude, e.phase) for e in table.entries))
        self.extra["entries"] = len(table)

    def _trace(self, t, b_tilde=None, solo=False):
        cfg = self.cfg
        table = build_raman_table(cfg.make_pulse(b_tilde), cfg.molecule)
        return synthesize_trace(cfg.ensemble(), table, t, solo=solo)

    def simulate(self):
        t = self.cfg.simulate.time_axis()
        tr = self._trace(t, solo=self.solo)
        labels = list(tr.solo) if self.solo else []
        header = ["t_ps", "signal"] + [f"signal[{lab}]" for lab in labels]
        cols = [tr.t, tr.signal] + [tr.solo[lab] for lab in labels]
        write_csv(self.path("_trace.csv"), header, zip(*cols))
        self.extra["samples"] = len(t)

    def _window(self, a, t):
        if a.t_lo is not None:
            return (a.t_lo, a.t_hi)
        if a.n is None:
            return (float(t[0]), float(t[-1]))
        return revival_window(self._component(a.component), a.n, a.half_width)

    def analyze(self):
        a = self.cfg.analyze
        src = a.input or f"{self.prefix}_trace.csv"
        tr = read_trace_csv(src)
        window = self._window(a, tr.t)
        met = analyze_revival(tr, window, a.threshold)
        pairs = [("input", src), ("t_lo", float(window[0])), ("t_hi", float(window[1])),
                 ("peak_time", met.peak_time), ("peak_amplitude", met.peak_amplitude),
                 ("zero_crossings", met.zero_crossings), ("envelope_fwhm", met.envelope_fwhm),
                 ("cycle_count", met.cycle_count)]
        if len(tr.solo) > 1:
            seps = component_peak_separation(tr, list(tr.solo), window)
            pairs += [(f"separation[{p}-{q}]", dt) for (p, q), dt in seps.items()]
        write_keyvalues(self.path("_analyze.txt"), pairs, self.stdout)
        self.extra.update(dict(pairs))

    def scan(self):
        cfg = self.cfg
        s = cfg.scan
        n = s.n if s.n is not None else (cfg.design.n if cfg.design.n is not None
                                         else cfg.pulse.analytic_n)
        if n is None:
            raise ValidationError("scan needs scan.n (or design.n / pulse.analytic_n)")
        c = self._component(s.component)
        b_an = analytic_cubic(n, c.B, c.D)
        values = s.b_values if s.b_values is not None else tuple(f * b_an for f in s.b_factors)
        window = revival_window(c, n, s.half_width)
        dt = cfg.simulate.dt
        t = window[0] + dt * np.arange(int(np.floor((window[1] - window[0]) / dt + 1e-9)) + 1)
        rows = []
        for b in values:
            tr = self._trace(t, b_tilde=float(b))
            met = analyze_revival(tr, (float(t[0]), float(t[-1])), cfg.analyze.threshold)
            rows.append((float(b), met.cycle_count, met.zero_crossings, met.envelope_fwhm,
                         met.peak_amplitude, met.peak_time))
        write_csv(self.path("_scan.csv"),
                  ["b_tilde_fs3", "cycle_count", "zero_crossings", "envelope_fwhm_ps",
                   "peak_amplitude", "peak_time_ps"], rows)
        best = min(rows, key=lambda r: (r[1], r[3]))
        self.extra.update({"n": float(n), "b_analytic": b_an, "best_b_tilde": best[0]})
        write_keyvalues(self.path("_scan.txt"),
                        [("n", float(n)), ("b_analytic", b_an), ("best_b_tilde", best[0]),
                         ("best_cycle_count", best[1])], self.stdout)


SUBCOMMANDS = ("design", "raman", "simulate", "analyze", "scan")


def build_parser():
    p = argparse.ArgumentParser(prog="rotshape",
                                description="Spectral-phase pre-compensation of rotational revivals.")
    p.add_argument("--version", action="version", version=f"rotshape {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", required=True, metavar="PATH")
        s.add_argument("--out", metavar="PREFIX", help="output path prefix (overrides output.prefix)")
        s.add_argument("--solo", action="store_true", help="also write per-component signals")
        s.add_argument("--seed", type=int, default=None,
                       help="reserved; recorded in the manifest, no stochastic paths use it")
    return p


def _report(exc, stderr):
    kind = "numerical" if isinstance(exc, NumericalError) else "invalid"
    stderr.write(f"rotshape:{kind}:{type(exc).__name__}: {exc}\n")
    return EXIT_NUMERICAL if kind == "numerical" else EXIT_INVALID


def main(argv=None, stdout=None, stderr=None):
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        run = Run(cfg, args.out or cfg.output_prefix, args.solo, args.seed, stdout)
        getattr(run, args.subcommand)()
        run.manifest(args.subcommand)
    except (RotShapeError, ValueError, OSError) as exc:
        if isinstance(exc, OSError):
            stderr.write(f"rotshape:invalid:{type(exc).__name__}: {exc}\n")
            return EXIT_INVALID
        return _report(exc, stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
