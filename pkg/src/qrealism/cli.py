"""Command-line front end: plot-ready CSV for the figures, sweeps, verification, pulses.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import interferometer as itf
from . import pulse, verify
from .tomography import NoiseModel, format_number, monte_carlo_realism, reports_to_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _angle(value: float, degrees: bool) -> float:
    return float(np.deg2rad(value)) if degrees else float(value)


def _grid(spec: str, degrees: bool) -> list:
    """``start:stop:num`` (inclusive) or a comma list."""
    try:
        if ":" in spec:
            start, stop, num = spec.split(":")
            values = np.linspace(float(start), float(stop), int(num))
        else:
            values = [float(x) for x in spec.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {spec!r}: {exc}") from exc
    if len(values) == 0:
        raise UsageError("grid must be nonempty")
    return [_angle(v, degrees) for v in values]


def _noise(args) -> NoiseModel | None:
    if args.noise is None:
        return None
    try:
        return NoiseModel(args.noise, args.samples, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _params(alpha: float, theta: float) -> itf.CircuitParams:
    try:
        return itf.CircuitParams(alpha, theta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def figure2_csv(points: int = 17, noise: NoiseModel | None = None) -> str:
    """Wave/particle realism inside both interferometers against visibility."""
    header = ["kind", "alpha", "visibility", "wave_realism", "particle_realism",
              "wave_realism_mc", "particle_realism_mc", "wave_realism_std", "particle_realism_std"]
    rows = []
    for kind in itf.CircuitKind:
        for a in np.linspace(0.0, np.pi, points):
            p = itf.CircuitParams(a, 0.0)
            st = itf.stage_state(kind, p, itf.Stage.INSIDE).state
            r_w, r_p = itf.realism_of_state(st, 0.0)
            v = itf.visibility(kind, a)
            mc = ["", "", "", ""]
            if noise is not None:
                rep = monte_carlo_realism(kind, p, noise)
                mc = [rep["wave_realism"].mean, rep["particle_realism"].mean,
                      rep["wave_realism"].std, rep["particle_realism"].std]
            rows.append([kind.value, a, v, r_w, r_p, *mc])
    return _csv(header, rows)


def figure3_csv(kind, points: int = 33) -> str:
    """p0(alpha, theta) surface followed by the visibility table."""
    rows = []
    alphas = np.linspace(0.0, np.pi, points)
    thetas = np.linspace(0.0, 2 * np.pi, points)
    for a in alphas:
        for t in thetas:
            rows.append(["p0", a, t, itf.detection_probability(kind, _params(a, t))])
    for a in alphas:
        rows.append(["visibility", a, "", itf.visibility(kind, a)])
    return _csv(["table", "alpha", "theta", "value"], rows)


def sweep_csv(kind, alphas, thetas, noise: NoiseModel | None = None, with_discord: bool = True) -> str:
    if noise is not None:
        reports = [monte_carlo_realism(kind, _params(a, t), noise) for a in alphas for t in thetas]
        return reports_to_csv(reports)
    header = ["kind", "alpha", "theta", "p0", "visibility", "wave_realism", "particle_realism",
              "bound", "mutual_information", "discord"]
    rows = []
    for a in alphas:
        v = itf.visibility(kind, a)
        for t in thetas:
            p = _params(a, t)
            rep = itf.realism_inside(kind, p, with_discord=with_discord)
            rows.append([itf.CircuitKind(kind).value, a, p.theta, itf.detection_probability(kind, p), v,
                         rep.wave_realism, rep.particle_realism, rep.bound,
                         rep.mutual_information, rep.discord])
    return _csv(header, rows)


def read_config(path) -> dict:
    """key=value lines; '#' starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrealism", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def noise_flags(p):
        p.add_argument("--noise", type=float, help="Gaussian sigma per Pauli correlator")
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("figure2", help="realism vs visibility for both circuits")
    noise_flags(p)
    p.add_argument("--points", type=int, default=17)
    p.add_argument("--out", required=True)

    p = sub.add_parser("figure3", help="detection pattern and visibility table")
    p.add_argument("--kind", choices=["qdce", "qcre"], required=True)
    p.add_argument("--points", type=int, default=33)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep", help="quantifiers over an (alpha, theta) grid")
    p.add_argument("--kind", choices=["qdce", "qcre"], required=True)
    p.add_argument("--alpha", dest="alpha_grid", default="0:3.141592653589793:9",
                   help="start:stop:num or comma list")
    p.add_argument("--theta", dest="theta_grid", default="0")
    p.add_argument("--degrees", action="store_true", help="angles given in degrees")
    p.add_argument("--no-discord", action="store_true")
    noise_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--states", type=int, default=1000, help="random states per property sweep")

    p = sub.add_parser("pulse", help="pulse-sequence tools")
    psub = p.add_subparsers(dest="pulse_command", required=True)
    c = psub.add_parser("compile", help="compile a sequence file to a unitary")
    c.add_argument("--seq", required=True)
    c.add_argument("--check-against", choices=["qdce", "qcre"])
    c.add_argument("--alpha", type=float, default=0.0)
    c.add_argument("--theta", type=float, default=0.0)
    c.add_argument("--degrees", action="store_true")
    c.add_argument("--tol", type=float, default=1e-9)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    config = read_config(known.config)
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            dests = {a.dest: a for a in sp._actions}
            defaults = {}
            for key, value in config.items():
                if key in dests:
                    a = dests[key]
                    if isinstance(a, argparse._StoreTrueAction):
                        defaults[key] = value.lower() in ("1", "true", "yes", "on")
                    else:
                        defaults[key] = a.type(value) if a.type else value
                        a.required = False
            sp.set_defaults(**defaults)


def _pulse_compile(args) -> int:
    try:
        alpha, theta = _angle(args.alpha, args.degrees), _angle(args.theta, args.degrees)
        seq = pulse.load_sequence(args.seq, alpha, theta)
        u, budget = pulse.compile_sequence(seq)
    except (OSError, pulse.SequenceError) as exc:
        raise UsageError(str(exc)) from exc
    np.set_printoptions(precision=6, suppress=True)
    print(f"ops={len(seq.ops)} rotations={budget.rotation_count} "
          f"duration_ms={budget.total_duration * 1e3:.6f} J={seq.coupling_j:g}")
    print(u)
    if args.check_against:
        ideal = pulse.ideal_unitary(args.check_against, alpha, theta)
        ok, phase = pulse.equivalent_up_to_phase(u, ideal, args.tol)
        within = budget.total_duration <= pulse.TIME_LIMIT
        print(f"equivalent to {args.check_against}: {ok}"
              + (f" (global phase {phase:.9f} rad)" if ok else ""))
        print(f"within {pulse.TIME_LIMIT * 1e3:g} ms budget: {within}")
        return EXIT_OK if ok and within else EXIT_FAIL
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_USAGE if exc.code else EXIT_OK
        if args.command == "figure2":
            _write(figure2_csv(args.points, _noise(args)), args.out)
        elif args.command == "figure3":
            _write(figure3_csv(args.kind, args.points), args.out)
        elif args.command == "sweep":
            alphas = _grid(args.alpha_grid, args.degrees)
            thetas = _grid(args.theta_grid, args.degrees)
            for a in alphas:
                _params(a, 0.0)
            _write(sweep_csv(args.kind, alphas, thetas, _noise(args), not args.no_discord), args.out)
        elif args.command == "verify":
            results = verify.run(args.states)
            failed = [r for r in results if not r.passed]
            print(f"{len(results) - len(failed)}/{len(results)} checks passed")
            return EXIT_FAIL if failed else EXIT_OK
        elif args.command == "pulse":
            return _pulse_compile(args)
    except UsageError as exc:
        print(f"qrealism: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
