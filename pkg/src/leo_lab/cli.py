"""Command-line entry point: ``leo-lab {verify,sweep,kick-study,export}``.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .algebra import EXPERIMENT_LEOS, cnot_in_rotated_basis, verify_leo
from .circuits import BUILDERS, export_qasm
from .svgplot import fidelity_svg

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ex.ConfigError(f"cannot read config {path}: {exc}") from exc


def _format_matrix(m: np.ndarray) -> list[str]:
    rows = []
    for row in np.real_if_close(np.round(m, 12)):
        rows.append("  [" + " ".join(f"{complex(v).real + 0.0:+.0f}" if abs(complex(v).imag) < 1e-12 else f"{v:.3g}" for v in row) + "]")
    return rows


def cmd_verify(args) -> int:
    leo = EXPERIMENT_LEOS[args.leo]()
    report = verify_leo(leo, trials=args.trials, rng_seed=args.seed)
    print(f"LEO {args.leo}: {leo.codespace.dim}-dim codespace in {leo.codespace.ambient_dim} dims, phase {leo.phase:.6f}")
    if args.leo == "cnot":
        print("CNOT in basis {|00>, |01>, |10>+|11>, |10>-|11>}:")
        print("\n".join(_format_matrix(cnot_in_rotated_basis())))
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_RUNTIME


def cmd_sweep(args) -> int:
    doc = _read_json(args.config)
    if not isinstance(doc, dict):
        raise ex.ConfigError("config document must be an object")
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.shots is not None:
        doc["shots"] = args.shots
    if args.full_grid:
        doc["tau"] = "full"
    if args.variant:
        doc["variant"] = args.variant
    configs = ex.configs_from_dict(doc)
    series = [ex.run_sweep(cfg) for cfg in configs]
    for s in series:
        f = s.fidelities
        print(
            f"{s.experiment:5s} {s.variant:12s} first {f[0]:.4f}  last {f[-1]:.4f}  min {min(f):.4f}  max {max(f):.4f}",
            file=sys.stderr,
        )
    if args.out is None:
        ex.write_csv_stream(series, sys.stdout)
    else:
        ex.write_csv(series, args.out)
    if args.svg:
        _emit(fidelity_svg(series, title=f"{configs[0].which}: fidelity vs tau"), args.svg)
    return EXIT_OK


def cmd_kick_study(args) -> int:
    doc = _read_json(args.config) if args.config else {}
    if args.seed is not None:
        doc = dict(doc, seed=args.seed)
    cfg = ex.KickStudyConfig.from_dict(doc)
    study = ex.kick_study(cfg)
    if args.out is None:
        ex.write_kick_csv_stream(study, sys.stdout)
    else:
        ex.write_kick_csv(study, args.out)
    print(f"slope leakage vs t (one kick pair): {study.slope_kick_vs_t:.4f}")
    print(f"slope leakage vs t (no kicks):      {study.slope_free_vs_t:.4f}")
    print(f"slope distance-to-limit vs m:      {study.slope_distance_vs_m:.4f}")
    return EXIT_OK


def cmd_export(args) -> int:
    text = export_qasm(BUILDERS[args.which](args.tau, insert_identity=args.insert_identity))
    _emit(text, args.path or args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="base RNG seed")
    common.add_argument("--shots", type=int, default=None, help="shots per circuit (default 1024)")
    common.add_argument("--out", default=None, help="output path (stdout if omitted)")

    p = argparse.ArgumentParser(prog="leo-lab", description="Leakage elimination operator toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="check LEO (anti)commutation relations")
    v.add_argument("leo", choices=sorted(EXPERIMENT_LEOS))
    v.add_argument("--trials", type=int, default=100)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="run a tau sweep from a config file")
    s.add_argument("config")
    s.add_argument("--svg", default=None, help="write a fidelity-vs-tau SVG plot here")
    s.add_argument("--full-grid", action="store_true", help="sweep every tau in 1..600")
    s.add_argument("--variant", nargs="+", choices=ex.VARIANTS, default=None)
    s.set_defaults(func=cmd_sweep)

    k = sub.add_parser("kick-study", parents=[common], help="parity-kick convergence study")
    k.add_argument("config", nargs="?", default=None)
    k.set_defaults(func=cmd_kick_study)

    e = sub.add_parser("export", parents=[common], help="write an experiment circuit as OpenQASM 2.0")
    e.add_argument("which", choices=sorted(BUILDERS))
    e.add_argument("path", nargs="?", default=None)
    e.add_argument("--tau", type=int, default=1)
    e.add_argument("--insert-identity", action="store_true")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # "export z2 --tau 1 out.qasm": argparse leaves a trailing positional unparsed
    if args.command == "export" and args.path is None and len(extra) == 1 and not extra[0].startswith("-"):
        args.path, extra = extra[0], []
    if extra:
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    if getattr(args, "seed", None) is None and args.command == "verify":
        args.seed = 0
    if getattr(args, "trials", 1) < 1 or (args.shots is not None and args.shots < 1):
        parser.error("--trials and --shots must be positive")
    if args.command == "export" and args.tau < 0:
        parser.error("--tau must be >= 0")
    try:
        return args.func(args)
    except ex.ConfigError as exc:
        print(f"leo-lab: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TypeError, ValueError) as exc:
        if args.command in ("sweep", "kick-study"):
            print(f"leo-lab: config error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"leo-lab: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"leo-lab: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
