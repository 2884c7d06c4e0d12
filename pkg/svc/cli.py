from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Tuple

from pydantic import BaseModel, ValidationError

from app.config import RunConfig, load_config
from app.errors import EXIT_IO, EXIT_OK, EXIT_PARSE, ToolkitError
from app.logging import configure_logging
from app.schemas import BoostReport
from app.service import Runner
from app.wavefn import write_grid

logger = logging.getLogger("svc.cli")

BOOST_COLUMNS = "z,t,z',t',u,v,u',v',uv,u'v'"


def _point(text: str) -> Tuple[float, float]:
    try:
        z, t = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'z,t', got {text!r}") from None
    return z, t


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def boost_table(report: BoostReport) -> str:
    lines = [BOOST_COLUMNS]
    for r in report.rows:
        values = [r.z, r.t, r.z_boosted, r.t_boosted, r.u, r.v]
        values += [r.u_boosted, r.v_boosted, r.invariant, r.invariant_boosted]
        lines.append(",".join(_fmt(v) for v in values))
    return "\n".join(lines) + "\n"


# ---------- Parser ----------

# flag dest -> RunConfig field, per subcommand
OVERRIDES: Dict[str, Dict[str, str]] = {
    "boost": {"eta": "eta", "point": "points"},
    "density": {
        "eta": "eta",
        "z_min": "z_min",
        "z_max": "z_max",
        "t_min": "t_min",
        "t_max": "t_max",
        "nz": "n_z",
        "nt": "n_t",
        "order": "quadrature_order",
    },
    "residual": {
        "eta": "eta",
        "h": "fd_step",
        "signature": "signature",
        "extent": "residual_extent",
        "points_per_axis": "residual_points_per_axis",
        "tol": "residual_tol",
    },
    "expand": {"eta": "eta", "nmax": "expansion_n_max", "order": "quadrature_order"},
    "modes": {"m": "mass", "A": "spring", "C": "coupling"},
    "algebra-check": {"nmax": "fock_n_max", "margin": "interior_margin", "tol": "closure_tol"},
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out", type=Path, help="output path (default: stdout)")
    shared.add_argument("--format", choices=["csv", "json"])
    shared.add_argument("--config", type=Path, help="JSON file with RunConfig fields")
    shared.add_argument("--log-level", dest="log_level")

    ap = argparse.ArgumentParser("svc.cli", description="Covariant oscillator toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("boost", parents=[shared], help="boost points, light-cone invariants")
    p.add_argument("--eta", type=float)
    p.add_argument("--point", type=_point, action="append", help="z,t (repeatable)")

    p = sub.add_parser("density", parents=[shared], help="|psi_eta|^2 grid file")
    p.add_argument("--eta", type=float)
    for flag in ("z-min", "z-max", "t-min", "t-max"):
        p.add_argument(f"--{flag}", type=float)
    p.add_argument("--nz", type=int)
    p.add_argument("--nt", type=int)
    p.add_argument("--order", type=int)

    p = sub.add_parser("residual", parents=[shared], help="Lorentz-invariant equation residual")
    p.add_argument("--eta", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--signature", choices=["space_positive", "time_positive"])
    p.add_argument("--extent", type=float)
    p.add_argument("--points-per-axis", type=int)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("expand", parents=[shared], help="oscillator-basis squeeze expansion")
    p.add_argument("--eta", type=float)
    p.add_argument("--nmax", type=int)
    p.add_argument("--order", type=int)

    p = sub.add_parser("modes", parents=[shared], help="coupled-oscillator normal modes")
    p.add_argument("--m", type=float)
    p.add_argument("--A", type=float)
    p.add_argument("--C", type=float)

    p = sub.add_parser("algebra-check", parents=[shared], help="o(3,2) commutator closure")
    p.add_argument("--nmax", type=int)
    p.add_argument("--margin", type=int)
    p.add_argument("--tol", type=float)
    return ap


def effective_config(args: argparse.Namespace) -> RunConfig:
    overrides = {
        field: getattr(args, dest.replace("-", "_"))
        for dest, field in OVERRIDES[args.command].items()
    }
    overrides.update(out=args.out, format=args.format, log_level=args.log_level)
    return load_config(args.config, **overrides)


# ---------- Commands ----------


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _json(report: BaseModel) -> str:
    return report.model_dump_json(indent=2) + "\n"


def cmd_boost(cfg: RunConfig) -> int:
    report = Runner(cfg).boost()
    _emit(_json(report) if cfg.format == "json" else boost_table(report), cfg.out)
    return EXIT_OK


def cmd_density(cfg: RunConfig) -> int:
    if cfg.out is None:
        raise ValueError("density needs --out (or `out` in the config file)")
    grid, summary = Runner(cfg).density()
    write_grid(grid, cfg.out, cfg.format)
    sys.stdout.write(_json(summary))
    return EXIT_OK


def cmd_residual(cfg: RunConfig) -> int:
    _emit(_json(Runner(cfg).residual()), cfg.out)
    return EXIT_OK


def cmd_expand(cfg: RunConfig) -> int:
    _emit(_json(Runner(cfg).expand()), cfg.out)
    return EXIT_OK


def cmd_modes(cfg: RunConfig) -> int:
    _emit(_json(Runner(cfg).modes()), cfg.out)
    return EXIT_OK


def cmd_algebra_check(cfg: RunConfig) -> int:
    _emit(_json(Runner(cfg).algebra_check()), cfg.out)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "boost": cmd_boost,
    "density": cmd_density,
    "residual": cmd_residual,
    "expand": cmd_expand,
    "modes": cmd_modes,
    "algebra-check": cmd_algebra_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    configure_logging("WARNING")

    try:
        cfg = effective_config(args)
    except (ValidationError, ValueError) as e:
        ap.print_usage(sys.stderr)
        sys.stderr.write(f"svc.cli {args.command}: invalid configuration: {e}\n")
        return EXIT_PARSE
    except OSError as e:
        sys.stderr.write(f"svc.cli {args.command}: cannot read config: {e}\n")
        return EXIT_IO
    configure_logging(cfg.log_level, command=args.command)

    try:
        code = COMMANDS[args.command](cfg)
    except ToolkitError as e:
        logger.error(e.message, extra={"extra": {"error": type(e).__name__, **e.detail}})
        sys.stderr.write(f"svc.cli {args.command}: {type(e).__name__}: {e.message}\n")
        return e.exit_code
    except ValidationError as e:
        sys.stderr.write(f"svc.cli {args.command}: invalid input: {e}\n")
        return EXIT_PARSE
    except ValueError as e:
        ap.print_usage(sys.stderr)
        sys.stderr.write(f"svc.cli {args.command}: {e}\n")
        return EXIT_PARSE
    except OSError as e:
        sys.stderr.write(f"svc.cli {args.command}: cannot write output: {e}\n")
        return EXIT_IO
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
