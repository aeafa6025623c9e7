"""
Command-line front end: compute | scan | band | ingest | nernst.

Exit status: 0 ok, 1 usage, 2 data error, 3 numeric failure.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from casimir.catalog import builtin_names, load_materials_file, resolve_material
from casimir.config import CONFIG_KEYS, load_config_file, make_config, resolve_config
from casimir.errors import CasimirError, ConfigurationError, DomainError, IngestionError
from casimir.optics import ExtrapolationSpec, ingest
from casimir.sweeps import QUANTITY_UNITS, Geometry, SweepQuantity, SweepSpec, compute_point, run_band, run_scan
from casimir.thermo import nernst_scan

logger = logging.getLogger("casimir.cli")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS: Dict[str, Any] = {
    "model": "ideal-metal",
    "T": 300.0,
    "radius": 150e-6,
    "beta": 0.0,
    "jobs": 1,
    "convention": "at_T",
}
# Types of keys that may also come from a config file
KEY_TYPES = {
    "model": str, "model2": str, "materials": str, "a": float, "T": float, "radius": float, "beta": float,
    "jobs": int, "convention": str, "rel_tol": float, "y_max_offset": float, "l_max_cap": int,
    "euler_maclaurin_from": int, "block_size": int, "temperature": float,
}


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--model", help=f"material of plate 1 ({', '.join(builtin_names())})")
    p.add_argument("--model2", help="material of plate 2 (default: same as plate 1)")
    p.add_argument("--materials", help="INI file with user material definitions")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--y-max-offset", dest="y_max_offset", type=float)
    p.add_argument("--l-max-cap", dest="l_max_cap", type=int)
    p.add_argument("--euler-maclaurin-from", dest="euler_maclaurin_from", type=int)
    p.add_argument("--jobs", type=int, help="worker threads for sweeps")
    p.add_argument("-v", "--verbose", action="count", default=0)


def _geometry_args(p: argparse.ArgumentParser):
    p.add_argument("--radius", type=float, help="sphere radius (m) for gradients")
    p.add_argument("--beta", type=float, help="first-order PFA correction coefficient")
    p.add_argument("--roughness", type=float, nargs=2, metavar=("D1", "D2"), help="rms roughness of each body (m)")
    p.add_argument("--convention", choices=["at_T", "at_zero"], help="thermal correction normalisation")


def _sweep_args(p: argparse.ArgumentParser):
    p.add_argument("--variable", choices=["separation", "temperature"], default="separation")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--spacing", choices=["linear", "log"], default="linear")
    p.add_argument("--quantity", choices=[q.value for q in SweepQuantity], default="pressure")
    p.add_argument("--a", type=float, help="fixed separation (m) for temperature sweeps")
    p.add_argument("--T", type=float, help="fixed temperature (K) for separation sweeps")
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.add_argument("--plot-script", dest="plot_script", help="also write a matplotlib script for the CSV")
    _geometry_args(p)


def build_parser() -> CliParser:
    parser = CliParser(prog="casimir", description="Lifshitz-theory Casimir calculations")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p = sub.add_parser("compute", help="single value as JSON")
    _common(p)
    p.add_argument("--a", type=float, help="separation (m)")
    p.add_argument("--T", type=float, help="temperature (K); 0 selects the zero-temperature integrals")
    p.add_argument("--quantity", choices=[q.value for q in SweepQuantity], default="pressure")
    _geometry_args(p)

    p = sub.add_parser("scan", help="CSV sweep over separation or temperature")
    _common(p)
    _sweep_args(p)

    p = sub.add_parser("band", help="CSV envelope over a material-parameter interval")
    _common(p)
    _sweep_args(p)
    p.add_argument("--parameter", default="omega_p")
    p.add_argument("--low", type=float, required=True)
    p.add_argument("--high", type=float, required=True)
    p.add_argument("--samples", type=int, default=3)

    p = sub.add_parser("ingest", help="optical table -> eps(i xi_l) cache")
    p.add_argument("input")
    p.add_argument("--columns", choices=["eps", "nk"], default="eps")
    p.add_argument("--mode", choices=["drude", "plasma"], default="drude")
    p.add_argument("--omega-p", dest="omega_p", type=float, required=True, help="eV")
    p.add_argument("--gamma", type=float, help="eV, drude mode")
    p.add_argument("--T", type=float, default=300.0)
    p.add_argument("--l-max", dest="l_max", type=int, default=1000)
    p.add_argument("--cache-dir", dest="cache_dir", help="overrides CASIMIR_CACHE_DIR")
    p.add_argument("-v", "--verbose", action="count", default=0)

    p = sub.add_parser("nernst", help="low-temperature entropy scan as JSON")
    _common(p)
    p.add_argument("--a", type=float, help="separation (m)")
    p.add_argument("--t-max", dest="t_max", type=float, default=30.0)
    p.add_argument("--t-min", dest="t_min", type=float, default=0.2)
    p.add_argument("--points", type=int, default=8)
    p.add_argument("--t-grid", dest="t_grid", type=float, nargs="+", help="explicit descending grid (K)")
    return parser


def configure_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")


def _settings(args: argparse.Namespace) -> Dict[str, Any]:
    file_values: Dict[str, Any] = {}
    if getattr(args, "config", None):
        raw = load_config_file(args.config)
        unknown = set(raw) - set(KEY_TYPES)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        try:
            file_values = {k: KEY_TYPES[k](v) for k, v in raw.items()}
        except ValueError as e:
            raise ConfigurationError(f"bad value in {args.config}: {e}") from None
        if "temperature" in file_values:
            file_values.setdefault("T", file_values.pop("temperature"))
    flags = {k: v for k, v in vars(args).items() if k in KEY_TYPES}
    return resolve_config(flags, file_values, DEFAULTS)


def _models(settings: Dict[str, Any]):
    custom = load_materials_file(settings["materials"]) if settings.get("materials") else None
    model1 = resolve_material(settings["model"], custom)
    model2 = resolve_material(settings["model2"], custom) if settings.get("model2") else model1
    return model1, model2


def _matsubara(settings: Dict[str, Any], temperature: float):
    values = {k: settings.get(k) for k in CONFIG_KEYS if k != "temperature"}
    return make_config(temperature=temperature, **values)


def _geometry(settings: Dict[str, Any], args) -> Geometry:
    roughness = tuple(args.roughness) if getattr(args, "roughness", None) else (0.0, 0.0)
    return Geometry(radius=settings["radius"], beta=settings["beta"], roughness=roughness)


def _require(settings: Dict[str, Any], key: str, flag: str) -> Any:
    if settings.get(key) is None:
        raise DomainError(f"{flag} is required")
    return settings[key]


def cmd_compute(args) -> int:
    settings = _settings(args)
    a = _require(settings, "a", "--a")
    T = settings["T"]
    if not a > 0:
        raise DomainError(f"--a must be > 0, got {a}")
    model1, model2 = _models(settings)
    cfg = _matsubara(settings, T)
    quantity = SweepQuantity(args.quantity)
    out = compute_point(quantity, a, T, model1, model2, cfg, _geometry(settings, args), settings["convention"])
    record = {
        "quantity": quantity.value,
        "value": out["value"],
        "units": QUANTITY_UNITS[quantity],
        "truncation_error": out["truncation_error"],
        "terms_used": out["terms_used"],
        "converged": out["converged"],
        "a": a,
        "T": T,
        "model1": model1.name,
        "model2": model2.name,
    }
    print(json.dumps(record, indent=2))
    return EXIT_OK


def _sweep_spec(args, settings) -> SweepSpec:
    return SweepSpec(variable=args.variable, start=args.start, stop=args.stop, count=args.count,
                     spacing=args.spacing, quantity=args.quantity, separation=settings.get("a"),
                     temperature=settings["T"], convention=settings["convention"],
                     geometry=_geometry(settings, args))


PLOT_TEMPLATE = '''import matplotlib.pyplot as plt
import pandas as pd

df = pd.read_csv({csv!r})
x, y = df.columns[0], df.columns[1]
ax = df.plot(x=x, y=y, logx={logx}, legend=False)
ax.set_xlabel(x)
ax.set_ylabel(y)
plt.tight_layout()
plt.savefig({png!r})
'''


def _write_frame(frame, args, logx: bool):
    if args.output:
        frame.to_csv(args.output, index=False, float_format="%.10g")
        logger.info("CSV saved → %s", args.output)
    else:
        frame.to_csv(sys.stdout, index=False, float_format="%.10g")
    if args.plot_script:
        if not args.output:
            raise DomainError("--plot-script needs --output")
        png = str(Path(args.output).with_suffix(".png"))
        Path(args.plot_script).write_text(PLOT_TEMPLATE.format(csv=args.output, png=png, logx=logx),
                                          encoding="utf-8")
        logger.info("Plot script saved → %s", args.plot_script)


def cmd_scan(args) -> int:
    settings = _settings(args)
    spec = _sweep_spec(args, settings)
    model1, model2 = _models(settings)
    frame = run_scan(spec, model1, model2, _matsubara(settings, spec.temperature), settings["jobs"])
    _write_frame(frame, args, spec.spacing == "log")
    return EXIT_NUMERIC if (frame["error"] != "").any() else EXIT_OK


def cmd_band(args) -> int:
    settings = _settings(args)
    spec = _sweep_spec(args, settings)
    model1, model2 = _models(settings)
    band = run_band(spec, model1, model2, args.parameter, (args.low, args.high),
                    _matsubara(settings, spec.temperature), args.samples, settings["jobs"])
    _write_frame(band.to_frame(), args, spec.spacing == "log")
    return EXIT_OK


def cmd_ingest(args) -> int:
    ext = ExtrapolationSpec(args.mode, args.omega_p, args.gamma)
    material, path = ingest(args.input, ext, args.T, args.l_max, args.columns,
                            Path(args.cache_dir) if args.cache_dir else None)
    print(json.dumps({"rows": len(material.xi), "digest": material.digest, "eps_xi1": float(material.values[0]),
                      "cache": str(path)}, indent=2))
    return EXIT_OK


def cmd_nernst(args) -> int:
    settings = _settings(args)
    a = _require(settings, "a", "--a")
    if args.t_grid:
        grid: List[float] = list(args.t_grid)
    else:
        grid = list(np.geomspace(args.t_max, args.t_min, args.points))
    model1, model2 = _models(settings)
    report = nernst_scan(a, model1, model2, grid, _matsubara(settings, grid[0]), settings["jobs"])
    print(report.model_dump_json(indent=2))
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "scan": cmd_scan, "band": cmd_band, "ingest": cmd_ingest, "nernst": cmd_nernst}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except (DomainError, ConfigurationError, ValidationError) as e:
        print(f"casimir: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IngestionError as e:
        print(f"casimir: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except CasimirError as e:
        print(f"casimir: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
