"""Command-line frontend: generate, validate, gap, fetch.

Exit codes: 0 success, 1 validation or domain failure, 2 usage error,
3 I/O or network failure. Diagnostics go to stderr; the only machine-readable
line on stdout is the gap summary.
"""

import argparse
import os
import sys
from pathlib import Path

from .config import load_config
from .errors import DtGenError, FetchError
from .geodesy import origin_of
from .osm import fetch_overpass
from .pipeline import generate_world
from .replay import (
    VehicleState,
    compute_gap,
    derive_headings,
    parse_controls_csv,
    parse_trajectory_csv,
    simulate_controls,
)
from .sdf import validate_sdf

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3

ENDPOINT_ENV_VAR = "DTGEN_OVERPASS_ENDPOINT"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtgen",
        description=(
            "Generate low-fidelity SDFormat digital-twin worlds from "
            "OpenStreetMap data and compare recorded vehicle traces against "
            "an internal kinematic model."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build an SDF world from a map and a config")
    gen.add_argument("--config", required=True, help="generation config JSON")
    source = gen.add_mutually_exclusive_group(required=True)
    source.add_argument("--osm", help="OSM XML file to read")
    source.add_argument("--fetch", action="store_true", help="download the map extract")
    gen.add_argument(
        "--endpoint",
        default=os.environ.get(ENDPOINT_ENV_VAR),
        help=f"Overpass interpreter URL (default: ${ENDPOINT_ENV_VAR})",
    )
    gen.add_argument("--timeout", type=float, default=25.0, help="network timeout, seconds")
    gen.add_argument("--out", required=True, help="SDF output path")

    val = sub.add_parser("validate", help="check an SDF file for structural violations")
    val.add_argument("path", help="SDF file to check")

    gap = sub.add_parser("gap", help="compare a recorded trace against a simulation")
    gap.add_argument("--recorded", required=True, help="recorded trajectory CSV")
    source = gap.add_mutually_exclusive_group(required=True)
    source.add_argument("--controls", help="control CSV to replay through the vehicle model")
    source.add_argument("--sim", help="pre-simulated trajectory CSV")
    gap.add_argument("--config", required=True, help="generation config JSON")
    gap.add_argument("--vehicle", help="vehicle name from the config (with --controls)")
    gap.add_argument("--out", required=True, help="gap report JSON output path")

    fetch = sub.add_parser("fetch", help="download the map extract for the config bbox")
    fetch.add_argument("--config", required=True, help="generation config JSON")
    fetch.add_argument(
        "--endpoint",
        default=os.environ.get(ENDPOINT_ENV_VAR),
        help=f"Overpass interpreter URL (default: ${ENDPOINT_ENV_VAR})",
    )
    fetch.add_argument("--timeout", type=float, default=25.0, help="network timeout, seconds")
    fetch.add_argument("--out", required=True, help="OSM XML output path")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    handlers = {
        "generate": _cmd_generate,
        "validate": _cmd_validate,
        "gap": _cmd_gap,
        "fetch": _cmd_fetch,
    }
    try:
        return handlers[args.command](args)
    except FetchError as exc:
        _error(str(exc))
        return EXIT_IO
    except (DtGenError, ValueError) as exc:
        # config, map, or emission defects: domain failures
        _error(str(exc))
        return EXIT_FAILURE
    except OSError as exc:
        _error(str(exc))
        return EXIT_IO


def main_entry() -> None:
    raise SystemExit(main())


def _error(message: str) -> None:
    print(f"dtgen: error: {message}", file=sys.stderr)


def _cmd_generate(args) -> int:
    config = load_config(Path(args.config).read_text(encoding="utf-8"))
    if args.fetch:
        if not args.endpoint:
            _error(f"--fetch requires --endpoint or ${ENDPOINT_ENV_VAR}")
            return EXIT_USAGE
        osm_xml = fetch_overpass(config.bbox, args.endpoint, args.timeout)
    else:
        osm_xml = Path(args.osm).read_text(encoding="utf-8")

    result = generate_world(config, osm_xml)
    report = validate_sdf(result.world.text)
    if report.violations:
        for violation in report.violations:
            print(f"{violation.location}: {violation.message}", file=sys.stderr)
        return EXIT_FAILURE

    Path(args.out).write_text(result.world.text, encoding="utf-8")
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"warnings: {len(result.warnings)}", file=sys.stderr)
    print(
        f"models: {len(result.world.building_models)} buildings, "
        f"{len(result.world.road_models)} roads, "
        f"{len(result.world.vehicle_models)} vehicles",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_validate(args) -> int:
    report = validate_sdf(Path(args.path).read_text(encoding="utf-8"))
    for violation in report.violations:
        print(f"{violation.location}: {violation.message}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAILURE


def _cmd_gap(args) -> int:
    config = load_config(Path(args.config).read_text(encoding="utf-8"))
    origin = origin_of(config.bbox)
    recorded = parse_trajectory_csv(
        Path(args.recorded).read_text(encoding="utf-8"), origin=origin
    )

    if args.controls:
        if not args.vehicle:
            _error("--controls requires --vehicle")
            return EXIT_USAGE
        spec = next((v for v in config.vehicles if v.name == args.vehicle), None)
        if spec is None:
            _error(f"unknown vehicle name {args.vehicle!r}")
            return EXIT_USAGE
        controls = parse_controls_csv(Path(args.controls).read_text(encoding="utf-8"))
        first = recorded.samples[0]
        yaw0 = first.yaw if recorded.has_yaw else derive_headings(recorded)[0]
        initial = VehicleState(first.x, first.y, yaw0, 0.0)
        t_end = recorded.t_last if recorded.t_last > controls[-1].t else None
        sim = simulate_controls(initial, controls, spec, t_end=t_end)
        for warning in sim.warnings:
            print(f"warning: {warning}", file=sys.stderr)
    else:
        sim = parse_trajectory_csv(Path(args.sim).read_text(encoding="utf-8"), origin=origin)

    report = compute_gap(recorded, sim)
    Path(args.out).write_text(report.to_json(), encoding="utf-8")
    print(
        f"rmse={report.rmse:.6f} max={report.max_dev:.6f} "
        f"final_drift={report.final_drift:.6f}"
    )
    return EXIT_OK


def _cmd_fetch(args) -> int:
    config = load_config(Path(args.config).read_text(encoding="utf-8"))
    if not args.endpoint:
        _error(f"fetch requires --endpoint or ${ENDPOINT_ENV_VAR}")
        return EXIT_USAGE
    xml_text = fetch_overpass(config.bbox, args.endpoint, args.timeout)
    Path(args.out).write_text(xml_text, encoding="utf-8")
    return EXIT_OK
