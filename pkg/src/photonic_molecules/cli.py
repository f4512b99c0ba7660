"""Command-line scenario runner.

    photonic-molecules run --config cfg.json [--set key=value ...] [--out DIR] [--verbose]
    photonic-molecules sweep --config cfg.json [--threads N] [--set ...] [--out DIR]
    photonic-molecules list

Every run writes manifest.json before computing and rewrites it at the end
with the status, focus values, messages and the list of files. Exit status is
0 on success, 2 for configuration errors and 3 for numerical failures.
"""

import argparse
import copy
import hashlib
import itertools
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import NamedTuple

from tqdm import tqdm

from . import __version__
from .errors import CONFIG_ERROR_STATUS, ConfigurationError, InvalidParameterError, PhotonicMoleculesError, SweepCapExceededError
from .Frontend import Frontend, ScenarioContext
from .RequestedParameters import apply_override, parse_override
from .scenarios import REGISTRY, execute, resolve_config
from .TableBuilder import RecordTableBuilder, to_json_ready, write_json, write_table

logger = logging.getLogger(__name__)

PACKAGE_LOGGER = "photonic_molecules"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
DEFAULT_SWEEP_CAP = 256
UNEXPECTED_ERROR_STATUS = 1


class RunResult(NamedTuple):
    status: int
    output_dir: Path
    manifest: dict


def config_hash(config: dict) -> str:
    """SHA-256 of the canonical (sorted-key, compact) JSON text of a config."""
    text = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _write_manifest(output_dir: Path, manifest: dict) -> None:
    text = json.dumps(to_json_ready(manifest), sort_keys=True, indent=2)
    (output_dir / "manifest.json").write_text(text + "\n", encoding="utf-8")


def default_output_dir(config: dict) -> Path:
    if config.get("output_dir"):
        return Path(config["output_dir"])
    return Path("runs") / str(config.get("scenario", "run")).replace(":", "-")


def _attach_log_file(path: Path) -> logging.Handler:
    handler = logging.FileHandler(path, mode="w", encoding="utf-8")
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logging.getLogger(PACKAGE_LOGGER).addHandler(handler)
    return handler


def _detach(handler: logging.Handler | None) -> None:
    if handler is not None:
        logging.getLogger(PACKAGE_LOGGER).removeHandler(handler)
        handler.close()


def run_scenario(config: dict, output_dir: Path | None = None, log_to_file: bool = True) -> RunResult:
    """Validate and run one scenario, writing every output below `output_dir`.

    Package errors are turned into error.json and the matching exit status;
    anything else propagates.
    """
    output_dir = Path(output_dir) if output_dir is not None else default_output_dir(config)
    output_dir.mkdir(parents=True, exist_ok=True)
    frontend = Frontend()
    files = ["manifest.json"]
    manifest = {
        "scenario": config.get("scenario"),
        "config": config,
        "config_sha256": config_hash(config),
        "version": __version__,
        "status": "running",
        "files": files,
    }
    _write_manifest(output_dir, manifest)

    handler = None
    if log_to_file:
        handler = _attach_log_file(output_dir / "run.log")
        files.append("run.log")
    status = 0
    try:
        resolved = resolve_config(config)
        manifest["resolved_config"] = resolved
        execute(resolved, output_dir, frontend, files)
    except PhotonicMoleculesError as error:
        status = error.exit_status
        record = error.to_record()
        logger.error("%s failed: %s", config.get("scenario"), error)
        write_json(ScenarioContext(config, output_dir, frontend, files=files), "error.json", record)
        manifest["error"] = record
    finally:
        _detach(handler)

    manifest.update(
        status="ok" if status == 0 else "failed",
        exit_status=status,
        focus=frontend.focus_record(),
        messages=frontend.message_records(),
        tables=frontend.table_records(),
    )
    _write_manifest(output_dir, manifest)
    return RunResult(status, output_dir, manifest)


def sweep_points(config: dict) -> tuple[list[str], list[tuple]]:
    """Axis names and the Cartesian product of their values, first axis slowest.

    Raises:
        InvalidParameterError: Without axes or with an empty axis.
        SweepCapExceededError: If the product exceeds sweep.max_points.
    """
    settings = config.get("sweep") or {}
    axes = settings.get("axes") or {}
    if not axes:
        raise InvalidParameterError("sweep.axes", axes, "A sweep needs at least one axis.")
    for name, values in axes.items():
        if not isinstance(values, list) or not values:
            raise InvalidParameterError("sweep.axes." + name, values, "Sweep axes must be non-empty lists.")
    names = list(axes)
    points = list(itertools.product(*(axes[name] for name in names)))
    cap = int(settings.get("max_points", DEFAULT_SWEEP_CAP))
    if len(points) > cap:
        raise SweepCapExceededError(len(points), cap)
    return names, points


def _cell(value):
    value = to_json_ready(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return value


def sweep(config: dict, output_dir: Path | None = None, threads: int = 1, progress: bool = False) -> RunResult:
    """Run every point of config["sweep"]["axes"] as an isolated scenario.

    Points run on a thread pool; results are collected in submission order.
    A failing point is recorded and does not stop the others. The returned
    status is the largest point status.
    """
    output_dir = Path(output_dir) if output_dir is not None else default_output_dir(config)
    output_dir.mkdir(parents=True, exist_ok=True)
    names, points = sweep_points(config)
    base = {key: value for key, value in config.items() if key not in ("sweep", "output_dir")}
    files = ["manifest.json", "run.log", "sweep.csv"]
    manifest = {
        "scenario": config.get("scenario"),
        "config": config,
        "config_sha256": config_hash(config),
        "version": __version__,
        "status": "running",
        "axes": {name: config["sweep"]["axes"][name] for name in names},
        "files": files,
    }
    _write_manifest(output_dir, manifest)
    handler = _attach_log_file(output_dir / "run.log")

    def run_point(index, values):
        point = copy.deepcopy(base)
        for name, value in zip(names, values):
            apply_override(point, name, value)
        point_dir = output_dir / "point_{:04d}".format(index)
        try:
            return run_scenario(point, point_dir, log_to_file=False)
        except Exception as error:
            logger.exception("sweep point %d failed", index)
            point_dir.mkdir(parents=True, exist_ok=True)
            return RunResult(UNEXPECTED_ERROR_STATUS, point_dir, {"files": [], "focus": {}, "error": {"type": type(error).__name__, "message": str(error)}})

    try:
        with ThreadPoolExecutor(max_workers=max(int(threads), 1)) as executor:
            futures = [executor.submit(run_point, index, values) for index, values in enumerate(points)]
            results = [future.result() for future in tqdm(futures, desc="sweep", disable=not progress)]
    finally:
        _detach(handler)

    rows = []
    point_records = []
    focus_columns = []
    for index, (values, result) in enumerate(zip(points, results)):
        relative = result.output_dir.relative_to(output_dir).as_posix()
        row = {"index": index, **dict(zip(names, values)), "status": "ok" if result.status == 0 else "failed"}
        row["exit_status"] = result.status
        row["output_dir"] = relative
        for key, value in result.manifest.get("focus", {}).items():
            if key not in focus_columns:
                focus_columns.append(key)
            row[key] = _cell(value)
        rows.append(row)
        files.extend(relative + "/" + name for name in result.manifest.get("files", []))
        point_records.append(
            {
                "index": index,
                "values": dict(zip(names, values)),
                "status": row["status"],
                "exit_status": result.status,
                "output_dir": relative,
                "error": result.manifest.get("error"),
            }
        )

    columns = ["index", *names, "status", "exit_status", "output_dir", *focus_columns]
    ctx = ScenarioContext(config, output_dir, Frontend("sweep"), files=files)
    write_table(ctx, "sweep.csv", RecordTableBuilder(rows, columns))

    status = max((result.status for result in results), default=0)
    manifest.update(status="ok" if status == 0 else "failed", exit_status=status, points=point_records)
    _write_manifest(output_dir, manifest)
    logger.info("sweep finished: %d of %d points succeeded", sum(r.status == 0 for r in results), len(results))
    return RunResult(status, output_dir, manifest)


def load_config(path, overrides=()) -> dict:
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as error:
        raise ConfigurationError("Cannot read config {}: {}".format(path, error)) from error
    except json.JSONDecodeError as error:
        raise ConfigurationError("Config {} is not valid JSON: {}".format(path, error)) from error
    if not isinstance(config, dict):
        raise ConfigurationError("Config {} must hold a JSON object.".format(path))
    for text in overrides:
        key, value = parse_override(text)
        apply_override(config, key, value)
    return config


def configure_logging(verbose: bool = False) -> None:
    package_logger = logging.getLogger(PACKAGE_LOGGER)
    package_logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    if not any(isinstance(h, logging.StreamHandler) and not isinstance(h, logging.FileHandler) for h in package_logger.handlers):
        stream = logging.StreamHandler()
        stream.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        package_logger.addHandler(stream)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photonic-molecules", description="Rydberg-EIT photonic molecule scenarios")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("run", "run one scenario"), ("sweep", "run a scenario over a parameter grid")):
        command = commands.add_parser(name, help=help_text)
        command.add_argument("--config", required=True, help="JSON configuration file")
        command.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a dotted config key")
        command.add_argument("--out", type=Path, help="output directory")
        command.add_argument("--verbose", action="store_true", help="log at DEBUG level")
        if name == "sweep":
            command.add_argument("--threads", type=int, default=1, help="concurrent sweep points")

    commands.add_parser("list", help="list the available scenarios")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name, scenario in REGISTRY.items():
            print("{:<12} {}".format(name, scenario.module.get_description()))
        return 0

    configure_logging(args.verbose)
    try:
        config = load_config(args.config, args.set)
    except ConfigurationError as error:
        logger.error("%s", error)
        return CONFIG_ERROR_STATUS
    if args.command == "sweep":
        try:
            result = sweep(config, args.out, args.threads, progress=True)
        except ConfigurationError as error:
            logger.error("%s", error)
            return error.exit_status
    else:
        result = run_scenario(config, args.out)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
