"""
Command-line entry point: python -m src.cli <command> [flags].

Exit codes: 0 success, 1 usage error, 2 verification or certificate failure.
Results go to stdout, logs to stderr.
"""

import argparse
import csv
import io
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ValidationError

from src import config
from src.config import RunConfig, build_run_config
from src.errors import CertificateIncomplete, SpecDimError
from src.growth_graph import build_graph, find_root, length_function, to_document, to_dot
from src.length_operator import (
    SpectralOptions,
    exact_summability,
    fit_summability,
    spectral_dimension,
    zeta_partial_sum,
)
from src.spherical_spectrum import SphereFamily, enumerate_spectrum, supported_families
from src.utils import JsonReportMixin, configure_logging
from src.verification import (
    BranchingSuite,
    DiracSuite,
    HwvSuite,
    LeapSuite,
    NormsSuite,
    VerificationSuite,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2

DEFAULT_CUTOFFS = {"dim": 500, "zeta": 100_000, "graph": 10, "spectrum": 10, "dirac": 50}

Outcome = Tuple[str, int]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class FitEstimate(JsonReportMixin, BaseModel):
    schema_version: int = config.SCHEMA_VERSION
    family: str
    n: int
    method: str = "fit"
    cutoff: int
    window: Tuple[int, int]
    estimate: float
    seed: Optional[int] = None


class ReportRow(BaseModel):
    family: str
    n: int
    sphere_dim: int
    spectral_dim: int
    match: bool


class DimensionTable(JsonReportMixin, BaseModel):
    schema_version: int = config.SCHEMA_VERSION
    seed: int
    rows: List[ReportRow]


def _family(cfg: RunConfig) -> SphereFamily:
    return SphereFamily(cfg.family, cfg.n)  # type: ignore[arg-type]


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _key_values(model: BaseModel) -> str:
    lines = []
    for key, value in model.model_dump(mode="json").items():
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _render(model: BaseModel, cfg: RunConfig) -> str:
    if cfg.emit == "json":
        return model.render_json() + "\n"  # type: ignore[attr-defined]
    if cfg.emit == "csv":
        payload = model.model_dump(mode="json")
        flat = {k: v for k, v in payload.items() if not isinstance(v, (list, dict))}
        return _csv(list(flat), [list(flat.values())])
    return _key_values(model)


def cmd_dim(cfg: RunConfig) -> Outcome:
    fam = _family(cfg)
    if cfg.method == "fit":
        cutoff = cfg.cutoff or DEFAULT_CUTOFFS["dim"]
        window = cfg.window or (cutoff // 2, cutoff)
        estimate = fit_summability(fam, cutoff, window)
        result = FitEstimate(
            family=fam.label,
            n=fam.n,
            cutoff=cutoff,
            window=window,
            estimate=estimate,
            seed=cfg.seed,
        )
        return _render(result, cfg), EXIT_OK
    options = SpectralOptions(c=cfg.c, norm_kind=cfg.norm_kind)
    certificate = spectral_dimension(fam, options).model_copy(update={"seed": cfg.seed})
    return _render(certificate, cfg), EXIT_OK


def cmd_zeta(cfg: RunConfig) -> Outcome:
    if cfg.p is None:
        raise UsageError("zeta requires --p")
    cutoff = cfg.cutoff or DEFAULT_CUTOFFS["zeta"]
    estimate = zeta_partial_sum(_family(cfg), cfg.p, cutoff).model_copy(
        update={"seed": cfg.seed}
    )
    return _render(estimate, cfg), EXIT_OK


def cmd_graph(cfg: RunConfig) -> Outcome:
    cutoff = cfg.cutoff or DEFAULT_CUTOFFS["graph"]
    if cutoff > config.MAX_GRAPH_CUTOFF:
        raise UsageError(f"graph cutoff must be <= {config.MAX_GRAPH_CUTOFF}")
    fam = _family(cfg)
    graph = build_graph(fam, c=cfg.c, cutoff=cutoff, norm_kind=cfg.norm_kind)
    root = find_root(graph)
    if root is None:
        logger.info(f"{fam}: no root at c={graph.c}")
    if cfg.emit == "dot":
        return to_dot(graph, root), EXIT_OK
    if cfg.emit == "json":
        document = to_document(graph, root).model_copy(update={"seed": cfg.seed})
        return document.render_json() + "\n", EXIT_OK
    if cfg.emit == "csv":
        lengths: Dict[Any, int] = length_function(graph, root) if root is not None else {}
        rows = [[str(v), lengths.get(v, "")] for v in graph.vertices]
        return _csv(["index", "length"], rows), EXIT_OK
    lines = [f"{fam} c={graph.c} norm={graph.norm_kind} cutoff={cutoff}"]
    lines.append(f"vertices: {len(graph.vertices)}  edges: {len(graph.edges)}")
    if root is None:
        lines.append("no root")
    else:
        lines.append(f"root: {root}")
        if fam.arity == 1:
            path = [root]
            while graph.successors[path[-1]]:
                path.append(graph.successors[path[-1]][0])
            lines.append("path: " + " -> ".join(str(v[0]) for v in path))
    return "\n".join(lines) + "\n", EXIT_OK


def _suite_for(target: str, cfg: RunConfig) -> VerificationSuite:
    fam = _family(cfg)
    if target == "hwv":
        return HwvSuite(fam, gamma=cfg.gamma, samples=cfg.samples, seed=cfg.seed)
    if target == "branching":
        return BranchingSuite(cfg.max_entry, cfg.max_rank, seed=cfg.seed)
    if target == "leap":
        return LeapSuite(fam, cfg.max_gamma, seed=cfg.seed)
    if target == "norms":
        return NormsSuite(
            max_gamma=cfg.max_gamma, oracle_max=cfg.max_gamma, fam=fam, seed=cfg.seed
        )
    if target == "dirac":
        return DiracSuite(fam, cutoff=cfg.cutoff or DEFAULT_CUTOFFS["dirac"], seed=cfg.seed)
    raise UsageError(f"unknown verification target '{target}'")


def cmd_verify(cfg: RunConfig, target: str) -> Outcome:
    report = _suite_for(target, cfg).run()
    code = EXIT_OK if report.passed else EXIT_FAILURE
    if cfg.emit == "json":
        return report.render_json() + "\n", code
    if cfg.emit == "csv":
        rows = [[c.name, c.passed] for c in report.checks]
        return _csv(["check", "passed"], rows), code
    lines = [f"verify {target}: {'PASS' if report.passed else 'FAIL'} (seed {cfg.seed})"]
    lines += [f"  [{'ok' if c.passed else 'FAIL'}] {c.name}" for c in report.checks]
    lines += [f"  note: {note}" for note in report.notes]
    return "\n".join(lines) + "\n", code


def cmd_report(cfg: RunConfig) -> Outcome:
    rows = []
    for fam in supported_families(cfg.max_n):
        spectral = exact_summability(fam)
        rows.append(
            ReportRow(
                family=fam.label,
                n=fam.n,
                sphere_dim=fam.sphere_dimension,
                spectral_dim=spectral,
                match=spectral == fam.sphere_dimension,
            )
        )
    table = DimensionTable(seed=cfg.seed, rows=rows)
    if cfg.out:
        table.save_json(cfg.out)
    code = EXIT_OK if all(r.match for r in rows) else EXIT_FAILURE
    if code != EXIT_OK:
        logger.error("report: spectral dimension differs from the sphere dimension")
    if cfg.emit == "json":
        return table.render_json() + "\n", code
    header = ["family", "n", "sphere_dim", "spectral_dim", "match"]
    body = [[getattr(r, h) for h in header] for r in rows]
    if cfg.emit == "csv":
        return _csv(header, body), code
    lines = ["  ".join(f"{h:>12}" for h in header)]
    lines += ["  ".join(f"{str(v):>12}" for v in row) for row in body]
    return "\n".join(lines) + "\n", code


def cmd_spectrum(cfg: RunConfig) -> Outcome:
    fam = _family(cfg)
    entries = enumerate_spectrum(fam, cfg.cutoff or DEFAULT_CUTOFFS["spectrum"])
    if cfg.emit == "json":
        document = {
            "schema_version": config.SCHEMA_VERSION,
            "seed": cfg.seed,
            "family": fam.label,
            "n": fam.n,
            "entries": [{"index": list(g), "dimension": d} for g, d in entries],
        }
        return json.dumps(document, indent=2, sort_keys=True) + "\n", EXIT_OK
    return _csv(["index", "dimension"], [[str(g), d] for g, d in entries]), EXIT_OK


def cmd_config(cfg: RunConfig) -> Outcome:
    return cfg.to_config_text(), EXIT_OK


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", help="odd-a, even-b or odd-d")
    parser.add_argument("--n", type=int)
    parser.add_argument("--method", choices=["exact", "fit"])
    parser.add_argument("--cutoff", type=int)
    parser.add_argument("--c", type=float)
    parser.add_argument("--norm-kind", dest="norm_kind", choices=["sup", "l2"])
    parser.add_argument("--p", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--emit", choices=["json", "csv", "dot", "text"])
    parser.add_argument("--window", help="lo,hi")
    parser.add_argument("--max-entry", dest="max_entry", type=int)
    parser.add_argument("--max-rank", dest="max_rank", type=int)
    parser.add_argument("--max-gamma", dest="max_gamma", type=int)
    parser.add_argument("--gamma", help="comma-separated index, e.g. 2,1")
    parser.add_argument("--max-n", dest="max_n", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--out", help="report: JSON file to write the table to")
    parser.add_argument("--config", dest="config_path", help="key = value file")
    parser.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specdim", description="Spectral dimension of spheres")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("dim", "zeta", "graph", "report", "spectrum", "config"):
        _add_run_flags(commands.add_parser(name))
    verify = commands.add_parser("verify")
    verify.add_argument("target", choices=["hwv", "branching", "leap", "norms", "dirac"])
    _add_run_flags(verify)
    return parser


_COMMANDS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "dim": cmd_dim,
    "zeta": cmd_zeta,
    "graph": cmd_graph,
    "report": cmd_report,
    "spectrum": cmd_spectrum,
    "config": cmd_config,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    flags = {k: v for k, v in vars(args).items() if k in RunConfig.model_fields}
    try:
        cfg = build_run_config(flags, args.config_path)
    except (ValidationError, ValueError, OSError) as exc:
        logger.error(f"Invalid configuration: {exc}")
        return EXIT_USAGE

    try:
        if args.command == "verify":
            output, code = cmd_verify(cfg, args.target)
        else:
            output, code = _COMMANDS[args.command](cfg)
    except CertificateIncomplete as exc:
        logger.error(f"Certificate incomplete: {exc} (failed: {exc.failed_checks})")
        return EXIT_FAILURE
    except (UsageError, SpecDimError, ValueError, OSError) as exc:
        logger.error(f"{args.command}: {exc}")
        return EXIT_USAGE

    sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
