"""Batch command-line front door.

Subcommands operate on JSON point-set documents
{"dim": d, "points": [[x1,...,xd], ...]} (arrays of documents for batch
files) and emit JSON reports with sorted keys, so identical configs and
seeds produce byte-identical files.  Output files are written atomically
after the computation succeeds; nothing is left behind on failure.

Exit codes: 0 success, 1 validation failure (arguments, schema, ranges),
2 invariant violation detected during a verify-style run.

Relative --out paths are resolved against $SYMPROD_OUT_DIR when set.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cone import check_cone_comparison
from .distortion import (
    adversarial_search,
    circle_pinned_map,
    collect_ratio_pairs,
    embedding_map,
    estimate_distortion,
    retraction_map,
    sampler_for,
    tomography_map,
)
from .errors import InvariantViolationError, SchemaError, SymprodError
from .pipeline import build_pipeline, dimension, embed, embed_rd
from .pointset import FinitePointSet, hausdorff_distance, pointset_from_doc
from .retraction import retract_to
from .tomography import make_line_family, separation_constant, verify_separation

_DISTORTION_MAPS = ("embed", "retract", "tomo", "circle")


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: one command plus its numeric and path parameters."""

    command: str
    inputs: tuple[str, ...] = ()
    output: str | None = None
    n: int = 2
    k: int = 1
    d: int = 2
    q: int = 2
    max_n: int = 4
    seed: int = 0
    samples: int = 1000
    search: int = 0
    step: float = 0.1
    points: int = 24
    map_name: str = "embed"
    csv_path: str | None = None
    emit_pipeline: str | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            inputs=tuple(getattr(args, "inputs", ()) or ()),
            output=getattr(args, "out", None),
            n=getattr(args, "n", 2),
            k=getattr(args, "k", 1),
            d=getattr(args, "d", 2),
            q=getattr(args, "q", 2),
            max_n=getattr(args, "max", 4),
            seed=getattr(args, "seed", 0),
            samples=getattr(args, "samples", 1000),
            search=getattr(args, "search", 0),
            step=getattr(args, "step", 0.1),
            points=getattr(args, "points", 24),
            map_name=getattr(args, "map", "embed"),
            csv_path=getattr(args, "csv", None),
            emit_pipeline=getattr(args, "emit_pipeline", None),
        )


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2; we reserve that
        raise SchemaError(message)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _resolve_out(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get("SYMPROD_OUT_DIR")
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _emit_report(cfg: RunConfig, report: dict) -> None:
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    out = _resolve_out(cfg.output)
    if out is None:
        sys.stdout.write(text)
    else:
        _write_text(out, text)


def _load_documents(path: str) -> tuple[list[FinitePointSet], bool]:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise SchemaError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}") from exc
    if isinstance(raw, list):
        return [pointset_from_doc(doc) for doc in raw], True
    return [pointset_from_doc(raw)], False


def _write_documents(cfg: RunConfig, path: str, docs: list[dict], was_array: bool) -> None:
    payload = docs if was_array else docs[0]
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
    out = _resolve_out(path)
    _write_text(out, text)


def cmd_dims(cfg: RunConfig) -> int:
    for n in range(1, cfg.max_n + 1):
        sys.stdout.write(f"{n}\t{dimension(n)}\n")
    return 0


def cmd_hausdorff(cfg: RunConfig) -> int:
    (a,), _ = _load_documents(cfg.inputs[0])
    (b,), _ = _load_documents(cfg.inputs[1])
    sys.stdout.write(f"{hausdorff_distance(a, b)!r}\n")
    return 0


def cmd_embed(cfg: RunConfig) -> int:
    sets, was_array = _load_documents(cfg.inputs[0])
    pipeline = build_pipeline(cfg.n)
    rows = [{"input": s.to_doc(), "vector": list(embed(s, pipeline))} for s in sets]
    _write_documents(cfg, cfg.inputs[1], rows, was_array)
    if cfg.emit_pipeline:
        _write_text(
            _resolve_out(cfg.emit_pipeline),
            json.dumps(_jsonable(pipeline.to_dict()), sort_keys=True, indent=2) + "\n",
        )
    return 0


def cmd_embed_rd(cfg: RunConfig) -> int:
    sets, was_array = _load_documents(cfg.inputs[0])
    rows = [{"input": s.to_doc(), "vector": list(embed_rd(s, cfg.n, cfg.d))} for s in sets]
    _write_documents(cfg, cfg.inputs[1], rows, was_array)
    return 0


def cmd_retract(cfg: RunConfig) -> int:
    sets, was_array = _load_documents(cfg.inputs[0])
    rows = [retract_to(s, cfg.n, cfg.k).to_doc() for s in sets]
    _write_documents(cfg, cfg.inputs[1], rows, was_array)
    return 0


def cmd_tomo(cfg: RunConfig) -> int:
    family = make_line_family(cfg.q, cfg.d)
    cert = separation_constant(family)
    report = cert.to_doc()
    status = 0
    if cfg.samples > 0:
        verify = verify_separation(cert, cfg.samples, cfg.seed)
        report["verify"] = verify.to_dict()
        if not (verify.bound_ok and verify.one_lipschitz_ok):
            status = 2
    report["ok"] = status == 0
    _emit_report(cfg, report)
    return status


def cmd_cone_check(cfg: RunConfig) -> int:
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0xC0]))
    radius = np.sqrt(rng.uniform(0.0, 1.0, cfg.points - 1))
    angle = rng.uniform(0.0, 2.0 * np.pi, cfg.points - 1)
    disk = np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)
    sample = np.vstack([[0.0, 0.0], disk])
    report = check_cone_comparison(sample, cfg.samples, cfg.seed)
    payload = report.to_dict()
    payload["points"] = cfg.points
    ok = report.bound_10_ok and report.bound_12_ok
    payload["ok"] = ok
    _emit_report(cfg, payload)
    return 0 if ok else 2


def _make_distortion_map(cfg: RunConfig):
    if cfg.map_name == "embed":
        return embedding_map(build_pipeline(cfg.n)), 1
    if cfg.map_name == "retract":
        return retraction_map(cfg.n), 1
    if cfg.map_name == "tomo":
        cert = separation_constant(make_line_family(cfg.n, cfg.d))
        return tomography_map(cert), cfg.d
    if cfg.map_name == "circle":
        return circle_pinned_map(cfg.n), 1
    raise SchemaError(f"unknown map {cfg.map_name!r}; choose from {_DISTORTION_MAPS}")


def cmd_distortion(cfg: RunConfig) -> int:
    map_under_test, dim = _make_distortion_map(cfg)
    sampler = sampler_for(map_under_test, cfg.n, cfg.seed, dim=dim)
    report = estimate_distortion(map_under_test, sampler, cfg.samples)
    if cfg.search > 0:
        report = adversarial_search(map_under_test, report, cfg.search, cfg.step)
    payload = report.to_dict()
    payload["search_iterations"] = cfg.search
    payload["ok"] = True
    if cfg.csv_path:
        rows = collect_ratio_pairs(map_under_test, sampler, cfg.samples)
        out = _resolve_out(cfg.csv_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["domain_distance", "image_distance"])
            writer.writerows(rows)
    _emit_report(cfg, payload)
    return 0


_COMMANDS = {
    "dims": cmd_dims,
    "hausdorff": cmd_hausdorff,
    "embed": cmd_embed,
    "embed-rd": cmd_embed_rd,
    "retract": cmd_retract,
    "tomo": cmd_tomo,
    "cone-check": cmd_cone_check,
    "distortion": cmd_distortion,
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="symprod", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="print the embedding dimension table")
    p.add_argument("--max", type=int, default=4)

    p = sub.add_parser("hausdorff", help="Hausdorff distance between two point-set files")
    p.add_argument("inputs", nargs=2, metavar=("A", "B"))

    p = sub.add_parser("embed", help="embed line sets into R^{m(n)}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("inputs", nargs=2, metavar=("IN", "OUT"))
    p.add_argument("--emit-pipeline", default=None, help="also write the pipeline description")

    p = sub.add_parser("embed-rd", help="embed card-<=n subsets of R^d")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("inputs", nargs=2, metavar=("IN", "OUT"))

    p = sub.add_parser("retract", help="retract card-<=n sets to card-<=k sets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("inputs", nargs=2, metavar=("IN", "OUT"))

    p = sub.add_parser("tomo", help="certify a projection family's separation constant")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--certify", action="store_true", help="kept for symmetry; certification always runs")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("cone-check", help="compare the Euclidean cone lift against the cone metric")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--points", type=int, default=24)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("distortion", help="estimate distortion with optional adversarial search")
    p.add_argument("--map", choices=_DISTORTION_MAPS, required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--search", type=int, default=0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig.from_args(args)
        return _COMMANDS[cfg.command](cfg)
    except InvariantViolationError as exc:
        sys.stderr.write(f"invariant violation: {exc}\n")
        return 2
    except SymprodError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
