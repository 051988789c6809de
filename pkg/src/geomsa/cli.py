"""Command-line front end: ``analyze``, ``barcode`` and ``generate``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Sequence

import jsonschema
import numpy as np

from . import __version__
from .geometry import BBox, bounding_box
from .models import FUNCTIONAL_MODELS, MODEL_NAMES, ModelSpec, generate_model
from .persistence import DEFAULT_EPSILON_MAX_QUANTILE, barcode_for_points, maxmin_subsample
from .render import render_barcode_svg, render_svg
from .sensitivity import MIN_POINTS, AnalysisConfig, AnalysisResult, _prepare, analyze_dataset
from .sobol import sobol_monte_carlo

log = logging.getLogger("geomsa")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4
RENDER_KINDS = ("complex", "reflection", "symdiff", "barcode")


class DataError(ValueError):
    """Bad or insufficient input data."""


class UsageError(ValueError):
    """Inconsistent command-line configuration."""


@dataclass(frozen=True)
class RunManifest:
    input: Path | None = None
    model: str | None = None
    n: int = 1000
    seed: int = 0
    out_dir: Path = Path("geomsa-out")
    output_column: str = "y"
    input_columns: tuple[str, ...] | None = None  # None means every other column
    epsilon: float | None = None
    quantile: float = 0.05
    normalize: bool = True
    render: frozenset[str] = field(default_factory=frozenset)
    sobol_check: int | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if (self.input is None) == (self.model is None):
            raise UsageError("give exactly one of --input or --model")
        if self.input_columns is not None:
            if self.output_column in self.input_columns:
                raise UsageError("output column cannot also be an input")
            if not self.input_columns:
                raise UsageError("at least one input column is required")
        bad = set(self.render) - set(RENDER_KINDS)
        if bad:
            raise UsageError(f"unknown render kinds: {', '.join(sorted(bad))}")
        if self.sobol_check is not None and self.model not in FUNCTIONAL_MODELS:
            raise UsageError("--sobol-check needs a built-in model with a closed form: " + ", ".join(FUNCTIONAL_MODELS))
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        try:
            self.config()
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def config(self) -> AnalysisConfig:
        # a fixed epsilon takes precedence over the quantile
        if self.epsilon is not None:
            return AnalysisConfig(epsilon=self.epsilon, quantile=None, normalize=self.normalize, seed=self.seed)
        return AnalysisConfig(quantile=self.quantile, normalize=self.normalize, seed=self.seed)


def ingest_csv(path, output_column: str, input_columns: Sequence[str] | None = None):
    """Read a header-first CSV into ``(inputs, output, names, dropped)``.

    Rows with a missing or non-numeric cell in any used column are dropped
    and counted.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        if output_column not in header:
            raise DataError(f"output column {output_column!r} not in header {header}")
        if input_columns is None:
            names = [h for h in header if h != output_column]
        else:
            missing = [c for c in input_columns if c not in header]
            if missing:
                raise DataError(f"input columns not in header: {missing}")
            names = list(input_columns)
        if not names:
            raise DataError("no input columns")
        cols = [header.index(c) for c in names]
        ycol = header.index(output_column)
        rows, dropped = [], 0
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            try:
                vals = [float(row[c]) for c in cols] + [float(row[ycol])]
            except (ValueError, IndexError):
                dropped += 1
                continue
            if not all(math.isfinite(v) for v in vals):
                dropped += 1
                continue
            rows.append(vals)
    if dropped:
        log.warning("dropped %d malformed rows from %s", dropped, path)
    if len(rows) < MIN_POINTS:
        raise DataError(f"only {len(rows)} usable rows; need at least {MIN_POINTS}")
    arr = np.asarray(rows, dtype=float)
    return arr[:, :-1], arr[:, -1], names, dropped


def write_csv(path, inputs: np.ndarray, output: np.ndarray, names: Sequence[str], output_column: str = "y"):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*names, output_column])
        for xs, y in zip(inputs, output):
            w.writerow([repr(float(v)) for v in xs] + [repr(float(y))])


def dumps_report(doc) -> str:
    """JSON with every float written to 17 significant digits."""

    def enc(v, indent):
        pad = "  " * (indent + 1)
        end = "  " * indent
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {enc(val, indent + 1)}" for k, val in v.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(v, (list, tuple)):
            if not v:
                return "[]"
            return "[\n" + ",\n".join(pad + enc(x, indent + 1) for x in v) + "\n" + end + "]"
        if isinstance(v, bool) or v is None:
            return json.dumps(v)
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        if isinstance(v, (float, np.floating)):
            if not math.isfinite(v):
                raise ValueError("non-finite number in report")
            return format(float(v), ".17g")
        return json.dumps(v)

    return enc(doc, 0) + "\n"


def report_schema() -> dict:
    text = resources.files("geomsa").joinpath("schemas/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def format_table(results: Sequence[AnalysisResult]) -> str:
    head = f"{'Variable':<10}{'eps':>8}{'Area(V)':>10}{'Area(B)':>10}{'rho_Geom':>10}{'S_Geom':>10}"
    with_sobol = any(r.sobol is not None for r in results)
    if with_sobol:
        head += f"{'Sobol':>10}"
    lines = [head, "-" * len(head)]
    for r in results:
        line = (
            f"{r.variable:<10}{r.epsilon:>8.2f}{r.area_v:>10.2f}{r.area_box:>10.2f}"
            f"{r.rho_geom:>10.2f}{r.s_geom:>10.2f}"
        )
        if with_sobol:
            line += f"{r.sobol:>10.2f}" if r.sobol is not None else f"{'-':>10}"
        lines.append(line)
    return "\n".join(lines)


def _load(m: RunManifest):
    if m.model is not None:
        data = generate_model(ModelSpec(m.model, m.n, m.seed))
        return data.inputs, data.output, list(data.names), 0, f"model:{m.model}"
    x, y, names, dropped = ingest_csv(m.input, m.output_column, m.input_columns)
    return x, y, names, dropped, str(m.input)


class _Outputs:
    """Collects output files and commits them atomically (temp file + rename)."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.files: dict[str, str] = {}

    def add(self, name: str, text: str) -> None:
        self.files[name] = text

    def commit(self) -> list[Path]:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        try:
            for name, text in self.files.items():
                target = self.out_dir / name
                fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=f".{name}.", suffix=".tmp")
                try:
                    with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                        fh.write(text)
                    os.replace(tmp, target)
                except BaseException:
                    if os.path.exists(tmp):
                        os.unlink(tmp)
                    raise
                written.append(target)
        except BaseException:
            for p in written:
                p.unlink(missing_ok=True)
            raise
        return written


def _safe_name(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name) or "var"


def run(m: RunManifest) -> int:
    """Analyze every input column, write ``report.json`` and requested SVGs."""
    try:
        x, y, names, dropped, source = _load(m)
        cfg = m.config()
        need_geometry = bool(set(m.render) & {"complex", "reflection", "symdiff"})
        results = analyze_dataset(x, y, cfg, names, workers=m.workers, keep_geometry=need_geometry)
        outputs = _Outputs(m.out_dir)
        if "barcode" in m.render:
            results = [_with_barcode(r, x[:, k], y, cfg, outputs) for k, r in enumerate(results)]
        if m.sobol_check is not None:
            est = sobol_monte_carlo(ModelSpec(m.model, m.n, m.seed), m.sobol_check)
            results = [_replace_sobol(r, s) for r, s in zip(results, est.first_order)]
        for r in results:
            _render(r, m, outputs)
        doc = {
            "tool": "geomsa",
            "version": __version__,
            "provenance": {
                "source": source,
                "model": m.model,
                "n": int(len(y)),
                "seed": m.seed,
                "quantile": cfg.quantile,
                "epsilon": cfg.epsilon,
                "normalize": m.normalize,
                "output_column": m.output_column if m.model is None else "y",
                "rows_dropped": dropped,
                "sobol_n_mc": m.sobol_check,
            },
            "results": [r.to_dict() for r in results],
        }
        jsonschema.validate(doc, report_schema())
        outputs.add("report.json", dumps_report(doc))
        outputs.commit()
    except UsageError as exc:
        print(f"geomsa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError) as exc:
        print(f"geomsa: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - geometry/numerics failures map to one exit code
        print(f"geomsa: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(format_table(results))
    return EXIT_OK


def _replace_sobol(r: AnalysisResult, s: float) -> AnalysisResult:
    return replace(r, sobol=float(s))


def _with_barcode(r: AnalysisResult, xs, ys, cfg: AnalysisConfig, outputs: _Outputs) -> AnalysisResult:
    x, y = _prepare(xs, ys, cfg.normalize)
    pts = np.column_stack([x, y])
    sub = maxmin_subsample(pts, cfg.barcode_max_points)
    barcode, eps_max = barcode_for_points(pts[sub])
    outputs.add(f"{_safe_name(r.variable)}_barcode.svg", render_barcode_svg(barcode, f"{r.variable} barcode", eps_max))
    return replace(r, barcode=barcode)


def _render(r: AnalysisResult, m: RunManifest, outputs: _Outputs) -> None:
    g = r.geometry
    if g is None:
        return
    box = _plot_box(g, m.normalize)
    title = f"{r.variable}: S_Geom={r.s_geom:.2f} rho_Geom={r.rho_geom:.2f} eps={r.epsilon:.3f}"
    name = _safe_name(r.variable)
    if "complex" in m.render or "reflection" in m.render:
        layers = [("complex", g.complex)]
        if "reflection" in m.render:
            layers.append(("reflection", g.reflection))
        outputs.add(f"{name}_complex.svg", render_svg(title, layers, box, mid_line=g.y_mid, xlabel=r.variable))
    if "symdiff" in m.render:
        outputs.add(
            f"{name}_symdiff.svg",
            render_svg(title, [("symdiff", g.symdiff)], box, mid_line=g.y_mid, xlabel=r.variable),
        )


def _plot_box(g, normalize: bool):
    if normalize:
        return BBox(0.0, 1.0, 0.0, 1.0)
    b = bounding_box(g.points)
    return BBox(b.x_min, b.x_max, b.y_min, b.y_max)


def run_barcode(
    source_input: Path | None,
    model: str | None,
    n: int,
    seed: int,
    out_dir: Path,
    output_column: str = "y",
    epsilon_max: float | None = None,
    max_points: int = 300,
    normalize: bool = True,
) -> int:
    try:
        m = RunManifest(input=source_input, model=model, n=n, seed=seed, out_dir=out_dir, output_column=output_column)
        x, y, names, _, source = _load(m)
        outputs = _Outputs(out_dir)
        entries = []
        for k, name in enumerate(names):
            xs, ys = _prepare(x[:, k], y, normalize)
            pts = np.column_stack([xs, ys])
            sub = maxmin_subsample(pts, max_points)
            barcode, eps = barcode_for_points(pts[sub], epsilon_max)
            entries.append(
                {
                    "variable": name,
                    "epsilon_max": eps,
                    "n_points": int(len(sub)),
                    "intervals": barcode.to_json(),
                }
            )
            outputs.add(f"{_safe_name(name)}_barcode.svg", render_barcode_svg(barcode, f"{name} barcode", eps))
            h1 = sorted(barcode.dimension(1), key=lambda iv: -iv.persistence)
            top = h1[0] if h1 else None
            desc = f"longest H1 bar [{top.birth:.3f}, {top.death:.3f})" if top else "no H1 bars"
            print(f"{name}: {len(barcode.dimension(0))} H0 bars, {len(h1)} H1 bars, {desc}")
        doc = {"source": source, "seed": seed, "epsilon_max_quantile": DEFAULT_EPSILON_MAX_QUANTILE, "variables": entries}
        outputs.add("barcode.json", dumps_report(doc))
        outputs.commit()
    except UsageError as exc:
        print(f"geomsa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError) as exc:
        print(f"geomsa: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        print(f"geomsa: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _source_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path, help="CSV file with a header row")
    src.add_argument("--model", choices=MODEL_NAMES, help="built-in benchmark model")
    p.add_argument("--n", type=int, default=1000, help="sample size for --model (default 1000)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-col", default="y", help="output column name (default y)")
    p.add_argument("--out-dir", type=Path, default=Path("geomsa-out"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geomsa", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="geometric sensitivity indices for every input column")
    _source_args(a)
    a.add_argument("--input-cols", help="comma-separated input columns (default: all others)")
    a.add_argument("--epsilon", type=float, help="fixed radius; overrides --quantile")
    a.add_argument("--quantile", type=float, default=0.05, help="distance quantile for the radius (default 0.05)")
    a.add_argument("--no-normalize", action="store_true", help="skip rescaling to the unit square")
    a.add_argument("--render", default="", help=f"comma list from {','.join(RENDER_KINDS)}")
    a.add_argument("--sobol-check", type=int, metavar="N_MC", help="add Monte Carlo Sobol indices")
    a.add_argument("--workers", type=int, default=1)

    b = sub.add_parser("barcode", help="H0/H1 persistence barcodes per input column")
    _source_args(b)
    b.add_argument("--epsilon-max", type=float, help="filtration cutoff (default: 20%% distance quantile)")
    b.add_argument("--max-points", type=int, default=300, help="farthest-point subsample size")
    b.add_argument("--no-normalize", action="store_true")

    g = sub.add_parser("generate", help="write a built-in model sample to CSV")
    g.add_argument("--model", choices=MODEL_NAMES, required=True)
    g.add_argument("--n", type=int, default=1000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "generate":
            data = generate_model(ModelSpec(args.model, args.n, args.seed))
            write_csv(args.out, data.inputs, data.output, data.names)
            return EXIT_OK
        if args.command == "barcode":
            return run_barcode(
                args.input, args.model, args.n, args.seed, args.out_dir, args.output_col,
                args.epsilon_max, args.max_points, not args.no_normalize,
            )
        render = frozenset(s.strip() for s in args.render.split(",") if s.strip())
        cols = tuple(c.strip() for c in args.input_cols.split(",")) if args.input_cols else None
        manifest = RunManifest(
            input=args.input,
            model=args.model,
            n=args.n,
            seed=args.seed,
            out_dir=args.out_dir,
            output_column=args.output_col,
            input_columns=cols,
            epsilon=args.epsilon,
            quantile=args.quantile,
            normalize=not args.no_normalize,
            render=render,
            sobol_check=args.sobol_check,
            workers=args.workers,
        )
    except UsageError as exc:
        print(f"geomsa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"geomsa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(manifest)


if __name__ == "__main__":
    sys.exit(main())
