"""Command-line front end.

    trispec table --n N [--format csv|json] [--out PATH]
    trispec grids --n N --kind newmap|duffy [--out PATH] [--svg [PATH]]
    trispec solve --problem NAME --n N --basis modal|nodal [--dump-matrices DIR]
    trispec convergence --problem NAME --n-list a,b,c --basis modal|nodal [--out PATH] [--svg [PATH]]

Data goes to stdout (or --out); diagnostics go to stderr. Argument errors
exit with status 2, numerical failures with status 1.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .basis import BasisKind
from .exceptions import TrispecError
from .mapping import GridKind, mapped_lgl_grid
from .problems import PROBLEMS
from .singular import build_table
from .solver import assemble_system, convergence_study, error_norms, solve


def _fmt(v: float) -> str:
    return "nan" if math.isnan(v) else format(float(v), ".17g")


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _n_list(text: str) -> list[int]:
    items = [_positive_int(t.strip()) for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("empty N list")
    if any(b <= a for a, b in zip(items, items[1:])):
        raise argparse.ArgumentTypeError(f"N list must be strictly ascending: {text}")
    return items


def _write(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _csv_rows(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def table_text(n: int, fmt: str) -> str:
    values = build_table(n).values
    if fmt == "json":
        rows = [[None if math.isnan(v) else float(v) for v in row] for row in values]
        return json.dumps({"n_max": n, "values": rows}) + "\n"
    return _csv_rows([_fmt(v) for v in row] for row in values)


def grid_text(n: int, kind: str) -> str:
    pts = mapped_lgl_grid(n, kind)
    return _csv_rows([("x", "y")] + [(_fmt(x), _fmt(y)) for x, y in pts])


def _svg(path: Path, draw):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(4, 4))
    draw(ax)
    with matplotlib.rc_context({"svg.hashsalt": "trispec"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _cmd_table(args) -> int:
    _write(table_text(args.n, args.format), args.out)
    return 0


def _cmd_grids(args) -> int:
    _write(grid_text(args.n, args.kind), args.out)
    if args.svg:
        pts = mapped_lgl_grid(args.n, args.kind)

        def draw(ax):
            ax.plot([0, 1, 0, 0], [0, 0, 1, 0], color="k", lw=0.8)
            ax.scatter(pts[:, 0], pts[:, 1], s=4)
            ax.set_aspect("equal")
            ax.set_title(f"{args.kind}, N = {args.n}")

        _svg(_svg_path(args, f"grid_{args.kind}_{args.n}"), draw)
    return 0


def _dump(path: Path, mat):
    mat = np.atleast_2d(mat)
    path.write_text(_csv_rows([_fmt(v) for v in row] for row in mat))


def _cmd_solve(args) -> int:
    problem = PROBLEMS[args.problem]()
    system = assemble_system(problem, args.n, args.basis)
    sol = solve(system)
    if args.dump_matrices:
        d = args.dump_matrices
        d.mkdir(parents=True, exist_ok=True)
        _dump(d / "mass.csv", system.mass)
        _dump(d / "stiffness.csv", system.stiffness)
        _dump(d / "rhs.csv", system.rhs[:, None])
        _dump(d / "mask.csv", system.dirichlet_mask.astype(int)[:, None])
        _dump(d / "coeffs.csv", sol.coeffs[:, None])
    rows = [("N", "basis", "residual", "l2", "linf")]
    l2 = linf = float("nan")
    if problem.exact is not None:
        l2, linf = error_norms(sol, problem.exact)
    rows.append((args.n, args.basis, _fmt(sol.residual), _fmt(l2), _fmt(linf)))
    sys.stdout.write(_csv_rows(rows))
    return 0


def _cmd_convergence(args) -> int:
    problem = PROBLEMS[args.problem]()
    report = convergence_study(problem, args.n_list, args.basis, timings=not args.no_timings)
    _write(report.to_json() if args.format == "json" else report.to_csv(), args.out)
    if args.svg:
        n = [r.N for r in report.rows]

        def draw(ax):
            ax.loglog(n, [r.l2 for r in report.rows], "o-", label="L2")
            ax.loglog(n, [r.linf for r in report.rows], "s-", label="Linf")
            ax.set_xlabel("N")
            ax.set_ylabel("error")
            ax.legend()

        _svg(_svg_path(args, f"convergence_{args.problem}"), draw)
    return 0


_SVG_ARG = dict(
    nargs="?",
    const=True,
    type=Path,
    metavar="PATH",
    help="also write an SVG plot (default path: --out with .svg suffix)",
)


def _svg_path(args, stem: str) -> Path:
    if isinstance(args.svg, Path):
        return args.svg
    return args.out.with_suffix(".svg") if args.out else Path(stem + ".svg")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trispec", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="dump the singular integral table")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("grids", help="mapped LGL grid on the reference triangle")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--kind", choices=[k.value for k in GridKind], default="newmap")
    p.add_argument("--out", type=Path)
    p.add_argument("--svg", **_SVG_ARG)
    p.set_defaults(func=_cmd_grids)

    basis_choices = [k.value for k in BasisKind]
    p = sub.add_parser("solve", help="solve one model problem")
    p.add_argument("--problem", choices=sorted(PROBLEMS), required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--basis", choices=basis_choices, default="modal")
    p.add_argument("--dump-matrices", type=Path, metavar="DIR")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("convergence", help="error table over several N")
    p.add_argument("--problem", choices=sorted(PROBLEMS), required=True)
    p.add_argument("--n-list", type=_n_list, required=True)
    p.add_argument("--basis", choices=basis_choices, default="modal")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path)
    p.add_argument("--svg", **_SVG_ARG)
    p.add_argument("--no-timings", action="store_true", help="write 0 for timings (byte-stable output)")
    p.set_defaults(func=_cmd_convergence)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TrispecError, np.linalg.LinAlgError) as exc:
        print(f"trispec: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"trispec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
