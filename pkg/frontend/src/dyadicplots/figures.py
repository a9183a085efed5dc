"""Line charts for the two table kinds the dyadicint CLI produces.

Display-only: every number plotted comes straight from the CSV, nothing
is recomputed.  Axis limits are fixed from the data extents with a 5%
margin, so a given CSV always renders the same figure.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from matplotlib.figure import Figure

# Leading columns each kind must carry; --verify appends extra columns
# (oracle, abs_err) which are accepted and ignored.
_REQUIRED = {
    "li": ("x", "P", "value"),
    "elliptic": ("phi", "h", "P", "value"),
}


class SchemaError(Exception):
    """The CSV does not match the table contract for the figure kind."""


@dataclass(frozen=True)
class FigureSpec:
    input_path: str
    kind: str  # "li" or "elliptic"
    output_path: str
    # Within a curve family, every level count but the largest is drawn
    # dashed and the largest solid.  Turning this off draws all solid.
    dashed_for_smaller: bool = True

    def __post_init__(self) -> None:
        if self.kind not in _REQUIRED:
            raise SchemaError(f"unknown figure kind {self.kind!r}")


def load_rows(path: str, kind: str) -> list[dict]:
    """Read and type the rows for a figure kind.

    Raises SchemaError when the header does not start with the kind's
    required columns or the table has no data rows.
    """
    required = _REQUIRED.get(kind)
    if required is None:
        raise SchemaError(f"unknown figure kind {kind!r}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header "
                              f"{','.join(required)}") from None
        if tuple(header[: len(required)]) != required:
            raise SchemaError(
                f"{path}: header {','.join(header)!r} does not start with "
                f"{','.join(required)!r}")
        rows = []
        for raw in reader:
            if not raw:
                continue
            cells = dict(zip(header, raw))
            try:
                row = {name: float(cells[name]) for name in required}
            except (KeyError, ValueError) as exc:
                raise SchemaError(f"{path}: bad row {raw!r}") from exc
            row["P"] = int(row["P"])
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows under header "
                          f"{','.join(header)!r}")
    return rows


def _limits(values) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    margin = 0.05 * (hi - lo or 1.0)
    return lo - margin, hi + margin


def _style(level: int, largest: int, spec: FigureSpec) -> str:
    if spec.dashed_for_smaller and level < largest:
        return "--"
    return "-"


def _render_li(ax, rows, spec: FigureSpec) -> None:
    levels = sorted({row["P"] for row in rows})
    for level in levels:
        points = sorted((row["x"], row["value"])
                        for row in rows if row["P"] == level)
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.plot(xs, ys, _style(level, levels[-1], spec))
        ax.annotate(f"P={level}", (xs[-1], ys[-1]),
                    textcoords="offset points", xytext=(4, 0))
    ax.set_xlabel("x")
    ax.set_ylabel("value")
    ax.set_xlim(*_limits([row["x"] for row in rows]))


def _render_elliptic(ax, rows, spec: FigureSpec) -> None:
    phis = sorted({row["phi"] for row in rows})
    levels = sorted({row["P"] for row in rows})
    for phi in phis:
        for level in levels:
            points = sorted((row["h"], row["value"]) for row in rows
                            if row["phi"] == phi and row["P"] == level)
            if not points:
                continue
            ax.plot([p[0] for p in points], [p[1] for p in points],
                    _style(level, levels[-1], spec),
                    label=f"phi={phi:.4g}, P={level}")
    ax.set_xlabel("h")
    ax.set_ylabel("value")
    ax.set_xlim(*_limits([row["h"] for row in rows]))
    ax.legend(loc="upper left", fontsize="small")


def render(spec: FigureSpec) -> Figure:
    """Render the figure and write it to spec.output_path.

    Returns the Figure so callers can inspect the plot object model.
    """
    rows = load_rows(spec.input_path, spec.kind)
    fig = Figure(figsize=(8.0, 5.0))
    ax = fig.add_subplot(111)
    if spec.kind == "li":
        _render_li(ax, rows, spec)
    else:
        _render_elliptic(ax, rows, spec)
    ax.set_ylim(*_limits([row["value"] for row in rows]))
    fig.savefig(spec.output_path)
    return fig
