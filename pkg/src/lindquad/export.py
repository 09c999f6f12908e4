# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Write the results of the jobs as CSV tables and self-contained SVG plots."""

import csv
import logging
from collections.abc import Sequence
from itertools import cycle
from pathlib import Path
from typing import Final, NamedTuple

import matplotlib
import numpy as np
import numpy.typing as npt
from matplotlib.figure import Figure

from . import APP_NAME_LOWER
from .errors import ExportError

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS: Final[int] = 15

# Successive curves are solid, dashed and dot-dashed
LINE_STYLES: Final[tuple[str, ...]] = ("-", "--", "-.")
FIGURE_SIZE: Final[tuple[float, float]] = (6.4, 4.2)

Cell = str | int | float | bool


class Table(NamedTuple):
    """Tabular results, one tuple per row.

    Attributes:
        columns: The header.
        rows: The data, every row as long as the header.
    """

    columns: tuple[str, ...]
    rows: list[tuple[Cell, ...]]


class Curve(NamedTuple):
    label: str
    x: npt.NDArray[np.float64]
    y: npt.NDArray[np.float64]


class Plot(NamedTuple):
    """A set of curves sharing their axes.

    Attributes:
        title: The title drawn above the axes.
        x_label: The label of the abscissa.
        y_label: The label of the ordinate.
        curves: The curves, styled in order with `LINE_STYLES`.
    """

    title: str
    x_label: str
    y_label: str
    curves: list[Curve]


def format_cell(value: Cell) -> str:
    """Render a cell, floats with 15 significant digits."""

    if isinstance(value, bool):
        return "true" if value else "false"

    if isinstance(value, float):
        return format(value, f".{SIGNIFICANT_DIGITS}g")

    return str(value)


def export_trace(table: Table, path: Path) -> Path:
    """Write a table as a UTF-8 CSV file with a header row and `\\n` line endings.

    Args:
        table: The table to write, an empty one gives a header only file.
        path: The destination file, its parent directories are created.

    Returns:
        The path written.
    """

    width = len(table.columns)
    for k, row in enumerate(table.rows):
        if len(row) != width:
            raise ExportError(f"Row {k} of {path.name} has {len(row)} cell(s) for {width} column(s)")

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(table.columns)
            writer.writerows([format_cell(cell) for cell in row] for row in table.rows)
    except OSError as e:
        raise ExportError(f"Could not write '{path}': {e}") from e

    logger.debug(f"Wrote {len(table.rows)} row(s) to '{path}'")

    return path


def draw_plot(plot: Plot, log_scale: bool = False) -> Figure:
    """Draw the curves of a plot on a new figure.

    Args:
        plot: The curves and labels, with at least one point.
        log_scale: If the ordinate should be logarithmic, ignored when some value is not positive.

    Returns:
        The figure, not attached to any pyplot state.
    """

    curves = [curve for curve in plot.curves if len(curve.x) > 0]
    if not curves:
        raise ExportError(f"Nothing to plot in '{plot.title}'")

    for curve in curves:
        if curve.x.shape != curve.y.shape:
            raise ExportError(f"The curve '{curve.label}' has {curve.x.shape} abscissas and {curve.y.shape} ordinates")

        if not (np.all(np.isfinite(curve.x)) and np.all(np.isfinite(curve.y))):
            raise ExportError(f"The curve '{curve.label}' of '{plot.title}' has non finite values")

    if log_scale and any(np.any(curve.y <= 0) for curve in curves):
        logger.warning(f"Non positive values in '{plot.title}', falling back to a linear ordinate")
        log_scale = False

    figure = Figure(figsize=FIGURE_SIZE, layout="constrained")
    axes = figure.add_subplot()

    for curve, style in zip(curves, cycle(LINE_STYLES)):
        axes.plot(curve.x, curve.y, linestyle=style, label=curve.label)

    if log_scale:
        axes.set_yscale("log")

    axes.set_title(plot.title)
    axes.set_xlabel(plot.x_label)
    axes.set_ylabel(plot.y_label)
    axes.grid(True)
    axes.legend()

    return figure


def emit_plot(plot: Plot, path: Path, log_scale: bool = False) -> Path:
    """Draw the curves of a plot in a self-contained SVG file.

    Args:
        plot: The curves and labels, with at least one point.
        path: The destination file, its parent directories are created.
        log_scale: If the ordinate should be logarithmic, ignored when some value is not positive.

    Returns:
        The path written.
    """

    figure = draw_plot(plot, log_scale)

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        # Fixed element ids and no date, so identical plots give identical files
        with matplotlib.rc_context({"svg.hashsalt": APP_NAME_LOWER}):
            figure.savefig(path, format="svg", metadata={"Date": None})
    except OSError as e:
        raise ExportError(f"Could not write '{path}': {e}") from e

    logger.debug(f"Plotted {len(figure.axes[0].lines)} curve(s) to '{path}'")

    return path


def columns_table(columns: Sequence[str], values: Sequence[npt.ArrayLike]) -> Table:
    """Build a table from equally long columns of numbers."""

    arrays = [np.asarray(column, dtype=np.float64) for column in values]
    if len({len(array) for array in arrays}) > 1:
        raise ExportError(f"The columns {list(columns)} have different lengths")

    length = len(arrays[0]) if arrays else 0
    return Table(tuple(columns), [tuple(float(array[k]) for array in arrays) for k in range(length)])

