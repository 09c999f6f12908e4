# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import logging
from pathlib import Path

import numpy as np
import pytest

from lindquad.errors import ExportError
from lindquad.export import Curve, Plot, Table, columns_table, draw_plot, emit_plot, export_trace, format_cell


def test_format_cell() -> None:
    assert format_cell(0.1) == "0.1"
    assert format_cell(1 / 3) == "0.333333333333333"
    assert format_cell(1e-20) == "1e-20"
    assert format_cell(True) == "true"
    assert format_cell(False) == "false"
    assert format_cell(3) == "3"
    assert format_cell("oscillatory") == "oscillatory"


def test_empty_table_has_a_header(tmp_path: Path) -> None:
    path = export_trace(Table(("t", "v"), []), tmp_path / "nested" / "empty.csv")

    assert path.read_text(encoding="utf-8") == "t,v\n"


def test_export_trace(tmp_path: Path) -> None:
    table = Table(("t", "v", "passed"), [(0.0, 0.5, True), (0.25, 1 / 3, False)])

    path = export_trace(table, tmp_path / "trace.csv")

    assert path.read_bytes() == b"t,v,passed\n0,0.5,true\n0.25,0.333333333333333,false\n"


def test_export_trace_rejects_ragged_rows(tmp_path: Path) -> None:
    with pytest.raises(ExportError):
        export_trace(Table(("t", "v"), [(0.0, 1.0), (1.0,)]), tmp_path / "ragged.csv")

    assert not (tmp_path / "ragged.csv").exists()


def test_columns_table() -> None:
    table = columns_table(["t", "v"], [[0.0, 1.0], np.array([2.0, 3.0])])

    assert table.columns == ("t", "v")
    assert table.rows == [(0.0, 2.0), (1.0, 3.0)]

    with pytest.raises(ExportError):
        columns_table(["t", "v"], [[0.0, 1.0], [2.0]])


def test_draw_plot() -> None:
    x = np.linspace(0.0, 1.0, 11)
    curves = [Curve(f"n_T = {n_T}", x, np.exp(-(1 + n_T) * x)) for n_T in (0.0, 0.1, 0.3)]

    axes = draw_plot(Plot("Speed", "t", "v", curves), log_scale=True).axes[0]

    assert [line.get_linestyle() for line in axes.lines] == ["-", "--", "-."]
    assert [line.get_label() for line in axes.lines] == ["n_T = 0.0", "n_T = 0.1", "n_T = 0.3"]
    assert axes.get_yscale() == "log"
    assert axes.get_title() == "Speed"
    np.testing.assert_array_equal(axes.lines[1].get_xdata(), x)


def test_emit_plot(tmp_path: Path) -> None:
    x = np.linspace(0.0, 1.0, 11)
    plot = Plot("Speed", "t", "v", [Curve("first", x, np.exp(-x))])

    path = emit_plot(plot, tmp_path / "plots" / "speed.svg")

    text = path.read_text(encoding="utf-8")
    assert text.lstrip().startswith("<?xml")
    assert "<svg" in text
    assert "<image" not in text
    assert emit_plot(plot, tmp_path / "again.svg").read_bytes() == path.read_bytes()


def test_constant_curve_is_a_flat_line(tmp_path: Path) -> None:
    x = np.linspace(0.0, 1.0, 5)

    axes = draw_plot(Plot("Flat", "t", "v", [Curve("flat", x, np.zeros(5))])).axes[0]

    low, high = axes.get_ylim()
    assert low < 0 < high
    assert len(set(axes.lines[0].get_ydata())) == 1
    assert emit_plot(Plot("Flat", "t", "v", [Curve("flat", x, np.zeros(5))]), tmp_path / "flat.svg").is_file()


def test_log_scale_falls_back_to_linear(caplog: pytest.LogCaptureFixture) -> None:
    x = np.linspace(0.0, 1.0, 5)
    plot = Plot("Signed", "t", "v", [Curve("signed", x, x - 0.5)])

    with caplog.at_level(logging.WARNING, logger="lindquad.export"):
        axes = draw_plot(plot, log_scale=True).axes[0]

    assert axes.get_yscale() == "linear"
    assert "falling back to a linear ordinate" in caplog.text


def test_plots_reject_bad_curves(tmp_path: Path) -> None:
    with pytest.raises(ExportError):
        emit_plot(Plot("Empty", "t", "v", [Curve("empty", np.array([]), np.array([]))]), tmp_path / "empty.svg")

    with pytest.raises(ExportError):
        draw_plot(Plot("Ragged", "t", "v", [Curve("ragged", np.zeros(3), np.zeros(2))]))

    with pytest.raises(ExportError):
        draw_plot(Plot("Infinite", "t", "v", [Curve("inf", np.zeros(2), np.array([1.0, np.inf]))]))

    assert not (tmp_path / "empty.svg").exists()
