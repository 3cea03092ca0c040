from datetime import datetime, timezone

import pytest
from openpyxl import load_workbook

from rackbench.errors import InputParseError, OrderOutOfRangeError
from rackbench.models import CellStatus, Table1, Table1Cell
from rackbench.utils.algebra import RightQuasigroup
from rackbench.utils.excel import generate_csv_report, generate_excel_report, render_table1, table1_dataframe
from rackbench.utils.graphs import Digraph, cycle_graph, star_graph
from rackbench.utils.io import (
    family_graph,
    graph_from_json,
    labeled_from_json,
    load_json,
    load_labeled,
    magma_from_json,
    parse_subset,
    perm_from_json,
    perm_group_from_json,
    render_edges,
    render_magma,
    render_perm,
)
from rackbench.utils.perm import Perm


def test_load_json_inline_and_file(tmp_path):
    assert load_json('{"a": 1}') == {"a": 1}
    path = tmp_path / "g.json"
    path.write_text('{"order": 2}')
    assert load_json(path) == {"order": 2}
    with pytest.raises(InputParseError):
        load_json(tmp_path / "missing.json")
    with pytest.raises(InputParseError):
        load_json("[1, 2")


def test_magma_shapes_agree(ex_3quandle):
    by_rows = magma_from_json({"order": 3, "right_mult": [[0, 2, 1], [2, 1, 0], [1, 0, 2]]})
    by_cycles = magma_from_json({"order": 3, "cycles": [[[2, 3]], [[1, 3]], [[1, 2]]], "one_based": True})
    by_table = magma_from_json({"table": [[0, 2, 1], [2, 1, 0], [1, 0, 2]]})
    for m in (by_rows, by_cycles, by_table):
        assert isinstance(m, RightQuasigroup)
        assert m.right_mult == ex_3quandle.right_mult


@pytest.mark.parametrize("data", [
    [1, 2],
    {"order": 3, "right_mult": [[0, 1], [1, 0]]},
    {"table": [[0, 1], [1]]},
    {"order": 2, "cycles": [[[1, 3]], []], "one_based": True},
    {"right_mult": [[0.9, 1.7], [1, 0]]},
    {"order": 2, "right_mult": [[True, False], [1, 0]]},
    {"table": [[0, 1.0], [1, 0]]},
    {"order": 2, "right_mult": [["0", "1"], [1, 0]]},
    {"something": "else"},
])
def test_magma_errors(data):
    with pytest.raises(InputParseError):
        magma_from_json(data)


def test_graph_from_json():
    g = graph_from_json({"order": 3, "edges": [[0, 1], [2, 1]]})
    assert g.edges == frozenset({(0, 1), (1, 2)})
    d = graph_from_json({"kind": "digraph", "order": 2, "edges": [[1, 1]]})
    assert isinstance(d, Digraph)
    with pytest.raises(InputParseError):
        graph_from_json({"order": 2, "edges": [[0, 0]]})
    with pytest.raises(InputParseError):
        graph_from_json({"edges": []})


def test_labeled_from_json():
    g = labeled_from_json({"order": 2, "labels": [1], "edges": [[0, 1, 1], [1, 1, 0]]})
    assert g.labels == frozenset({1})
    with pytest.raises(InputParseError):
        labeled_from_json({"order": 2, "labels": [5]})
    with pytest.raises(InputParseError):
        labeled_from_json({"labels": []})
    with pytest.raises(InputParseError):
        labeled_from_json({"order": 2, "edges": [[0, 0.5, 1]]})
    with pytest.raises(InputParseError):
        labeled_from_json({"order": 2.0, "edges": []})


def test_load_labeled_reads_text_files(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("0 --0--> 0\n")
    assert load_labeled(str(path)).edges == frozenset({(0, 0, 0)})
    with pytest.raises(InputParseError):
        load_labeled(str(tmp_path / "missing.txt"))


def test_perm_codecs():
    assert perm_from_json([1, 2, 0]) == Perm(images=(1, 2, 0))
    with pytest.raises(InputParseError):
        perm_from_json([0, 0])
    with pytest.raises(InputParseError):
        perm_from_json(3)
    group = perm_group_from_json({"degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]})
    assert group.order() == 6
    with pytest.raises(InputParseError):
        perm_group_from_json({"degree": 2, "generators": [[1, 2, 0]]})


def test_family_graph():
    assert family_graph("star", 4) == star_graph(3)
    assert family_graph("cycle", 5) == cycle_graph(5)
    assert family_graph("complete-digraph", 2).directed
    with pytest.raises(InputParseError):
        family_graph("wheel", 5)
    with pytest.raises(OrderOutOfRangeError):
        family_graph("path", 1)


@pytest.mark.parametrize("text,expected", [
    ("0,2", [0, 2]),
    ("[2, 0, 2]", [0, 2]),
    ("1 3", [1, 3]),
    ("", []),
])
def test_parse_subset(text, expected):
    assert parse_subset(text) == expected


def test_parse_subset_rejects_junk():
    with pytest.raises(InputParseError):
        parse_subset("a,b")


def test_rendering_is_one_based_unless_asked(ex_not):
    assert render_perm(Perm(images=(1, 0, 2))) == "(12)"
    assert render_perm(Perm(images=(1, 0, 2)), zero_based=True) == "(01)"
    assert render_magma(ex_not).splitlines()[0] == "R_1 = id"
    assert render_edges(cycle_graph(3)) == "1 -- 2\n1 -- 3\n2 -- 3"


def _small_table():
    return Table1(columns=3, rows={
        "complete": [
            Table1Cell(family="complete", n=0, status=CellStatus.OK, mu_rack=1, mu_qnd=1),
            Table1Cell(family="complete", n=1, status=CellStatus.OK, mu_rack=1, mu_qnd=1),
            Table1Cell(family="complete", n=2, status=CellStatus.UNKNOWN),
        ],
        "cycle": [Table1Cell(family="cycle", n=n, status=CellStatus.UNDEFINED) for n in range(3)],
    })


def test_table1_dataframe_layout():
    df = table1_dataframe(_small_table())
    assert list(df.index) == ["K_n", "C_n"]
    assert list(df.columns) == ["n=0", "n=1", "n=2"]
    assert df.loc["K_n", "n=2"] == "?"
    assert df.loc["C_n", "n=0"] == "-"
    assert render_table1(_small_table()).endswith("\n")


def test_csv_report():
    lines = generate_csv_report(_small_table()).splitlines()
    assert lines[0] == "family,n=0,n=1,n=2"
    assert lines[1] == 'K_n,"(1,1)","(1,1)",?'


def test_excel_report_summary():
    buffer = generate_excel_report(_small_table(), datetime(2024, 6, 1, tzinfo=timezone.utc))
    workbook = load_workbook(buffer)
    summary = workbook["Summary"]
    assert summary["B3"].value == "2024-06-01 00:00:00 UTC"
    assert summary["B5"].value == 2
    assert summary["B6"].value == 1
    assert summary["B7"].value == 3
    assert workbook["Table 1"]["D2"].fill.start_color.rgb.endswith("FFA500")
