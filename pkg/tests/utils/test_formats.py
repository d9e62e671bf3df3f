#!/usr/bin/env python3
"""
Test Suite for File Formats
Tests reading and rendering of data, classes, edge lists and summaries
"""

from pathlib import Path

import numpy as np
import pytest

from core.time_course import TimeCourseMatrix
from penalty.classes import NodeClass, NodeClassification
from utils.errors import DataFormatError
from utils.formats import (
    detect_delimiter,
    edge_names,
    edges_to_indices,
    edges_to_matrix,
    read_adjacency,
    read_classes,
    read_edge_list,
    read_time_course,
    render_adjacency,
    render_classes,
    render_dot,
    render_edge_list,
    render_summary,
    render_time_course,
)


def write(tmp_path: Path, name: str, text: str) -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestTimeCourseFiles:
    """Test suite for time-course data files"""

    def test_comma_file(self, tmp_path: Path) -> None:
        """Test a comma-delimited file with missing cells"""
        path = write(tmp_path, "data.csv", "a,b\n1,NA\n2,\n3.5,4\n")
        X = read_time_course(path)
        assert X.names == ("a", "b")
        assert X.n == 2
        assert np.isnan(X.values[0, 1]) and np.isnan(X.values[1, 1])
        assert X.values[2, 0] == 3.5

    def test_tab_file(self, tmp_path: Path) -> None:
        """Test a tab-delimited file is detected from its header"""
        path = write(tmp_path, "data.tsv", "g1\tg2\n1\t2\n3\t4\n")
        X = read_time_course(path)
        assert X.names == ("g1", "g2")
        np.testing.assert_array_equal(X.values, [[1.0, 2.0], [3.0, 4.0]])

    def test_detect_delimiter(self) -> None:
        """Test tabs win over commas"""
        assert detect_delimiter("a\tb,c\n") == "\t"
        assert detect_delimiter("a,b\n") == ","

    def test_non_numeric_reports_line(self, tmp_path: Path) -> None:
        """Test a bad cell is reported with its file line"""
        path = write(tmp_path, "data.csv", "a,b\n1,2\n3,x\n")
        with pytest.raises(DataFormatError) as info:
            read_time_course(path)
        assert info.value.line == 3
        assert "x" in str(info.value)

    def test_duplicate_names(self, tmp_path: Path) -> None:
        """Test duplicated variable names are refused"""
        path = write(tmp_path, "data.csv", "a\ta\n1\t2\n3\t4\n")
        with pytest.raises(DataFormatError):
            read_time_course(path)

    def test_missing_and_empty_files(self, tmp_path: Path) -> None:
        """Test absent, empty and header-only files are refused"""
        with pytest.raises(DataFormatError):
            read_time_course(tmp_path / "absent.csv")
        with pytest.raises(DataFormatError):
            read_time_course(write(tmp_path, "empty.csv", ""))
        with pytest.raises(DataFormatError):
            read_time_course(write(tmp_path, "header.csv", "a,b\n"))

    def test_render_reads_back(self, tmp_path: Path) -> None:
        """Test rendered data reads back exactly"""
        values = np.array([[0.1, 1.0 / 3.0], [np.pi, -2.5e-8]])
        text = render_time_course(TimeCourseMatrix(values, ("x", "y")))
        X = read_time_course(write(tmp_path, "out.csv", text))
        np.testing.assert_array_equal(X.values, values)


class TestClassFiles:
    """Test suite for hub/leaf class files"""

    def test_with_header(self, tmp_path: Path) -> None:
        """Test a headed file and default leaves for unlisted names"""
        path = write(tmp_path, "classes.tsv", "name\tlabel\nb\thub\na\tLEAF\n")
        classes = read_classes(path, ("a", "b", "c"))
        assert classes.labels == (NodeClass.LEAF, NodeClass.HUB, NodeClass.LEAF)

    def test_without_header(self, tmp_path: Path) -> None:
        """Test a headerless comma file"""
        path = write(tmp_path, "classes.csv", "a,hub\nb,leaf\n")
        assert read_classes(path, ("a", "b")).hub_count == 1

    @pytest.mark.parametrize(
        "text", ["a\thub\nz\thub\n", "a\tcenter\n", "a\thub\na\tleaf\n", "a\n"]
    )
    def test_invalid_rows(self, tmp_path: Path, text: str) -> None:
        """Test unknown names, bad labels, repeats and missing columns are refused"""
        with pytest.raises(DataFormatError):
            read_classes(write(tmp_path, "classes.tsv", text), ("a", "b"))

    def test_render(self) -> None:
        """Test rendering lists every variable with its label"""
        classes = NodeClassification.from_hub_mask([True, False])
        assert render_classes(classes, ("a", "b")) == "name\tlabel\na\thub\nb\tleaf\n"


class TestEdgeFiles:
    """Test suite for edge lists and adjacency matrices"""

    def test_render_row_major(self) -> None:
        """Test edges are listed in row-major order with their weights"""
        A = np.array([[0.0, 0.5], [-1.0, 0.25]])
        text = render_edge_list(A, ("a", "b"))
        assert text.splitlines() == [
            "source\ttarget\tweight",
            "a\tb\t0.5",
            "b\ta\t-1",
            "b\tb\t0.25",
        ]

    def test_read_with_and_without_header(self, tmp_path: Path) -> None:
        """Test both headed and bare edge lists read the same"""
        headed = read_edge_list(write(tmp_path, "e1.tsv", "source\ttarget\nx\ty\ny\tz\n"))
        bare = read_edge_list(write(tmp_path, "e2.csv", "x,y,0.5\ny,z,\n"))
        assert list(headed["source"]) == list(bare["source"]) == ["x", "y"]
        assert np.isnan(headed["weight"]).all()
        assert bare["weight"].iloc[0] == 0.5
        assert edge_names(bare) == ["x", "y", "z"]

    def test_empty_edge_list(self, tmp_path: Path) -> None:
        """Test an empty file is an empty edge list"""
        assert read_edge_list(write(tmp_path, "none.tsv", "")).empty

    def test_indices_and_matrix(self, tmp_path: Path) -> None:
        """Test edges map onto the node universe"""
        frame = read_edge_list(write(tmp_path, "e.tsv", "a\tc\nc\tc\n"))
        names = ("a", "b", "c")
        assert edges_to_indices(frame, names) == {(0, 2), (2, 2)}
        A = edges_to_matrix(frame, names)
        assert A.sum() == 2.0 and A[0, 2] == 1.0
        with pytest.raises(DataFormatError):
            edges_to_indices(frame, ("a", "b"))

    def test_non_numeric_weight(self, tmp_path: Path) -> None:
        """Test a non-numeric weight is refused"""
        with pytest.raises(DataFormatError):
            read_edge_list(write(tmp_path, "e.tsv", "a\tb\theavy\n"))

    def test_adjacency_reads_back(self, tmp_path: Path) -> None:
        """Test a rendered adjacency matrix reads back with its names"""
        A = np.array([[0.0, 0.1], [2.0, 0.0]])
        path = write(tmp_path, "adj.csv", render_adjacency(A, ("u", "v")))
        values, names = read_adjacency(path)
        assert names == ("u", "v")
        np.testing.assert_array_equal(values, A)

    def test_adjacency_non_numeric_cell(self, tmp_path: Path) -> None:
        """Test a non-numeric weight is reported with its line"""
        path = write(tmp_path, "adj.csv", ",u,v\nu,0,0.1\nv,high,0\n")
        with pytest.raises(DataFormatError) as info:
            read_adjacency(path)
        assert info.value.line == 3
        assert info.value.exit_code == 2

    def test_adjacency_names_differ(self, tmp_path: Path) -> None:
        """Test row names must repeat the column names in order"""
        path = write(tmp_path, "adj.csv", ",u,v\nv,0,0.1\nu,1,0\n")
        with pytest.raises(DataFormatError) as info:
            read_adjacency(path)
        assert info.value.line == 2

    def test_adjacency_missing_file(self, tmp_path: Path) -> None:
        """Test a missing matrix file is a data error"""
        with pytest.raises(DataFormatError):
            read_adjacency(tmp_path / "absent.csv")


class TestSummaries:
    """Test suite for text summaries and graph descriptions"""

    def test_render_summary(self) -> None:
        """Test key-value lines keep insertion order"""
        text = render_summary({"penalty": "lasso", "rho": 0.5, "grid": [1, 2.0]})
        assert text == "penalty: lasso\nrho: 0.5\ngrid: 1 2\n"

    def test_render_dot(self) -> None:
        """Test DOT output marks hubs and colours edges by sign"""
        A = np.array([[0.0, 0.5], [-0.25, 0.0]])
        text = render_dot(A, ("a", "b"), hubs=[True, False])
        assert text.startswith("digraph network {")
        assert '"a" [shape=box];' in text
        assert '"b" [shape=ellipse];' in text
        assert '"a" -> "b" [label="0.5", color=red];' in text
        assert '"b" -> "a" [label="-0.25", color=blue];' in text
