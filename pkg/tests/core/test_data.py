"""Tests for `OrdinalFunctionalDataset` and its CSV format."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os

import numpy as np
import pytest

from OPFRM.core.data import (
    OrdinalFunctionalDataset,
    read_grid,
    load_dataset,
    write_dataset,
)
from OPFRM.core.exceptions import DatasetFormatError


def _write(path, text):
    with open(path, "w") as f:
        f.write(text)

    return str(path)


def test_dataset_shapes(tiny_data):

    assert tiny_data.N == 6
    assert tiny_data.T == 8
    assert tiny_data.P == 1
    assert tiny_data.n_levels == 4


def test_dataset_is_read_only(tiny_data):

    with pytest.raises(ValueError):
        tiny_data.outcomes[0, 0] = 3


@pytest.mark.parametrize(
    "outcomes, covariates, grid, L",
    (
        (np.zeros(4, dtype=int), np.zeros((4, 1)), np.arange(4), 2),
        (np.zeros((2, 3), dtype=int), np.zeros((3, 1)), np.arange(3), 2),
        (np.zeros((2, 3), dtype=int), np.zeros((2, 1)), np.arange(4), 2),
        (np.zeros((2, 3), dtype=int), np.zeros((2, 1)), [0, 2, 1], 2),
        (np.zeros((2, 3), dtype=int), np.zeros((2, 1)), np.arange(3), 1),
        (np.full((2, 3), 4), np.zeros((2, 1)), np.arange(3), 3),
        (np.full((2, 3), 0.5), np.zeros((2, 1)), np.arange(3), 3),
    ),
    ids=[
        "1d_outcomes",
        "row_mismatch",
        "grid_length",
        "grid_order",
        "one_level",
        "level_out_of_range",
        "non_integer",
    ],
)
def test_dataset_validation(outcomes, covariates, grid, L):

    with pytest.raises(ValueError):
        OrdinalFunctionalDataset(outcomes, covariates, grid, L)


def test_subset_keeps_levels(tiny_data):

    sub = tiny_data.subset([0, 2])
    assert sub.N == 2
    assert sub.n_levels == 4
    assert np.array_equal(sub.outcomes[1], tiny_data.outcomes[2])


def test_centered_skips_indicators():

    x = np.array([[1.0, 2.0], [0.0, 4.0], [1.0, 6.0]])
    data = OrdinalFunctionalDataset(np.zeros((3, 2), int), x, [0, 1], 2)
    centered = data.centered()

    assert np.array_equal(centered.covariates[:, 0], x[:, 0])
    assert centered.covariates[:, 1] == pytest.approx([-2.0, 0.0, 2.0])


def test_level_counts(tiny_data):

    counts = tiny_data.level_counts()
    assert counts.sum() == tiny_data.N * tiny_data.T
    assert counts.size == 4


def test_roundtrip(tmp_path, small_data):

    paths = [os.path.join(tmp_path, f) for f in ("y.csv", "x.csv", "g.csv")]
    write_dataset(small_data, *paths)
    loaded = load_dataset(*paths, n_levels=small_data.n_levels)

    assert loaded.equals(small_data)


def test_load_default_grid(tmp_path):

    y = _write(tmp_path / "y.csv", "0,1,2\n2,1,0\n")
    x = _write(tmp_path / "x.csv", "0.5\n-0.5\n")
    data = load_dataset(y, x)

    assert np.array_equal(data.time_grid, [1.0, 2.0, 3.0])
    assert data.n_levels == 3
    assert data.notes == ()


def test_level_gap_warns(tmp_path):

    y = _write(tmp_path / "y.csv", "0,3\n3,0\n")
    x = _write(tmp_path / "x.csv", "1\n2\n")

    with pytest.warns(UserWarning):
        data = load_dataset(y, x)

    assert data.n_levels == 4
    assert len(data.notes) == 1
    assert np.array_equal(data.level_counts(), [2, 0, 0, 2])


@pytest.mark.parametrize(
    "y_text, x_text, grid_text",
    (
        ("0,1\n1\n", "1\n2\n", None),
        ("0,1.5\n1,0\n", "1\n2\n", None),
        ("0,-1\n1,0\n", "1\n2\n", None),
        ("0,1\n1,0\n", "1\n2\n3\n", None),
        ("0,a\n1,0\n", "1\n2\n", None),
        ("0,1\n1,0\n", "1\n2\n", "1\n2\n3\n"),
        ("0,1\n1,0\n", "1\n2\n", "2\n1\n"),
    ),
    ids=[
        "ragged",
        "non_integer",
        "negative",
        "row_mismatch",
        "non_numeric",
        "grid_length",
        "grid_order",
    ],
)
def test_load_rejects_bad_files(tmp_path, y_text, x_text, grid_text):

    y = _write(tmp_path / "y.csv", y_text)
    x = _write(tmp_path / "x.csv", x_text)
    grid = None
    if grid_text is not None:
        grid = _write(tmp_path / "g.csv", grid_text)

    with pytest.raises(DatasetFormatError):
        load_dataset(y, x, grid)


def test_empty_file(tmp_path):

    y = _write(tmp_path / "y.csv", "")
    x = _write(tmp_path / "x.csv", "1\n")
    with pytest.raises(DatasetFormatError):
        load_dataset(y, x)


def test_missing_file(tmp_path):

    x = _write(tmp_path / "x.csv", "1\n")
    with pytest.raises(FileNotFoundError):
        load_dataset(str(tmp_path / "nope.csv"), x)


def test_read_grid_row_or_column(tmp_path):

    row = _write(tmp_path / "row.csv", "0.1,0.2,0.4\n")
    col = _write(tmp_path / "col.csv", "0.1\n0.2\n0.4\n")

    assert np.array_equal(read_grid(row), read_grid(col))
