__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import os

import pytest

from OPFRM import load_config, save_config
from OPFRM.config import atomic_write
from OPFRM.core.library import extract_library_specs, initialize_library


def test_save_and_load_equality(tmp_path):

    initialize_library(pytest.library)
    config = {"model": extract_library_specs("models", "test_fast")}
    path = str(tmp_path / "config.yaml")

    save_config(config, path)
    assert load_config(path) == config


def test_save_no_overwrite(tmp_path):

    path = str(tmp_path / "config.yaml")
    save_config({"a": 1}, path)

    with pytest.raises(FileExistsError):
        save_config({"a": 2}, path)

    save_config({"a": 2}, path, overwrite=True)
    assert load_config(path) == {"a": 2}


def test_atomic_write_creates_directories(tmp_path):

    path = str(tmp_path / "nested" / "out.txt")
    with atomic_write(path) as f:
        f.write("done")

    with open(path) as f:
        assert f.read() == "done"


def test_atomic_write_failure_leaves_nothing(tmp_path):

    path = str(tmp_path / "out.txt")
    with pytest.raises(RuntimeError):
        with atomic_write(path) as f:
            f.write("partial")
            raise RuntimeError("interrupted")

    assert os.listdir(tmp_path) == []
