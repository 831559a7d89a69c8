"""
Configuration file for the Sphinx documentation builder.
"""


# -- Path setup --------------------------------------------------------------
import os
import sys

sys.path.insert(0, os.path.abspath(".."))

import OPFRM


# -- Project information -----------------------------------------------------
project = "OPFRM"
copyright = "2026, OPFRM Developers"
author = "OPFRM Developers"
release = OPFRM.__version__


# -- General configuration ---------------------------------------------------
extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.autosectionlabel",
]

master_doc = "contents"
autodoc_member_order = "bysource"
autosectionlabel_prefix_document = True

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]


# -- Options for HTML output -------------------------------------------------
html_theme = "sphinx_rtd_theme"
html_theme_options = {"display_version": True}

# Napoleon options
napoleon_google_docstring = False
napoleon_numpy_docstring = True
napoleon_use_param = False
napoleon_use_ivar = True
