# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.

import os
import sys
sys.path.insert(0, os.path.abspath(".."))

# -- Project information -----------------------------------------------------

project = "scene2prompt"
copyright = "2024, scene2prompt developers"
author = "scene2prompt developers"

# The short X.Y version
version = "0.1"
# The full version, including alpha/beta/rc tags
release = "0.1.0"

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.todo",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
language = "en"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = None

# -- Options for HTML output -------------------------------------------------

html_theme = "alabaster"
html_static_path = ["_static"]
htmlhelp_basename = "scene2promptdoc"

# -- Options for LaTeX output ------------------------------------------------

latex_documents = [
    (master_doc, "scene2prompt.tex", "scene2prompt Documentation", author, "manual"),
]

# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, "scene2prompt", "scene2prompt Documentation", [author], 1)
]

# -- Extension configuration -------------------------------------------------

todo_include_todos = True
