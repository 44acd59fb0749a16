#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# fracosc documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))


# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode']

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = 'fracosc'
copyright = '2026, fracosc contributors'
author = 'fracosc contributors'

version = '0.1'
release = '0.1'

language = None

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

pygments_style = 'sphinx'

todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'

html_static_path = ['_static']

html_sidebars = {
    '**': [
        'relations.html',  # needs 'show_related': True theme option to display
        'searchbox.html',
    ]
}

htmlhelp_basename = 'Fracoscdoc'


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'fracosc', 'fracosc Documentation',
     [author], 1)
]
