# -*- coding: utf-8 -*-
#
# rikit documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath('../..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
]

source_suffix = '.rst'
master_doc = 'index'

project = u'rikit'
copyright = u'2026, rikit developers'

exclude_patterns = []
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'default'
htmlhelp_basename = 'rikitdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    ('index', 'rikit.tex', u'rikit Documentation',
     u'rikit developers', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('index', 'rikit', u'rikit Documentation',
     [u'rikit developers'], 1)
]
