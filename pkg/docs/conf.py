# -*- coding: utf-8 -*-
#
# panelbounds documentation build configuration file.

import sys
import os

# the package lives one directory up
sys.path.insert(0, os.path.abspath('..'))

from panelbounds.controllers.abstract_controller import VERSION_NUMBER
from panelbounds.controllers.version import Version

# -- General configuration ----------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.todo', 'sphinx.ext.coverage',
              'sphinx.ext.mathjax', 'sphinx.ext.inheritance_diagram',
              'sphinx.ext.viewcode']

source_suffix = '.rst'
master_doc = 'index'

project = u'panelbounds'
copyright = u'2026, the panelbounds developers'

version = VERSION_NUMBER
release = '%s %s' % (VERSION_NUMBER, Version.VERSION_DESCRIPTION)

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output --------------------------------------------------

html_theme = 'nature'
html_static_path = []
html_show_sphinx = False
htmlhelp_basename = 'panelboundsdoc'

# -- Options for LaTeX and manual page output ---------------------------------

latex_documents = [
    ('index', 'panelbounds.tex', u'panelbounds Documentation',
     u'the panelbounds developers', 'manual'),
]

man_pages = [
    ('index', 'panelbounds', u'panelbounds Documentation',
     [u'the panelbounds developers'], 1)
]
