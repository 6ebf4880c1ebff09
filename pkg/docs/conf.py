# Sphinx configuration for the svie documentation.

import os
import sys
sys.path.insert(0, os.path.abspath('../'))

project = 'svie'
copyright = '2024, svie developers'
author = 'svie developers'
release = '0.1.0'

extensions = [
    'sphinx.ext.autodoc',
]

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

html_theme = 'alabaster'

master_doc = 'index'
