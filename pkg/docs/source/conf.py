# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.

import pkg_resources

__version__ = pkg_resources.get_distribution('hvmax').version

# -- Project information -----------------------------------------------------

project = 'hvmax'
copyright = '2019, hvmax Contributors.'
author = 'hvmax Contributors.'

version = __version__
release = __version__

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
]

source_suffix = '.rst'
master_doc = 'index'
language = None
exclude_patterns = []
pygments_style = 'sphinx'

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'hvmaxdoc'

man_pages = [(master_doc, 'hvmax', 'hvmax Documentation', [author], 1)]
