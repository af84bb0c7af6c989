# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import pkg_resources

import unielab

# -- Project information -----------------------------------------------------

project = 'unielab'
copyright = '2026, unielab developers'
author = ''

# The full version, including alpha/beta/rc tags
release = pkg_resources.get_distribution("unielab").version
# The short X.Y version
version = '.'.join(release.split(".")[:2])


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.todo',
    'sphinx.ext.githubpages',
    'sphinx_autodoc_typehints',
]

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

language = "en"

exclude_patterns = ['_build']

pygments_style = None

autoclass_content = "both"
autodoc_typehints = "description"
autodoc_typehints_description_target = "documented"

# Options for sphinx_autodoc_typehints
typehints_defaults = 'comma'
typehints_document_rtype = False

# -- Options for HTML output -------------------------------------------------

html_theme = 'pydata_sphinx_theme'

html_theme_options = {
    "logo_link": "index",
    "collapse_navigation": True,
}

htmlhelp_basename = 'unielab-docs'


# -- Options for LaTeX output ------------------------------------------------

latex_documents = [
    (master_doc, 'unielab.tex', u'unielab Documentation',
     author, 'manual'),
]


# -- Options for manual page output ------------------------------------------

man_pages = [
    (master_doc, 'unielab', u'unielab Documentation',
     [author], 1)
]


# -- Options for intersphinx extension ---------------------------------------

intersphinx_mapping = {'python': ('https://docs.python.org/3', None)}

# -- Options for spellchecker ------------------------------------------------

spelling_lang = "en_US"
spelling_ignore_pypi_package_names = True
