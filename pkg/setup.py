"""Build script for the optional compiled matching kernel.

The package works without the extension (a pure-Python kernel is selected
at import time); build it in place with:

    python setup.py build_ext --inplace
"""

import warnings

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("ruletag._match_c", ["src/ruletag/_match_c.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    warnings.warn("Cython not available; installing without the compiled matcher")
    ext_modules = []

setup(ext_modules=ext_modules)
