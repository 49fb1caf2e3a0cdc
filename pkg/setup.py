import os

from setuptools import setup

ext_modules = []
if os.environ.get("KGSU_SKIP_CYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/kgsu/store/_indexes_cy.pyx"],
            language_level=3,
        )
    except ImportError:
        # Pure-Python fallback is selected at import time when the
        # compiled index core is unavailable.
        ext_modules = []

setup(ext_modules=ext_modules)
