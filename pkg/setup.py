"""Builds the optional compiled search kernel.

Without Cython or a C compiler the package installs pure Python and
falls back to ``_search_py`` at import.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "uncertain_conformance._search_c",
                ["src/uncertain_conformance/_search_c.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
