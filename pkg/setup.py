"""Build script: compiles the optional kernel extension when Cython and a C
compiler are available; the package works without it (pure-Python fallback).
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "stratakit._kernel._core",
                ["src/stratakit/_kernel/_core.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
