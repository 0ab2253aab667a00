"""Build script: compiles the optional similarity speedup extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "reclink.similarity._strings_cy",
                ["src/reclink/similarity/_strings_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
