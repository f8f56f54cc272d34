from setuptools import setup

# The compiled term-arithmetic kernel is optional: when Cython or a C
# compiler is unavailable the package falls back to the pure-Python twin
# selected at import time in quadrikit._kernel.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/quadrikit/_poly_core_cy.pyx"],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
