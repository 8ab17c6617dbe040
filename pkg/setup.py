"""Build script: compiles the optional row-reduction extension.

The package is pure Python plus one optional Cython extension; when no
compiler or Cython is available the build falls through to the pure
fallback in koszul._kernels.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("koszul._ckernels", ["src/koszul/_ckernels.pyx"], optional=True)],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
