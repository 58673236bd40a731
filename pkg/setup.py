"""Build script: compiles the optional Cython hot-kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile only costs speed, not correctness.
"""
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"building dgl1d._hermite_cy failed ({exc}); "
                          "using the pure-Python backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); "
                          "using the pure-Python backend")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("dgl1d._hermite_cy", ["src/dgl1d/_hermite_cy.pyx"])],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
