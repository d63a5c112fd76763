"""Build script: compiles the optional fast kernel extension.

The package is fully functional without the extension (a pure-Python
backend is selected at import time), so any failure to build it is
downgraded to a warning instead of aborting the install.
Set MEASURE_LIMITS_NO_EXT=1 to skip the extension entirely.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - extension is optional
            warnings.warn(f"fast kernel extension not built: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"fast kernel extension not built: {exc}")


ext_modules = []
cmdclass = {}
if not os.environ.get("MEASURE_LIMITS_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "measure_limits.kernels._fast",
                    ["src/measure_limits/kernels/_fast.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
        cmdclass["build_ext"] = OptionalBuildExt
    except ImportError:
        warnings.warn("Cython not available; using the pure-Python kernels")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
