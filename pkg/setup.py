"""Build script.

The tree-matching kernel has a compiled (Cython) implementation for speed.
It is strictly optional: if Cython or a C compiler is unavailable the build
falls back to the pure-Python kernel, which the package selects at import
time.  Build in place with:

    python setup.py build_ext --inplace
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compile failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "WARNING: compiled matcher kernel not built (%s); "
            "falling back to the pure-Python kernel" % exc,
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print(
            "WARNING: Cython not available; building without the compiled "
            "matcher kernel",
            file=sys.stderr,
        )
        return []
    return cythonize(
        [Extension("fict._matchcore", ["src/fict/_matchcore.pyx"])],
        language_level="3",
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
