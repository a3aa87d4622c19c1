"""Build shim: compiles the optional detector-scan extension.

The package is fully functional without it (a pure-numpy backend is selected
at import time), so any compilation failure downgrades to a warning.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler: fall back to pure backend
            print(f"warning: skipping compiled kernel ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping compiled kernel ({exc})")


def extensions():
    if os.environ.get("ERGORATE_NO_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython unavailable, building without the compiled kernel")
        return []
    return cythonize(
        ["src/ergorate/_kernels/_scan.pyx"],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
