"""Build the optional compiled kernel core.

The Cython extension is optional: if Cython is unavailable or compilation
fails, the package installs with the pure-Python kernels only.
"""
import os
import platform

from setuptools import setup
from setuptools.command.build_ext import build_ext

# hardware popcount; every x86-64 CPU since about 2008 has it
_ARCH_FLAGS = ["-mpopcnt"] if platform.machine().lower() in ("x86_64", "amd64") else []

ext_modules = []
if os.environ.get("CLIFFTOMO_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "clifftomo._kernels._ckernels",
                    ["src/clifftomo/_kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3", *_ARCH_FLAGS],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing and similar
            print(f"warning: compiled kernels not built ({exc}); using pure-Python fallback")


setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
