"""Build script: compiles the reduction kernel, falling back to pure Python.

The compiled extension is an optimization, not a requirement: if Cython or a
C++ toolchain is unavailable the install still succeeds and the package uses
its pure-Python backend (see landbands.kernels).
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class optional_build_ext(build_ext):
    """build_ext that degrades to a warning instead of failing the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing or broken
            print(f"WARNING: skipping compiled kernels ({exc}); "
                  "the pure-Python backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  "the pure-Python backend will be used")


extensions = [
    Extension(
        "landbands.kernels._reduction",
        ["src/landbands/kernels/_reduction.pyx"],
        language="c++",
        extra_compile_args=["-O3", "-std=c++17"],
    )
]

setup(
    ext_modules=(
        cythonize(extensions, compiler_directives={"language_level": "3"})
        if cythonize
        else []
    ),
    cmdclass={"build_ext": optional_build_ext},
)
