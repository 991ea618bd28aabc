"""Builds the optional Cython distance kernels.

The package works without the extension: wasmfp._kernels falls back to the
numpy implementation when the compiled module is absent.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the extension instead of failing the whole install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping Cython kernels ({exc}); "
                  f"falling back to the numpy backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  f"falling back to the numpy backend")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("wasmfp._kernels._distcy",
                   ["src/wasmfp/_kernels/_distcy.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
