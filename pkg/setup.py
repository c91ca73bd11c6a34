"""Build script for the optional compiled sampling kernel.

The package works without the extension: threshgen.sampling falls back to a
pure-numpy kernel when `threshgen._hitrun` is missing. Building from source
therefore tolerates a missing compiler or Cython instead of failing the
whole install.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "threshgen._hitrun",
                ["src/threshgen/_hitrun.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
