"""Build script for the optional compiled reachability kernel.

The package is fully functional without the extension; `causalrnr.kernels`
falls back to the pure-Python implementation when the build is skipped or
the import fails.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "causalrnr._fastkernels",
                ["src/causalrnr/_fastkernels.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
