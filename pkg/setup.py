"""Builds the optional Cython value-iteration kernel.

Without Cython (or a compiler) the package installs as pure Python and the
numpy fallback is used.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension(
            "exactreach._core._vi_kernel",
            ["src/exactreach/_core/_vi_kernel.pyx"],
            extra_compile_args=["-O3", "-ffp-contract=off"],
        )],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
