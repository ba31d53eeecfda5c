"""Build the optional Cython kernels.

The extension is marked optional: if Cython or a C compiler is missing the
package installs with the pure-Python kernels only.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "amor._speedups",
                ["src/amor/_speedups.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
