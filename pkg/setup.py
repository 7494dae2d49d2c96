"""Build the optional Cython kernels.

    pip install -e . --no-build-isolation

If Cython or a compiler is missing the package still installs and the numpy
fallback is used at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("ZENO_DISTILL_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("zeno_distill._kernels", ["src/zeno_distill/_kernels.pyx"],
                       include_dirs=[numpy.get_include()],
                       extra_compile_args=["-O3"],
                       define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
