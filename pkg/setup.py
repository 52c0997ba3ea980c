import os

import numpy as np
from setuptools import Extension, setup

# Set PRIMESQ_NO_EXT=1 to install the pure-Python fallback only.
ext_modules = []
if not os.environ.get("PRIMESQ_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extensions = [
            Extension(
                "primesq._ckernels",
                ["src/primesq/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # no fast-math and no FMA contraction: results must be reproducible
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ]
        ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
