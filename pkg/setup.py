"""Builds the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed Cython build should not block installation.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "entkit.kernels._cyk",
                ["src/entkit/kernels/_cyk.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )

setup(ext_modules=extensions)
