"""Build script for the optional compiled kernels.

The package works without the extension (a numpy fallback is selected at
import time), but the compiled kernels make the dense eigensolver loops
much faster, so we build them by default.
"""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "subeig._accel",
        ["src/subeig/_accel.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
)
