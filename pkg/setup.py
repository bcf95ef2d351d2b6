"""Build the optional Cython kernels; the package falls back to pure Python without them."""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "qarchbench._kernels",
    ["src/qarchbench/_kernels.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O2", "-ffp-contract=off"],
)

setup(ext_modules=cythonize([ext], language_level=3))
