"""Build hook for the optional compiled kernel.

The package is pure Python plus one Cython extension holding the hot
box-classification kernel.  When Cython (or a C compiler) is missing the
extension is simply skipped and the pure-Python kernel is used at import
time, so an installation without a toolchain still works end to end.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("FMRBOUND_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "fmrbound.kernels._ckernel",
                    ["src/fmrbound/kernels/_ckernel.pyx"],
                    # contraction off: the kernel's outward rounding
                    # certifies exactness of individual IEEE products and
                    # sums, which a fused multiply-add would change
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
