"""Build script for the optional popcount kernel.

The Tanimoto scan is the hot loop of similarity search and positive-pair
mining, so a small C extension implements the bulk popcount arithmetic.
The build is best-effort: if no C toolchain is available the install still
succeeds and the package falls back to the numpy kernel at import time.
"""

import platform

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

_COMPILE_ARGS = ["-O3"]
if platform.machine() in ("x86_64", "AMD64", "i686"):
    _COMPILE_ARGS.append("-mpopcnt")  # hardware POPCNT (available since ~2008)


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing: fall back to numpy kernel
            print(f"warning: skipping C kernel build ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping C kernel {ext.name} ({exc})")


setup(
    ext_modules=[
        Extension(
            "molbench.fingerprint._bitops",
            sources=["src/molbench/fingerprint/_bitops.c"],
            extra_compile_args=_COMPILE_ARGS,
            optional=True,
        )
    ],
    cmdclass={"build_ext": OptionalBuildExt},
)
