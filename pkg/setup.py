"""Build the optional Cython kernels.

The package works without them; ``roughrank._backend`` falls back to the
pure-Python implementation when the extension is missing.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ROUGHRANK_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "roughrank._kernels",
                    [os.path.join("src", "roughrank", "_kernels.pyx")],
                    include_dirs=[np.get_include()],
                    # keep float semantics identical to the Python fallback
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
