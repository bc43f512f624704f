from setuptools import Extension, setup

import numpy as np

try:
    from Cython.Build import cythonize
except ImportError:
    # The pure-Python kernels are selected at import when the extension is
    # missing, so a Cython-less build still produces a working package.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "gravopt._kernels_c",
                ["src/gravopt/_kernels_c.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
