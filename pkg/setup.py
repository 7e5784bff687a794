import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "addnmf._sweep",
        ["src/addnmf/_sweep.pyx"],
        include_dirs=[np.get_include()],
        # Keep a*b+c as two roundings so both backends agree bit for bit.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
