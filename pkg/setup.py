"""Build script for the optional compiled kernel core.

The package is pure Python plus one Cython extension holding the hot
inner loops (im2col/col2im, pooling, LBP code maps). If Cython or a C
compiler is unavailable the build falls back to a pure-Python install;
`glyphforge._kernels` selects the numpy backend at import in that case.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "glyphforge._kernels._core_cy",
                ["src/glyphforge/_kernels/_core_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3", "-march=native", "-fopenmp"],
                extra_link_args=["-fopenmp"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
