from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # the pure-Python kernels are used when the extension is absent
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("dechyp._kernels", ["src/dechyp/_kernels.pyx"])],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
