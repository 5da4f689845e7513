from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pskia._speedups",
                ["src/pskia/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # the package works without the extension: the numpy fallback is
    # selected automatically at import
    ext_modules = []

setup(ext_modules=ext_modules)
