import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("TORSIONKIT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("torsionkit._ckernels", ["src/torsionkit/_ckernels.pyx"], optional=True)],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
