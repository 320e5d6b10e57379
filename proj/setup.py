"""CMake-driven build for the _qweber extension module.

setuptools compiles nothing itself; it shells out to CMake so the extension
is built exactly like the rest of the project.
"""

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DQWEBER_BUILD_PYTHON=ON",
                "-DSKBUILD=ON",  # skip the test tree inside pip builds
                f"-DPython3_EXECUTABLE={sys.executable}",
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_dir}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_qweber", "-j"],
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("qweber._qweber")],
    cmdclass={"build_ext": CMakeBuild},
)
