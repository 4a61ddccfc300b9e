import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        extdir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        cfg = "Debug" if self.debug else "Release"
        source = Path(__file__).parent.resolve()
        subprocess.run(
            [
                "cmake",
                "-S", str(source),
                "-B", str(build_dir),
                f"-DCMAKE_BUILD_TYPE={cfg}",
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={extdir}",
                f"-DPython_EXECUTABLE={sys.executable}",
                "-DHOPFIELD_BUILD_PYTHON=ON",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_hopfieldusc",
             "-j", str(os.cpu_count() or 1)],
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("hopfieldusc._hopfieldusc")],
    cmdclass={"build_ext": CMakeBuild},
)
