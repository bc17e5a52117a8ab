import glob
import os
import shutil

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

here = os.path.dirname(os.path.abspath(__file__))

# vendor/json.hpp is exposed as <nlohmann/json.hpp> to match the system layout
# (CMake does the same at configure time).
nlohmann = os.path.join(here, "vendor", "nlohmann", "json.hpp")
if not os.path.exists(nlohmann):
    os.makedirs(os.path.dirname(nlohmann), exist_ok=True)
    shutil.copyfile(os.path.join(here, "vendor", "json.hpp"), nlohmann)

eigen = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "lpm._lpm",
    sorted(glob.glob("src/*.cpp")) + ["src/python/lpm_module.cpp"],
    include_dirs=["include", "vendor", eigen],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
