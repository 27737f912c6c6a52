from setuptools import find_packages, setup

setup(
    name="calogero-sphere",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
)
