from setuptools import setup, find_packages

setup(
    name="helly_rotation",
    version="0.1",
    packages=find_packages(exclude=["tests", "examples*"]),
)
