"""Setup script for bispec."""

from setuptools import find_packages, setup

setup(
    name="bispec",
    version="0.1.0",
    description="Bare-hadron mass spectra, parameter calibration and operator-algebra verification",
    author="OdinManiac",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    package_data={"bispec": ["data/*.csv"]},
    python_requires=">=3.10",
    install_requires=[
        "fastapi>=0.110.0",
        "uvicorn>=0.27.0",
        "pydantic>=2.6.0",
        "loguru>=0.7.2",
        "python-dotenv>=1.0.0",
        "httpx>=0.26.0",
        "numpy>=1.26.0",
        "scipy>=1.12.0",
        "sympy>=1.12",
    ],
)
