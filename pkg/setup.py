# Setup Python module
from setuptools import setup, find_packages

modules = ["HelmDAT." + p for p in sorted(find_packages("./HelmDAT"))]

setup(
    name="HelmDAT",
    version="0.1",
    description="High-order compact finite differences and the Dirac assisted tree for 1D heterogeneous Helmholtz "
                "equations.",
    license="MIT",
    packages=["HelmDAT", *modules],
    include_package_data=True,
    zip_safe=False,
    install_requires=[
        "joblib==1.2.0",
        "numpy==1.23.4",
        "pandas==1.5.1",
        "scikit-learn==1.1.3",
        "scipy==1.9.3"
    ],
    extras_require={
        "test": ["pytest"]
    },
    entry_points={
        "console_scripts": ["HelmDAT=HelmDAT.helmdat:run"]
    }
)
