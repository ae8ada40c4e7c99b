from setuptools import setup, find_packages

setup(
    name="fig8asym",
    version="1.0.1",
    description="fig8asym - Asymptotics of quantum invariants of the figure-eight knot",
    author="fig8asym Team",
    packages=find_packages(exclude=["tests", "examples"]),
    install_requires=[
        "mpmath>=1.3.0",
        "pydantic>=2.0.0",
    ],
    extras_require={"test": ["pytest>=7.0.0"]},
    entry_points={"console_scripts": ["fig8asym=fig8asym.main:main"]},
    python_requires=">=3.9",
)
