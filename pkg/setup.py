import setuptools

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()


__version__ = "0.1.0"

REPO_NAME = "minkcurve"
SRC_REPO = "minkcurve"


setuptools.setup(
    name=SRC_REPO,
    version=__version__,
    description="Closed strong spacelike curves in Minkowski 3-space: checks, ruled surfaces and maximal graphs",
    long_description=long_description,
    long_description_content_type="text/markdown",
    python_requires=">=3.9",
    package_dir={"": "src"},
    packages=setuptools.find_packages(where="src"),
    install_requires=[
        "numpy>=1.23",
        "scipy>=1.10",
        "pandas>=1.5",
        "pydantic>=2",
        "python-dotenv",
    ],
    entry_points={"console_scripts": ["minkcurve=minkcurve.tools.cli:main"]},
)
