import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="FrictionUAS",
    version="1.0.0",
    description="Friction identification of a tilted Furuta pendulum with a universal adaptive stabilizer based observer.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
    ],
    packages=setuptools.find_packages(exclude=("tests", "tests.*", "examples", "examples.*")),
    python_requires='>=3.10',
    install_requires=[
        "toml>=0.10.2",
        "numpy>=1.22",
        "scipy>=1.7",
    ],
    extras_require={
        "test": ["pytest>=7"],
    },
    entry_points={
        "console_scripts": [
            "friction-uas=friction_uas.cli:main",
        ],
    },
)
