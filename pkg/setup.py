import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="hydrogenoid-extensions",
    version="0.1.0",
    description="Spectra and resolvents of the self-adjoint extensions of the hydrogenoid Hamiltonian",
    long_description=long_description,
    long_description_content_type="text/markdown",
    include_package_data=True,
    packages=setuptools.find_packages(exclude=["tests", "docs"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    install_requires=["numpy", "scipy", "click>=8.0", "clint"],
    extras_require={
        "tests": ["pytest", "mpmath"],
        "docs": ["sphinx", "sphinx_rtd_theme", "recommonmark"],
    },
    entry_points={
        "console_scripts": ["hydrogenoid=hydrogenoid.cli:main"],
    },
    python_requires='>=3.7',
)
