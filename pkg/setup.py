from setuptools import setup, find_packages

setup(
    name="svie",
    packages=find_packages(exclude=["tests", "tests.*"]),
    version="0.1.0.dev0",
    license="GPL-3",
    description="Randomized Milstein scheme for stochastic Volterra integral equations with weakly singular kernels.",
    keywords=["stochastic volterra", "milstein", "strong convergence", "monte carlo"],
    python_requires=">=3.7",
    install_requires=[
        "numpy>=1.17",
        "click>=7.1.2",
        "daiquiri>=2.1.1",
        "python-json-logger>=0.1.11",
        "Jinja2>=2.11",
        "tqdm>=4.38.0",
    ],
    extras_require={
        "test": ["pytest>=5.3.1", "pytest-cov>=2.8.1", "scipy>=1.4"],
    },
    entry_points={
        "console_scripts": ["svie=svie.cli:main"],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
        "Programming Language :: Python :: 3.7",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
