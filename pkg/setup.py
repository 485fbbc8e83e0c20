#!/usr/bin/env python3
"""
Package manifest for the Cartan workbench.

Install with: pip install -e .
The ``cartan-workbench`` command then runs ``src.cli.main:main``.
"""

from pathlib import Path

from setuptools import find_packages, setup


def read_requirements(name: str):
    lines = Path(__file__).with_name(name).read_text().splitlines()
    return [line.strip() for line in lines if line.strip() and not line.startswith("#")]


setup(
    name="cartan-workbench",
    version="0.1.0",
    description="Exact arithmetic for restricted Lie algebras of Cartan type over finite fields",
    long_description=Path(__file__).with_name("README.md").read_text(),
    long_description_content_type="text/markdown",
    packages=find_packages(include=["src", "src.*"]),
    python_requires=">=3.9",
    install_requires=read_requirements("requirements.txt"),
    extras_require={"dev": read_requirements("requirements-dev.txt")},
    entry_points={"console_scripts": ["cartan-workbench=src.cli.main:main"]},
)
