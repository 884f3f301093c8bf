from setuptools import setup, find_packages

setup(
    name="qtradeoff",
    version="0.1.0",
    packages=find_packages(exclude=["examples", "examples.*"]),
    py_modules=["main"],
    python_requires=">=3.9",
    install_requires=[
        # Numerics
        "numpy>=1.24",
        "scipy>=1.10",

        # Core Dependencies
        "pydantic>=2.6.1",
        "python-dotenv>=1.0.0",
        "typing-extensions>=4.9.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.4",
            "pytest-asyncio>=0.23",
        ],
    },
    entry_points={
        "console_scripts": [
            "qtradeoff=main:main",
        ],
    },
)
