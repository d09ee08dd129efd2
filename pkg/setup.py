from setuptools import find_packages, setup

setup(
    name="multimorse",
    packages=find_packages(exclude=["multimorse_tests"]),
    install_requires=[
        "dagster",
        "dagster-webserver",
        "pandas",
        "numpy",
        "networkx",
        "joblib",
        "deltalake",
        "python-dotenv"
    ],
    extras_require={"dev": ["dagster-webserver", "pytest", "hypothesis"]},
    entry_points={"console_scripts": ["multimorse=multimorse.cli:main"]},
)
