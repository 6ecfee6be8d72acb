from setuptools import setup, find_packages

with open("README.md", "r") as readme_file:
	readme = readme_file.read()

with open("requirements.txt", "r") as requirements_file:
	requirements = [line.split(">=")[0].strip() for line in requirements_file if line.strip()]

setup(
	name="strukt",
	version="0.1.0",
	description="Structural graph toolkit: embeddings, admissibility, clique-sums, topological minors and structure certificates",
	long_description=readme,
	long_description_content_type="text/markdown",
	packages=find_packages(exclude=["tests"]),
	install_requires=requirements,
	extras_require={"test": ["pytest"]},
	entry_points={"console_scripts": ["strukt=strukt.cli:main"]},
	python_requires=">=3.8",
	classifiers=[
		"Programming Language :: Python :: 3.8",
		"Programming Language :: Python :: 3.9",
		"Programming Language :: Python :: 3.10",
		"Topic :: Scientific/Engineering :: Mathematics",
	],
)
