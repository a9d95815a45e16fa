# -*- coding: utf-8 -*-
from setuptools import setup

long_description = "Compiles a 3D indoor scene (point cloud, instance proposals, agent pose) into prompts for a vision-language model: pruned proposals, coordinate and clock-direction descriptions, five software-rasterized views, a hierarchical view/scene token layout, an OpenAI-compatible chat client and a situated QA scorer."

setup(
    name="scene2prompt",
    packages=[
        "scene2prompt",
        "scene2prompt.client",
        "scene2prompt.describe",
        "scene2prompt.evaluate",
        "scene2prompt.geometry",
        "scene2prompt.hiervis",
        "scene2prompt.ingest",
        "scene2prompt.prompt",
        "scene2prompt.pruning",
        "scene2prompt.render",
        "scene2prompt.utils",
    ],
    version=".".join(("0", "1", "0")),
    description=long_description,
    long_description=long_description,
    keywords=["3d scenes", "point cloud", "vision language model", "prompting", "situated qa"],
    license="The MIT License (MIT)",
    python_requires=">=3.8",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Operating System :: OS Independent",
        "License :: OSI Approved :: MIT License",
        "Natural Language :: English",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Topic :: Scientific/Engineering :: Image Processing",
    ],
    install_requires=["numpy", "pandas", "Pillow", "plyfile", "PyYAML", "httpx", "nltk"],
    entry_points={
        "console_scripts": ["scene2prompt=scene2prompt.cli:main"],
    },
    # List additional groups of dependencies here (e.g. development dependencies).
    # You can install these using the following syntax, for example:
    # $ pip install -e .[dev,accel]
    extras_require={
        "accel": ["numba"],
        "dev": ["tqdm", "sphinx"],
    },
)
