"""A setuptools based setup module for slopegaps."""

from setuptools import setup, find_packages
import pathlib

here = pathlib.Path(__file__).parent.resolve()

long_description = (here / 'README.md').read_text(encoding='utf-8')

setup(
    name='slopegaps',
    version='0.1.0',
    description='Slope gap distribution of saddle connections on the regular 2n-gon',
    long_description=long_description,
    long_description_content_type='text/markdown',
    author='NixonInnes',
    author_email='nixoninnes@echonet.io',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        "Programming Language :: Python :: 3.10",
        'Programming Language :: Python :: 3 :: Only',
    ],
    keywords='translation surfaces, saddle connections, veech group, slope gaps',
    packages=find_packages(include=['slopegaps', 'slopegaps.*']),
    python_requires='>=3.8, <4',
    install_requires=['numpy', 'scipy', 'click'],
    extras_require={
        'dev': ['check-manifest'],
        'test': ['coverage', 'hypothesis', 'pytest'],
    },
    entry_points={
        'console_scripts': [
            'slopegaps=slopegaps.cli:main',
        ],
    },
)
