#!/bin/env python
"""
Build and install equilattice
"""
from setuptools import setup

try:
    import numpy
except ImportError:
    raise ImportError('numpy needs to be installed before equilattice can be '
                      'installed. Try installing with "pip install numpy" '
                      'before installing equilattice.')

package_data = {
   'equilattice.data': ['*.json'],  # example experiment configurations
   }

# read the requirements file and have use that to populate install_requires
requires = open("requirements.txt").read().strip().split("\n")
install_requires = []
extras_require = {}
for r in requires:
    if ";" in r:
        # requirements.txt conditional dependencies need to be reformatted for wheels
        # to the form: `'[extra_name]:condition' : ['requirements']`
        req, cond = r.split(";", 1)
        cond = ":" + cond
        cond_reqs = extras_require.setdefault(cond, [])
        cond_reqs.append(req)
    else:
        install_requires.append(r)

with open('README.rst', 'r') as f:
    readme = f.read()

setup_requires = [
    'setuptools-scm>=3.2.0',
    'setuptools_scm_git_archive',
    'numpy>=1.17.0'
    ]

setup(
    name='equilattice',
    use_scm_version=True,
    description='Lattice counting, local densities, invariant forms and '
                'CM points in Python',
    long_description=readme,
    long_description_content_type='text/x-rst',
    license="GPL2",
    packages=[
        'equilattice',
        'equilattice.utils',
        'equilattice.lattice',
        'equilattice.counting',
        'equilattice.measure',
        'equilattice.forms',
        'equilattice.cm',
        'equilattice.cli',
        'equilattice.data'
    ],
    package_data=package_data,
    include_package_data=True,
    install_requires=install_requires,
    extras_require=extras_require,
    setup_requires=setup_requires,
    entry_points={
        'console_scripts': ['equilattice = equilattice.cli.main:main']
    },
    test_suite='tests',
    )
