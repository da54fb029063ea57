#! /usr/bin/env python

descr = """scikit-bark (a.k.a. `skbark`): Bayesian optimization with tree kernels.

This package fits Gaussian-process surrogates whose kernel is a forest of
decision trees sampled from its posterior by Metropolis-Hastings, and
optimizes mixed continuous, integer and categorical domains with them.

"""

DISTNAME            = 'scikit-bark'
DESCRIPTION         = 'Bayesian tree-kernel surrogates for mixed-variable optimization'
LONG_DESCRIPTION    = descr
MAINTAINER          = 'The scikit-bark team'
LICENSE             = 'Modified BSD'

import setuptools


with open('skbark/__init__.py') as fid:
    for line in fid:
        if line.startswith('__version__'):
            VERSION = line.strip().split()[-1][1:-1]
            break

with open('DEPENDS.txt') as fid:
    INSTALL_REQUIRES = []
    for line in fid.readlines():
        if line == '' or line[0] == '#' or line[0].isspace():
            continue
        INSTALL_REQUIRES.append(line.strip())


if __name__ == "__main__":
    setuptools.setup(
        name=DISTNAME,
        description=DESCRIPTION,
        long_description=LONG_DESCRIPTION,
        maintainer=MAINTAINER,
        license=LICENSE,
        version=VERSION,
        package_data={
            '': ['*.md', '*.txt'],
        },

        classifiers=[
            'Development Status :: 3 - Alpha',
            'Environment :: Console',
            'Intended Audience :: Developers',
            'Intended Audience :: Science/Research',
            'License :: OSI Approved :: BSD License',
            'Programming Language :: Python',
            'Programming Language :: Python :: 3',
            'Topic :: Scientific/Engineering',
            'Topic :: Scientific/Engineering :: Mathematics',
            'Operating System :: OS Independent'],

        python_requires='>=3.7',
        install_requires=INSTALL_REQUIRES,
        extras_require={'test': ['pytest>=6.0']},
        packages=setuptools.find_packages(),
        include_package_data=True,
        zip_safe=False,
        entry_points={
            'console_scripts': ['skbark = skbark.cli.commands:main'],
        },
    )
