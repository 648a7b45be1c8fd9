from setuptools import setup

setup(
    name='panelbounds',
    version='0.3.0',
    packages=['panelbounds',
              'panelbounds.config',
              'panelbounds.controllers',
              'panelbounds.core',
              'panelbounds.lib',
              'panelbounds.models',
              'panelbounds.tests',
              'panelbounds.tests.core',
              'panelbounds.tests.controllers',
              'panelbounds.tests.lib',
              'panelbounds.tests.models',
              ],
    package_data={'panelbounds.tests': ['fixtures/*.csv'],
                  },
    scripts=['scripts/test.sh'],
    entry_points={
        'console_scripts': ['panelbounds=panelbounds.app:main'],
    },
    description='Outer bounds and confidence intervals for average effects '
                'in fixed-effects binary-choice panels.',
    long_description=open('README.rst', 'rt').read(),
    install_requires=[
        # for the linear programs, estimation and simulations
        'numpy',
        'pandas',
        'scipy',

        # for parallel replications and bound programs
        'joblib',

        'simplejson',
    ],
)
