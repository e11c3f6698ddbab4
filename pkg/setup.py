import os
from setuptools import find_packages
from setuptools import setup

try:
    from typing import Dict  # NOQA
    from typing import List  # NOQA
except ImportError:
    # The above imports are only used by `mypy`, so we simply ignore them
    # if they are unavailable in the execution environment.
    pass


def get_version():
    # type: () -> str

    version_filepath = os.path.join(os.path.dirname(__file__), 'hvmax', 'version.py')
    with open(version_filepath) as f:
        for line in f:
            if line.startswith('__version__'):
                return line.strip().split()[-1][1:-1]
    assert False


def get_long_description():
    # type: () -> str

    readme_filepath = os.path.join(os.path.dirname(__file__), 'README.md')
    with open(readme_filepath) as f:
        return f.read()


def get_install_requires():
    # type: () -> List[str]

    return ['cliff', 'colorlog', 'numpy', 'scipy', 'six', 'tqdm']


def get_extras_require():
    # type: () -> Dict[str, List[str]]

    return {
        'checking': ['autopep8', 'hacking', 'mypy'],
        'testing': ['pytest'],
        'document': ['sphinx', 'sphinx_rtd_theme'],
        'codecov': ['pytest-cov', 'codecov'],
    }


setup(
    name='hvmax',
    version=get_version(),
    description='Hypervolume maximization as a training objective for neural networks',
    long_description=get_long_description(),
    long_description_content_type='text/markdown',
    packages=find_packages(exclude=('tests', 'tests.*')),
    package_data={'hvmax': ['configs/*.cfg']},
    python_requires='>=3.5',
    install_requires=get_install_requires(),
    tests_require=get_extras_require()['testing'],
    extras_require=get_extras_require(),
    entry_points={'console_scripts': ['hvmax = hvmax.cli:main']})
