import os

from setuptools import find_packages, setup

try:
    with open(os.path.join(os.path.dirname(__file__), 'README.rst'), encoding='utf-8') as f:
        long_description = f.read()
except OSError:
    long_description = ''


setup(
    name='fi-koszul',
    version='0.1.0',
    description='Koszul complexes and FI-homology of truncated FI-modules in exact arithmetic',
    long_description=long_description,
    license='Apache Software License',
    python_requires='>=3.8',
    install_requires=['django>=3.2', 'sympy>=1.12'],
    extras_require={
        'test': ['pytest', 'pytest-django', 'hypothesis'],
        'lint': ['pylama'],
    },
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    package_data={'fi_koszul': ['templates/fi_koszul/*.txt']},
    entry_points="""
[console_scripts]
fi-koszul=fi_koszul.__main__:main
""",
)
