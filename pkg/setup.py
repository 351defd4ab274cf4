from setuptools import setup
from os import path
this_directory = path.abspath(path.dirname(__file__))
with open(path.join(this_directory, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()


setup(name = 'pyfockcodes',
    version = '0.1.0',
    description = 'Fock state codes against photon loss from codes on the simplex',
    long_description = long_description,
    long_description_content_type = 'text/markdown',
    keywords = ['Fock state codes', 'Bosonic codes', 'Amplitude damping',
                'Approximate quantum error correction', 'Simplex codes'],
    license='MIT',
    packages=['fockcodes', 'test'],
    zip_safe=False,
    install_requires = [
        'scipy',
        'numpy',
    ],
    test_suite = 'test',
    tests_require = ['hypothesis'],
    entry_points = {
        'console_scripts': ['fockcodes=fockcodes.cli:main'],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Development Status :: 3 - Alpha",
        "Topic :: Scientific/Engineering :: Physics"
    ],
    python_requires='>=3.8',
)
