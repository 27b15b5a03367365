import setuptools


setuptools.setup(
    name="acelib",
    version=open('VERSION').read().strip(),
    description="Conservative clearance and attitude bounds for "
                "rocker-bogie rovers on elevation maps",
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=['tests', 'tests.*']),
    entry_points={
        'console_scripts': ['acelib=acelib.cli:main'],
    },
    classifiers=[
        "Programming Language :: Python :: 3 :: Only",
        "License :: OSI Approved :: Apache Software License",
        "Development Status :: 2 - Pre-Alpha",
        "Operating System :: POSIX :: Linux",
        "Topic :: Scientific/Engineering",
        "Topic :: Scientific/Engineering :: GIS",
        "Topic :: Software Development :: Libraries :: Python Modules",
    ],
    install_requires=[
        "scikit-learn",
        "numpy",
        "scipy"
    ],
)
