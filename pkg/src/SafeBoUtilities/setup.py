"""
 Copyright (c) SafeBO Utilities contributors. All rights reserved.
 Licensed under the MIT License. See LICENSE.txt in the project root for
 license information.
"""

import setuptools

INSTALL_REQUIRES = ['numpy>=1.21',
                    'scipy>=1.7',
                    'pandas>=1.3',
                    'jsons>=1.6'
                    ]

with open("LICENSE.txt", "r") as fh:
    LICENSE_TXT = fh.read()

setuptools.setup(
    name="SafeBO-Utilities",
    version="0.1.0",
    author="SafeBO Utilities contributors",
    description="SAFE BAYESIAN OPTIMIZATION TOOLS: \
    Gaussian process models, log-barrier safe acquisition and an experiment \
    runner for synthetic benchmarks and a virtual-patient bolus dosing problem.",
    license=LICENSE_TXT,
    python_requires='>=3.8',
    packages=setuptools.find_packages(exclude=['tests']),
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.8",
        "Operating System :: OS Independent",
    ],
    install_requires=INSTALL_REQUIRES,
    extras_require={'test': ['pytest>=7']},
    entry_points={'console_scripts': ['safebo=SafeBoRunner.cli:main']},
    keywords=['bayesian optimization', 'gaussian process', 'safe exploration'],
    zip_safe=False,
)
