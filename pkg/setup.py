import os


from setuptools import setup


# make sure cwd is correct
this_file = os.path.abspath(__file__)
this_dir = os.path.split(this_file)[0]
os.chdir(this_dir)


setup(
    name='aegis',
    version='0.1.0',
    author='The aegis developers',
    long_description='Simulator of a UAV relay playing an anti-jamming game against a jammer',
    packages=['aegis', 'aegis.tests'],
    python_requires='>=3.8',
    install_requires=['numpy>=1.20', 'scipy>=1.6', 'matplotlib>=3.3',
                      'Sphinx', 'pytest',
                      'prettytable', 'cmd2>=2.0', 'pyparsing>=2.4',
                      'pandas>=1.5',
                      ],
    license='Apache License, Version 2.0',
    entry_points = """
                   [console_scripts]
                   aegis = aegis.cli:run_command_line
                   """
)
