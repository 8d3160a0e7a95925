try:
  from setuptools import setup
  setup
except ImportError: # currently not supported
  raise ImportError("screwkit requires setuptools")

# To render markdown. See https://github.com/pypa/pypi-legacy/issues/148
try:
    import pypandoc
    long_description = pypandoc.convert('README.md', 'rst')
except ImportError:
    long_description = open('README.md').read()

# Extract code version from screw_extraction.py
def read_main_file(key):
    with open('screwkit/screw_extraction.py') as f:
        for line in f.readlines():
            if key in line:
                return line.split('"')[1]

entries = {"console_scripts": ["screwkit = screwkit.cli:main"]}

setup(name='screwkit',
      version=read_main_file("__version__"),
      author=read_main_file("__author__"),
      packages=['screwkit'],
      license='MIT',
      include_package_data=True,
      description='Constant screw extraction, segmentation and motion '
                  'planning from kinesthetic demonstrations',
      long_description_content_type='text/markdown',
      long_description=long_description,
      python_requires='>=3.7',
      install_requires=[
                "numpy",
                "scipy",
                "h5py",
                ],
      extras_require={"test": ["pytest"]},
      classifiers=[
                'Intended Audience :: Science/Research',
                'Natural Language :: English',
                'License :: OSI Approved :: MIT License',
                'Programming Language :: Python',
                'Topic :: Scientific/Engineering',
                'Topic :: Scientific/Engineering :: Mathematics',
      ],
      entry_points = entries,
)
