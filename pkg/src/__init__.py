# Make this directory a Python package
