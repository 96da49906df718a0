# pylint: disable-msg=C0103
"""
SafeBoUtils: This package provides utility methods in general
"""

# __init__.py
from .config_reader import ConfigReader
from .input_validation import InputValidation
