# pylint: disable-msg=C0103
"""
SafeBoLog: This package provides log functionalities.
"""

# __init__.py
from .log import Log
