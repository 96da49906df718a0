# pylint: disable-msg=C0103
"""
SafeBoExceptions: This package is developed for custom exceptions.
"""

# __init__.py
from .input_error import InputError, ConfigValidationError
from .safebo_error import (SafeBoError, SingularCovarianceError, ModelStateError,
                           IntegrationError, CalibrationError, LoopTerminatedError)
