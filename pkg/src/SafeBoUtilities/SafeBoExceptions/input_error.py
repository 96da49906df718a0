# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
input_error module:
This module include custom exceptions
"""


class InputError(ValueError):

    """ This class provides custom exception for validating input data """


class ConfigValidationError(InputError):
    """ Raised with every violation found in a run configuration """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
