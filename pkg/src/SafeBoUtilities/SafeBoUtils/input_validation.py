# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
input validation module:
This module validates user input, it throwes exceptions if validation fails
"""

import math

from SafeBoExceptions import InputError


class InputValidation():
    """ This class validates user inputs """

    @staticmethod
    def validate_input(name, text):
        """ Validating input, no None or empty """
        if text is None or (hasattr(text, '__len__') and len(text) == 0):
            raise InputError(name)

    @staticmethod
    def validate_positive(name, value):
        """ Validating a finite, strictly positive real """
        if value is None or not math.isfinite(value) or value <= 0:
            raise InputError(f"{name} must be a finite positive number, got {value}")

    @staticmethod
    def validate_nonnegative(name, value):
        """ Validating a finite real >= 0 """
        if value is None or not math.isfinite(value) or value < 0:
            raise InputError(f"{name} must be a finite nonnegative number, got {value}")

    @staticmethod
    def validate_open_interval(name, value, low, high):
        """ Validating low < value < high """
        if value is None or not low < value < high:
            raise InputError(f"{name} must lie in ({low}, {high}), got {value}")
