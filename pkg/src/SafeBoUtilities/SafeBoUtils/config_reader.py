# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Config Reader:
This module is used to read the JSON documents that drive experiments
(run configurations, patient files, summaries).
"""

import json
from pathlib import Path

from SafeBoExceptions import InputError
from .input_validation import InputValidation


# pylint: disable-msg=R0903
class ConfigReader:
    """ class to read configuration """

    @staticmethod
    def read_config_values(file_path):
        """ read configuration; the document root must be a JSON object """
        InputValidation.validate_input('file_path', file_path)
        path = Path(file_path)
        if not path.is_file():
            raise InputError(f"config file {file_path} not found")
        with open(path) as json_file:
            try:
                json_config = json.load(json_file)
            except json.JSONDecodeError as err:
                raise InputError(f"config file {file_path} is not valid JSON: {err}") from err
        if not isinstance(json_config, dict):
            raise InputError(f"config file {file_path} must contain a JSON object")
        return json_config
