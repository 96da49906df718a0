# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
log module:
This module provides log functionalities through the standard logging tree.
All loggers live under the ``safebo`` namespace; handlers are configured by the
command line entry point only.
"""

import logging

ROOT_LOGGER_NAME = 'safebo'


class Log:
    """ The class performs log action """

    def __init__(self, name=None):
        full_name = ROOT_LOGGER_NAME if not name else f'{ROOT_LOGGER_NAME}.{name}'
        self.logger = logging.getLogger(full_name)

    def log(self, telemetry_instance):
        """ Log a structured instance, e.g. a per-method summary """

        self.logger.info('%s', telemetry_instance)

    def log_event(self, message, **fields):
        """ Log simple message in string, with optional key=value fields """

        self.logger.info('%s%s', message, self._format_fields(fields))

    def warning(self, message, **fields):
        """ Log a warning """

        self.logger.warning('%s%s', message, self._format_fields(fields))

    def debug(self, message, **fields):
        """ Log a tracing message; fields are only formatted when enabled """

        if self.logger.isEnabledFor(logging.DEBUG):
            self.logger.debug('%s%s', message, self._format_fields(fields))

    @staticmethod
    def _format_fields(fields):
        if not fields:
            return ''
        return ' ' + ' '.join(f'{key}={value}' for key, value in sorted(fields.items()))

    @staticmethod
    def configure(verbose=False):
        """ Attach a stream handler to the package logger (CLI use) """

        logger = logging.getLogger(ROOT_LOGGER_NAME)
        if not logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(
                logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s'))
            logger.addHandler(handler)
        logger.setLevel(logging.DEBUG if verbose else logging.INFO)
        return logger
