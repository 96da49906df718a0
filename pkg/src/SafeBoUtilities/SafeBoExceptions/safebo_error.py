# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
safebo_error module:
Runtime failures raised by the numerical core, the loop and the simulator.
"""


class SafeBoError(Exception):
    """ Base class for runtime failures """


class SingularCovarianceError(SafeBoError):
    """ Cholesky factorization failed even at the largest jitter level """

    def __init__(self, jitter, size):
        self.jitter = jitter
        self.size = size
        super().__init__(
            f"covariance matrix of size {size} is not positive definite "
            f"at jitter {jitter:.3e}"
        )


class ModelStateError(SafeBoError):
    """ A model was used in a state that does not allow the operation """


class IntegrationError(SafeBoError):
    """ The patient ODE produced a non-finite state """

    def __init__(self, step, time_min):
        self.step = step
        self.time_min = time_min
        super().__init__(f"non-finite state at integration step {step} (t={time_min} min)")


class CalibrationError(SafeBoError):
    """ No patient draw passed the calibration checks """


class LoopTerminatedError(SafeBoError):
    """ A safe BO loop stopped before its budget; carries the partial records """

    def __init__(self, records, cause):
        self.records = list(records)
        self.cause = cause
        super().__init__(
            f"loop stopped after {len(self.records)} records: {cause}"
        )
