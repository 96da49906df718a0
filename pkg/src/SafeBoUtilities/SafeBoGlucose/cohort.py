# -------------------------------------------------------------------------
# Copyright (c) SafeBO Utilities contributors. All rights reserved.
# Licensed under the MIT License. See LICENSE.txt in the project root for
# license information.
# --------------------------------------------------------------------------
"""
Cohort module:
Virtual patient cohorts drawn around the default patient, the calibration
checks every member must pass, and JSON persistence of parameter sets.

Patient JSON schema::

    {"schema_version": 1, "patients": [{"name": ..., "body_weight": ..., ...}]}

Every PatientModel field may appear in a patient entry; missing fields take
the default patient's value.
"""

from dataclasses import dataclass, replace
from pathlib import Path

import jsons
import numpy as np

from SafeBoExceptions import CalibrationError, InputError
from SafeBoLog import Log
from SafeBoUtils import ConfigReader
from .dose_oracle import DOSE_BOUNDS, SWEEP_RESOLUTION, dose_sweep, sweep_doses
from .patient_model import BASAL_GLUCOSE_RANGE, PatientModel

_LOG = Log('glucose')

PATIENT_SCHEMA_VERSION = 1
MAX_ATTEMPTS = 100
SAFE_START_DOSE = 0.5

# log-normal spread (sigma of the log) around the default patient
COHORT_SPREAD = {
    'body_weight': 0.15,
    'meal_time_constant': 0.2,
    'insulin_time_constant': 0.15,
    'insulin_clearance': 0.1,
    'insulin_action_rate': 0.2,
    'insulin_sensitivity': 0.3,
    'glucose_effectiveness': 0.2,
    'basal_glucose': 0.1,
    'basal_rate': 0.2,
}


@dataclass(frozen=True)
class CalibrationReport:
    """ outcome of the calibration sweep of one patient """

    safe_at_start: bool
    unsafe_at_max: bool
    optimal_dose: float
    unique_optimum: bool
    interior_optimum: bool

    @property
    def passed(self):
        """ all checks hold """
        return (self.safe_at_start and self.unsafe_at_max
                and self.unique_optimum and self.interior_optimum)


def calibration(patient, resolution=SWEEP_RESOLUTION):
    """
    Calibration sweep on the noiseless simulator: the start dose keeps the
    constraint positive, the largest dose violates it, and the brute-force
    GPI optimum is unique and strictly inside (start dose, largest dose).
    """
    doses = sweep_doses(resolution)
    costs, constraints = dose_sweep(patient, doses)
    _, start = dose_sweep(patient, [SAFE_START_DOSE])
    index = int(np.argmin(costs))
    optimum = float(doses[index])
    return CalibrationReport(
        safe_at_start=bool(start[0] > 0),
        unsafe_at_max=bool(constraints[-1] < 0),
        optimal_dose=optimum,
        unique_optimum=int(np.count_nonzero(costs == costs[index])) == 1,
        interior_optimum=SAFE_START_DOSE < optimum < DOSE_BOUNDS[1])


def _draw(rng, index):
    default = PatientModel()
    values = {name: getattr(default, name) * float(np.exp(sigma * rng.standard_normal()))
              for name, sigma in COHORT_SPREAD.items()}
    low, high = BASAL_GLUCOSE_RANGE
    if not low <= values['basal_glucose'] <= high:
        return None
    return replace(default, name=f'patient-{index:02d}', **values)


def cohort(n, rng, cgm_noise_std=None):
    """
    ``n`` calibrated patients drawn around the default patient.

    Raises
    ------
    CalibrationError
        If MAX_ATTEMPTS draws for one slot all fail calibration.

    """
    if n < 1:
        raise InputError(f"cohort size must be >= 1, got {n}")
    patients = []
    for index in range(n):
        for attempt in range(1, MAX_ATTEMPTS + 1):
            patient = _draw(rng, index)
            if patient is not None and calibration(patient).passed:
                break
        else:
            raise CalibrationError(f"no calibrated draw for patient {index} "
                                   f"after {MAX_ATTEMPTS} attempts")
        if cgm_noise_std is not None:
            patient = replace(patient, cgm_noise_std=float(cgm_noise_std))
        _LOG.debug('patient drawn', name=patient.name, attempts=attempt)
        patients.append(patient)
    return patients


def save_patients(path, patients):
    """ write patients as a schema-versioned JSON document """
    document = {'schema_version': PATIENT_SCHEMA_VERSION,
                'patients': [jsons.dump(patient, strip_properties=True, strip_privates=True)
                             for patient in patients]}
    Path(path).write_text(jsons.dumps(document, jdkwargs={'indent': 2, 'sort_keys': True}))
    return Path(path)


def load_patients(path):
    """
    Read patients written by ``save_patients``.

    Raises
    ------
    InputError
        On a missing file, a wrong schema version or invalid parameters.

    """
    document = ConfigReader.read_config_values(path)
    if document.get('schema_version') != PATIENT_SCHEMA_VERSION:
        raise InputError(f"{path}: unsupported patient schema_version "
                         f"{document.get('schema_version')!r}")
    entries = document.get('patients')
    if not isinstance(entries, list) or not entries:
        raise InputError(f"{path}: 'patients' must be a nonempty list")
    known = set(PatientModel.__dataclass_fields__)
    patients = []
    for index, entry in enumerate(entries):
        unknown = sorted(set(entry) - known)
        if unknown:
            raise InputError(f"{path}: patient {index} has unknown fields {unknown}")
        try:
            patients.append(jsons.load(entry, PatientModel))
        except jsons.exceptions.JsonsError as err:
            raise InputError(f"{path}: patient {index} is invalid: {err}") from err
    return patients
