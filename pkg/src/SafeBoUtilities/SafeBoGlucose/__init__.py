# pylint: disable-msg=C0103
"""
SafeBoGlucose: This package provides the virtual patient and the bolus dose-guidance problem.
"""

# __init__.py
from .patient_model import (PatientModel, MealScenario, CgmTrace, simulate, true_glucose,
                            sample_times, BASAL_GLUCOSE_RANGE)
from .glycemic_metrics import (penalty, gpi, peak_cgm, smoothed, peak_index, hypo_constraint,
                               tir_metrics, COST_METRICS, HYPO_THRESHOLD, CGM_FILTER_WINDOW)
from .dose_oracle import (DoseOracle, dose_oracle, dose_sweep, optimal_dose, sweep_doses,
                          DOSE_BOUNDS, STANDARD_MEAL_CARBS, SWEEP_RESOLUTION)
from .cohort import (CalibrationReport, calibration, cohort, save_patients, load_patients,
                     COHORT_SPREAD, MAX_ATTEMPTS, SAFE_START_DOSE, PATIENT_SCHEMA_VERSION)
