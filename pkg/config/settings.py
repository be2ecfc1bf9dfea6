"""
Django settings for config project.

Generated by 'django-admin startproject' using Django 5.1.

For more information on this file, see
https://docs.djangoproject.com/en/5.1/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.1/ref/settings/
"""

import math
import os
from pathlib import Path

from dotenv import load_dotenv

from state_transfer.utils.env_utils import get_worker_count, PROJECT_MODE

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

if PROJECT_MODE == 'dev':
    # App. DEV env. settings
    load_dotenv(dotenv_path=BASE_DIR / 'config' / 'envs' / 'dev' / 'state_transfer_dev.env')

SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-0q!v7t#kz3x8m$protected-state-transfer-cli')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS: list[str] = []

# No persistence - all results are written to the sweep output files
DATABASES: dict = {}

# Verbosity of unit tests
# ERROR - only log errors
# FAILED - only log failed tests
# PASSED - only log passed tests
# ALL - log all tests
# NO-LOGGING - disable logging
# SUMMARY - only log tests summary
TEST_LOGGING_LEVEL = os.getenv('TEST_LOGGING_LEVEL', 'NO-LOGGING')

# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',

    'rest_framework',
    'state_transfer',
]

USE_I18N = False

USE_TZ = True

TIME_ZONE = 'UTC'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

TEST_RUNNER = 'state_transfer.tests.test_utils.CustomTestRunner'

# === Filesystem configuration ===
LOGS_DIR_NAME = os.getenv('LOGS_DIR_NAME', 'logs')                                  # Parent logs folder
os.makedirs(LOGS_DIR_NAME, exist_ok=True)

SWEEP_OUTPUT_DIR = os.getenv('SWEEP_OUTPUT_DIR', 'sweeps')                          # Default sweep output folder

# == Loging ==
ERROR_LOGS_DIR = os.path.join(LOGS_DIR_NAME, 'errors')

ERROR_LOG_FILES_CONFIG = {}

for error_type in ('computation', 'configuration', 'output'):
    error_type_dir = os.path.join(ERROR_LOGS_DIR, error_type)
    os.makedirs(error_type_dir, exist_ok=True)
    ERROR_LOG_FILES_CONFIG[error_type] = os.path.join(error_type_dir, f'{error_type}_errors.log')

TEST_SUITE_LOGS_DIR = os.path.join(LOGS_DIR_NAME, 'test_suite')
os.makedirs(TEST_SUITE_LOGS_DIR, exist_ok=True)
TEST_SUITE_LOGS_FILE = os.path.join(TEST_SUITE_LOGS_DIR, 'test_suite.log')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'json': {
            '()': 'state_transfer.utils.custom_json_formatter.CustomJsonFormatter',
            'format': '%(asctime)s %(message)s %(levelname)s %(traceback)s %(command_info)s %(error_id)s',
        },
        'json_stdout': {
            '()': 'state_transfer.utils.custom_json_formatter.CustomJsonFormatter',
            'format': '%(asctime)s %(message)s %(levelname)s %(traceback)s %(command_info)s %(error_id)s',
            'json_indent': 4,
        },
        'progress': {
            'format': '%(asctime)s %(levelname)s [%(name)s] %(message)s'
        },
        'test_suite': {
            'format': '%(message)s'
        }
    },
    'handlers': {
        # Handler for computation errors (solver, degenerate outcomes, consistency checks)
        'computation_errors_file': {
            'level': 'ERROR',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': ERROR_LOG_FILES_CONFIG['computation'],
            'maxBytes': 1024 * 1024 * 5,    # 5 MB
            'backupCount': 4,
            'delay': True,
            'formatter': 'json',
        },
        # Handler for configuration errors (flags, config files, parameter domains)
        'configuration_errors_file': {
            'level': 'ERROR',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': ERROR_LOG_FILES_CONFIG['configuration'],
            'maxBytes': 1024 * 1024 * 5,
            'backupCount': 4,
            'delay': True,
            'formatter': 'json',
        },
        # Handler for output (I/O) errors
        'output_errors_file': {
            'level': 'ERROR',
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': ERROR_LOG_FILES_CONFIG['output'],
            'maxBytes': 1024 * 1024 * 5,
            'backupCount': 4,
            'delay': True,
            'formatter': 'json',
        },
        # Console logging
        'console_logger': {
            'level': 'ERROR',
            'class': 'logging.StreamHandler',
            'formatter': 'json_stdout',
        },
        'progress_console_logger': {
            'level': 'INFO',
            'class': 'logging.StreamHandler',
            'formatter': 'progress',
        },
        # Console logging test suite
        'test_suite_console_logger': {
            'level': 'INFO',
            'class': 'logging.StreamHandler',
            'formatter': 'test_suite',
        },
    },
    'loggers': {
        'computation': {
            'handlers': ['computation_errors_file', 'console_logger'],
            'level': 'ERROR',
            'propagate': False,
        },
        'configuration': {
            'handlers': ['configuration_errors_file', 'console_logger'],
            'level': 'ERROR',
            'propagate': False,
        },
        'output': {
            'handlers': ['output_errors_file', 'console_logger'],
            'level': 'ERROR',
            'propagate': False,
        },
        'state_transfer': {
            'handlers': ['progress_console_logger'],
            'level': os.getenv('PROGRESS_LOGGING_LEVEL', 'WARNING'),
            'propagate': False,
        },
        'test_suite': {
            'handlers': ['test_suite_console_logger'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}

# Controls if per-chunk sweep progress is logged
VERBOSE_SWEEP_LOGGING = os.getenv('VERBOSE_SWEEP_LOGGING', 'False') == 'True'

# Test suite
TEST_SUITE_FILE_LOGGING_ENABLED = os.getenv('TEST_SUITE_FILE_LOGGING_ENABLED', 'False') == 'True'
# == Loging end ==

# === Filesystem configuration end ===

# === Fock-space Settings ===
FOCK_N_MAX = int(os.getenv('FOCK_N_MAX', 2))                                        # Photons per path mode
PUMP_N_MAX = int(os.getenv('PUMP_N_MAX', 8))                                        # Pump Fock truncation (oracle only)
ORACLE_MAX_DIMENSION = int(os.getenv('ORACLE_MAX_DIMENSION', 10000))                # Dense expm limit
PUMP_REGIME_BOUND = float(os.getenv('PUMP_REGIME_BOUND', 0.1))                      # Max |g * pump amplitude|
PERTURBATIVE_ORDER = int(os.getenv('PERTURBATIVE_ORDER', 2))                        # Retained power of g in amplitudes
QUTRIT_LEAKAGE_TOLERANCE = float(os.getenv('QUTRIT_LEAKAGE_TOLERANCE', 1e-6))      # Discardable multi-photon weight
UNITARITY_TOLERANCE = float(os.getenv('UNITARITY_TOLERANCE', 1e-12))

# === Channel Settings ===
PSD_TOLERANCE = float(os.getenv('PSD_TOLERANCE', 1e-10))
CP_TOLERANCE = float(os.getenv('CP_TOLERANCE', 1e-12))
TRACE_TOLERANCE = float(os.getenv('TRACE_TOLERANCE', 1e-12))
SPEED_OF_LIGHT = float(os.getenv('SPEED_OF_LIGHT', 299792458.0))                    # m/s

# === Protocol Settings ===
DEFAULT_G = float(os.getenv('DEFAULT_G', 1e-3))
DEFAULT_ALPHA = float(os.getenv('DEFAULT_ALPHA', 1.0))
BOB_RETARDER_PHASE = float(os.getenv('BOB_RETARDER_PHASE', math.pi))

# === Distillation Settings ===
MATCHING_K_MAX = float(os.getenv('MATCHING_K_MAX', 60))
MATCHING_YIELD_TOLERANCE = float(os.getenv('MATCHING_YIELD_TOLERANCE', 1e-10))
THRESHOLD_P_TOLERANCE = float(os.getenv('THRESHOLD_P_TOLERANCE', 1e-6))
THRESHOLD_THETA_TOLERANCE_DEG = float(os.getenv('THRESHOLD_THETA_TOLERANCE_DEG', 1e-3))

# === Concurrency Settings ===

# Switching between the sweep runner implementations
# threading - ThreadPoolExecutor
# multiprocessing - ProcessPoolExecutor + Manager().Queue logging
CONCURRENT_SIMULATION_MODE = os.getenv('CONCURRENT_SIMULATION_MODE', 'threading')

# Number of CPU threads
CPU_THREADS = int(os.getenv('CPU_THREADS', 8))

# *2 threads are reserved for the main process; PST_WORKERS overrides
SWEEP_WORKERS = get_worker_count(max(1, CPU_THREADS - 2))

# Grid points handed to a worker at once
SWEEP_CHUNK_SIZE = int(os.getenv('SWEEP_CHUNK_SIZE', 21))
# === Concurrency Settings end ===
