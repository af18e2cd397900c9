"""Logging configuration for the scenario runner"""

import os
import logging
from logging.handlers import RotatingFileHandler

from config.settings import LOG_FORMAT, MAX_LOG_SIZE, BACKUP_COUNT

LOGS_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'logs')

# Log file paths
RUNS_LOG = os.path.join(LOGS_DIR, 'runs.log')
SOLVER_LOG = os.path.join(LOGS_DIR, 'solver.log')
ERROR_LOG = os.path.join(LOGS_DIR, 'errors.log')

# Package loggers routed into the solver log
SOLVER_PACKAGES = ('electrostatics', 'waves', 'guidance', 'monitoring', 'soliton_checks')


def setup_logger(name, log_file, level=logging.INFO, max_size=MAX_LOG_SIZE,
                 backup_count=BACKUP_COUNT, console=True):
    """
    Set up a logger with both file and console handlers

    Args:
        name (str): Logger name
        log_file (str): Path to log file
        level (int): Logging level
        max_size (int): Maximum size of log file before rotation (default: 5MB)
        backup_count (int): Number of backup files to keep
        console (bool): Attach a console handler as well

    Returns:
        logging.Logger: Configured logger instance
    """
    os.makedirs(os.path.dirname(log_file), exist_ok=True)
    formatter = logging.Formatter(LOG_FORMAT, datefmt='%Y-%m-%d %H:%M:%S')

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Clear any existing handlers
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    file_handler = RotatingFileHandler(
        log_file,
        maxBytes=max_size,
        backupCount=backup_count,
        encoding='utf-8'
    )
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    if console:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    return logger


def init_run_logging(level='INFO'):
    """
    Create the runner, solver and error loggers.

    Library packages only call ``logging.getLogger(__name__)``; this wires
    their records into ``logs/solver.log`` without echoing every Newton
    iteration to the console.

    Args:
        level (str): Logging level name

    Returns:
        logging.Logger: The runner logger
    """
    numeric_level = getattr(logging, str(level).upper(), logging.INFO)
    runner = setup_logger('runs', RUNS_LOG, level=numeric_level)
    for package in SOLVER_PACKAGES:
        setup_logger(package, SOLVER_LOG, level=numeric_level, console=False)
    setup_logger('errors', ERROR_LOG, level=logging.ERROR)
    return runner


def log_error(logger_name, error_message, exc_info=None):
    """
    Log error to both specific logger and error log

    Args:
        logger_name (str): Name of the specific logger
        error_message (str): Error message to log
        exc_info (Exception, optional): Exception info to include
    """
    logger = logging.getLogger(logger_name)
    logger.error(error_message, exc_info=exc_info)

    logging.getLogger('errors').error(
        f"[{logger_name}] {error_message}",
        exc_info=exc_info
    )


def get_logger(name):
    """
    Get an existing logger by name

    Args:
        name (str): Logger name

    Returns:
        logging.Logger: Logger instance
    """
    return logging.getLogger(name)


class ScenarioLoggerAdapter(logging.LoggerAdapter):
    """Prefix messages with the scenario kind and seed"""

    def process(self, msg, kwargs):
        kind = self.extra.get('kind')
        seed = self.extra.get('seed')
        if kind is None:
            return msg, kwargs
        return f"[{kind} seed={seed}] {msg}", kwargs


def get_scenario_logger(logger_name, kind, seed):
    """
    Get a logger with scenario context

    Args:
        logger_name (str): Base logger name
        kind (str): Scenario kind
        seed (int): Scenario seed

    Returns:
        ScenarioLoggerAdapter: Logger with scenario context
    """
    return ScenarioLoggerAdapter(get_logger(logger_name), {'kind': kind, 'seed': seed})
