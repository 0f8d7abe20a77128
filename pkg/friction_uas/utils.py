import logging
import os

# Name of the package-wide logger; every module logs through a child of it
LOGGER_NAME = "FrictionUAS"


def get_package_directory():
    """
    Returns the directory containing the friction_uas package.

    Returns:
        str: The absolute path to the directory holding this package.
    """
    # __file__ gives the path of the current file; os.path.abspath ensures it's absolute.
    current_file_path = os.path.abspath(__file__)
    return os.path.dirname(current_file_path)


def get_project_directory():
    """
    Returns the repository root, i.e. the parent of the package directory.

    Returns:
        str: The absolute path to the project directory.
    """
    return os.path.dirname(get_package_directory())


def get_default_config_path():
    """
    Returns the path of the example configuration shipped with the repository.

    Returns:
        str: The absolute path to example_config.toml.
    """
    return os.path.join(get_project_directory(), "example_config.toml")


def get_logger(name):
    """
    Returns a logger below the package logger.

    Args:
        name (str): Short module name, e.g. "sim" or "uas".

    Returns:
        logging.Logger: The child logger "FrictionUAS.<name>".
    """
    return logging.getLogger(f"{LOGGER_NAME}.{name}")


def configure_logging(verbose=False):
    """
    Attaches a stream handler to the package logger. Calling it twice does not duplicate output.

    Args:
        verbose (bool): Log at DEBUG level when true, INFO otherwise.
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(
            "[%(levelname)s] %(name)s: %(message)s"))
        logger.addHandler(handler)
