from .config import RunConfig, load_run_config, load_user_config
from .errors import FrictionUASError
from .presets import PARAMETER_NAMES

__version__ = "1.0.0"
