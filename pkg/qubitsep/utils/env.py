"""
Environment access for qubitsep.

A ``.env`` file in the working directory is loaded once at import. Only
ambient settings (currently ``LOG_LEVEL``) are read; nothing here changes a
numeric result.
"""

import os
from typing import Iterable, Optional

from dotenv import load_dotenv

load_dotenv(override=False)


def get_env_variable(var_name: str, default: Optional[str] = None) -> str:
    """
    Value of ``var_name``, or ``default`` when it is unset.

    Raises:
        EnvironmentError: if the variable is unset and no default is given
    """
    value = os.environ.get(var_name)
    if value is not None:
        return value
    if default is not None:
        return default
    raise EnvironmentError(f"The environment variable {var_name} was missing, abort...")


def get_env_choice(var_name: str, choices: Iterable[str], default: str) -> str:
    """Upper-cased value of ``var_name`` checked against ``choices``.

    Raises:
        ValueError: if the value is not one of ``choices``
    """
    allowed = tuple(choices)
    value = get_env_variable(var_name, default).strip().upper()
    if value not in allowed:
        raise ValueError(f"{var_name} is not one of {', '.join(allowed)}")
    return value
