import os
import shlex
from typing import List, Optional

SMT_COMMAND_VARIABLE = "POMDP_SHIELD_SMT_CMD"


def smt_command() -> Optional[List[str]]:
    """
    Returns the external solver command line, or None when the in-memory backend should be used.

    The command is read from POMDP_SHIELD_SMT_CMD and split shell-style,
    e.g. ``z3 -in -smt2``.
    """
    value = os.environ.get(SMT_COMMAND_VARIABLE, "").strip()
    if not value:
        return None
    return shlex.split(value)
