from uvk.kernel.checker import (
    Context,
    Definition,
    Postulate,
    TypeChecker,
    check,
    convertible,
    elaborate,
    infer,
    register,
    whnf,
)
from uvk.kernel.env import GlobalEntry, GlobalEnv

__all__ = [
    "Context",
    "Definition",
    "GlobalEntry",
    "GlobalEnv",
    "Postulate",
    "TypeChecker",
    "check",
    "convertible",
    "elaborate",
    "infer",
    "register",
    "whnf",
]
