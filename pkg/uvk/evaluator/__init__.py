from uvk.evaluator.classify import (
    BoolVal,
    Canonical,
    Classification,
    Numeral,
    Stuck,
    classify,
)
from uvk.evaluator.nbe import (
    DEFAULT_FUEL,
    Evaluator,
    Strategy,
    evaluate,
    normalize,
    quote,
)

__all__ = [
    "BoolVal",
    "Canonical",
    "Classification",
    "DEFAULT_FUEL",
    "Evaluator",
    "Numeral",
    "Strategy",
    "Stuck",
    "classify",
    "evaluate",
    "normalize",
    "quote",
]
