import logging.config
import sys

from uvk.settings import settings

# Deep numerals and long eliminator chains recurse through the evaluator.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

logging.config.dictConfig(settings.logging.dict(by_alias=True))
