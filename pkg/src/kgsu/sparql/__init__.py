"""SPARQL subset: parsing, evaluation, and result serialization."""

from kgsu.sparql.ast import ConstructQuery, SelectQuery, Unsupported, Var  # noqa: F401
from kgsu.sparql.evaluate import EvalError, Solution, evaluate  # noqa: F401
from kgsu.sparql.parser import parse_query  # noqa: F401
from kgsu.sparql.results import solutions_from_json, solutions_to_json  # noqa: F401
