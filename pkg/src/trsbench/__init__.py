"""Term rewriting, Turing machine encodings and bounded property checkers."""

from .checkers import CheckOutcome, Fuel, Verdict
from .terms import App, Term, Var, app, const
from .trs import Rule, Trs, validate_trs
from .turing import Configuration, TuringMachine

__all__ = [
    "App", "CheckOutcome", "Configuration", "Fuel", "Rule", "Term", "Trs",
    "TuringMachine", "Var", "Verdict", "app", "const", "validate_trs",
]
