"""Workbench for intuitionistic modal logics of proof and knowledge."""
from .syntax import Formula, ParseError, parse, show

__all__ = ["Formula", "ParseError", "parse", "show"]
__version__ = "0.1.0"
