"""Finite-state One-Level Prosodic Morphology with a Temiar grammar fragment."""

from .alphabet import PhonemeSpec, Symbol, SymbolSpace, build_space, default_space, plain_space
from .fsa import Automaton
from .temiar import Grammar

__all__ = ["Automaton", "Grammar", "PhonemeSpec", "Symbol", "SymbolSpace", "build_space",
           "default_space", "plain_space"]
__version__ = "0.1.0"
