"""Formal arithmetic with Gödel numbering, proof checking and self-reference.

Submodules:

- ``syntax``: terms, formulas, parsing, printing, substitution
- ``codec``: prime-power Gödel numbers for formulas and proofs
- ``semantics``: bounded truth evaluation
- ``primrec``: primitive recursive functions
- ``representation``: arithmetic formulas for primitive recursive functions
- ``kernel`` and ``derive``: proof checking, proof generation, bounded search
- ``provability``: the predicates prf and q
- ``diagonal``: the diagonal sentence and its case report
- ``cli``: the ``pparith`` command
"""

from .codec import SymbolTable, decode_formula, decode_proof, encode_formula, encode_proof
from .kernel import SYSTEMS, Proof, check, get_system, parse_proof
from .syntax import parse, print_formula

__version__ = "0.1.0"

__all__ = [
    "SymbolTable", "encode_formula", "decode_formula", "encode_proof", "decode_proof",
    "SYSTEMS", "Proof", "check", "get_system", "parse_proof", "parse", "print_formula",
]
