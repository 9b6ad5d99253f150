"""grammarctl: a unification-grammar toolkit.

Typed feature structures over bounded-complete type hierarchies, a
TDL-style grammar format, exhaustive bottom-up chart parsing, Minimal
Recursion Semantics extraction with DMRS conversion, treebank profiles
with gold decisions, and evaluation metrics.  Ships with *esfrag*, a
small Spanish fragment grammar used throughout the test fixtures.
"""

__version__ = "0.1.0"
