"""Well-formedness and balancedness of languages over paired brackets.

Context-free grammars and (2-copy) linear tree-to-word transducers whose
outputs are bracket words: is every output a prefix of a Dyck word, and is
every output balanced?
"""
from .brackets import BracketAlphabet, Letter, format_word, parse_word, reduce
from .grammar import Grammar, RawGrammar, load_grammar, normalize, parse_grammar
from .transducer import Transducer, decide_balanced_2ltw, load_transducer, parse_transducer
from .wellformed import decide_balanced_cfg, decide_well_formed

__version__ = "0.1.0"

__all__ = [
    "BracketAlphabet",
    "Letter",
    "parse_word",
    "format_word",
    "reduce",
    "Grammar",
    "RawGrammar",
    "parse_grammar",
    "load_grammar",
    "normalize",
    "decide_well_formed",
    "decide_balanced_cfg",
    "Transducer",
    "parse_transducer",
    "load_transducer",
    "decide_balanced_2ltw",
]
