"""Exact Khovanov, reduced Khovanov and Bar-Natan homology of closures of
3-strand braids, by local simplification of tangle complexes (delooping and
Gaussian elimination), with a cube-of-resolutions oracle and verifiers for
the closed-form decompositions of the Murasugi families."""

from .algebra import (
    BigradedGroups, euler_characteristic, field_dims, homology,
    smith_normal_form, specialize_blt, specialize_reduced,
    specialize_unreduced, spectral_pages,
)
from .braid import (
    BraidLetter, BraidWord, ClosureMeta, MurasugiSpec, closure_meta,
    murasugi_word, parse_word,
)
from .closure import AComplex, AElem, build_Aj, close_complex, full_pipeline
from .complexes import TangleComplex, letter_complex, scan_word, simplify, stack
from .oracle import cube_khovanov, kauffman_bracket

__version__ = "0.1.0"
__all__ = [
    "AComplex", "AElem", "BigradedGroups", "BraidLetter", "BraidWord",
    "ClosureMeta", "MurasugiSpec", "TangleComplex", "build_Aj",
    "close_complex", "closure_meta", "cube_khovanov", "euler_characteristic",
    "field_dims", "full_pipeline", "homology", "kauffman_bracket",
    "letter_complex", "murasugi_word", "parse_word", "scan_word",
    "simplify", "smith_normal_form", "specialize_blt", "specialize_reduced",
    "specialize_unreduced", "spectral_pages", "stack",
]
