"""Calculus objects: grammar, reduction and typing for each calculus id."""

from .base import Calculus, Derivation, Redex, Sequent, TypeEnv
from .lmmt import FRAGMENTS, LMMT
from .lmmt_vn import LMMTVN, classify_vn
from .monadic import IVC, STLC, VC, LambdaMuM, sequence

CALCULUS_IDS = ("lmmt", "lmmt-vn", "lm-M", "vc", "ivc", "stlc")


def get_calculus(name: str, fragment: str = "full", restricted: bool = False) -> Calculus:
    match name:
        case "lmmt":
            return LMMT(fragment)
        case "lmmt-vn":
            return LMMTVN()
        case "lm-M":
            return LambdaMuM(restricted)
        case "vc":
            return VC()
        case "ivc":
            return IVC()
        case "stlc":
            return STLC()
    raise ValueError(f"unknown calculus {name!r}")


__all__ = [
    "CALCULUS_IDS", "FRAGMENTS", "Calculus", "Derivation", "IVC", "LMMT", "LMMTVN",
    "LambdaMuM", "Redex", "STLC", "Sequent", "TypeEnv", "VC", "classify_vn",
    "get_calculus", "sequence",
]
